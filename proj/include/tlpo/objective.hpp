#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// The token-level objective and its exact gradient.
//
// Advantages: the weighted form multiplies the centered reward by the
// old-policy probability and normalizes so |A| sums to 1; the unweighted
// ablation uses the plain centered reward; the group-relative ablation
// divides the centered reward by the population standard deviation.
//
// Surrogate: per candidate, min(r*A, clip(r, 1-eps, 1+eps)*A) with
// r = pi_theta / pi_old, minus beta times the unbiased KL estimate to the
// reference policy at the same token; terms are averaged with 1/N. The
// gradient follows the active min branch (unclipped at exact ties) and flows
// through the softmax of the row, including the per-group bias when the
// policy couples tags.
//

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tlpo/exploration.hpp"
#include "tlpo/policy.hpp"

namespace tlpo {

enum class AdvantageVariant : std::uint8_t {
  TlpoWeighted,  // A_i = p_i (R_i - mu) / Z
  Unweighted,    // A_i = R_i - mean(R)
  GrpoStyle,     // A_i = (R_i - mean(R)) / sigma_pop
};

const char* advantage_variant_name(AdvantageVariant v);
AdvantageVariant advantage_variant_from_name(const std::string& name);

struct AdvantageVector {
  std::vector<double> values;
  double mu = 0.0;  // probability-weighted mean (weighted) or plain mean
  double z = 0.0;   // normalizer (weighted) or sigma (group-relative)
  AdvantageVariant variant = AdvantageVariant::TlpoWeighted;
  bool degenerate = false;  // all rewards equal: zero advantages, skip the set
};

AdvantageVector compute_advantages(const CandidateSet& set,
                                   AdvantageVariant variant);

/// Unbiased single-sample KL estimate: r - ln r - 1 with r = p_ref/p_theta.
/// Non-negative; zero iff the probabilities agree. Both args must be in (0,1].
double kl_estimate(double p_theta, double p_ref);

/// min(r*A, clip(r, 1-eps, 1+eps)*A), r = p_theta/p_old.
double clipped_term(double p_theta, double p_old, double advantage, double eps);

struct CandidateTerm {
  std::int32_t token = 0;
  double p_old = 0.0;
  double p_theta = 0.0;
  double p_ref = 0.0;
  int reward = 0;
  double advantage = 0.0;
  double ratio = 0.0;
  bool clipped = false;  // clipped branch active and binding
  double kl = 0.0;
};

struct ObjectiveValue {
  double surrogate = 0.0;  // (1/N) sum of min terms
  double kl = 0.0;         // (1/N) sum of KL estimates, >= 0
  double total = 0.0;      // surrogate - beta * kl
  bool degenerate = false;
  std::vector<CandidateTerm> per_candidate;
};

struct ObjectiveConfig {
  double clip_eps = 0.2;
  double kl_beta = 0.04;
  AdvantageVariant variant = AdvantageVariant::TlpoWeighted;
};

/// Evaluates Eq.-4-style objective for one candidate set against the current
/// policy and the fixed reference. Old-policy probabilities come from the
/// set itself (frozen at selection time). If grad_out is non-null it receives
/// dJ/d(row params) for the set's context row under theta (maximization
/// convention). Degenerate sets contribute zero value and zero gradient.
ObjectiveValue tlpo_objective(const CandidateSet& set, const PolicyTable& theta,
                              const PolicyTable& ref, const ObjectiveConfig& config,
                              SparseGradient* grad_out = nullptr);

}  // namespace tlpo
