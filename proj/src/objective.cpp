// SPDX-License-Identifier: Apache-2.0

#include "tlpo/objective.hpp"

#include <algorithm>
#include <cmath>

#include "tlpo/errors.hpp"

namespace tlpo {

const char* advantage_variant_name(AdvantageVariant v) {
  switch (v) {
    case AdvantageVariant::TlpoWeighted: return "weighted";
    case AdvantageVariant::Unweighted: return "unweighted";
    case AdvantageVariant::GrpoStyle: return "grpo";
  }
  return "weighted";
}

AdvantageVariant advantage_variant_from_name(const std::string& name) {
  if (name == "weighted") return AdvantageVariant::TlpoWeighted;
  if (name == "unweighted") return AdvantageVariant::Unweighted;
  if (name == "grpo") return AdvantageVariant::GrpoStyle;
  throw ConfigError("unknown advantage variant: " + name);
}

AdvantageVector compute_advantages(const CandidateSet& set,
                                   AdvantageVariant variant) {
  const std::size_t n = set.candidates.size();
  if (n < 2) throw ConfigError("advantage computation needs >= 2 candidates");
  for (const Candidate& c : set.candidates) {
    if (c.old_prob <= 0.0)
      throw ConfigError("candidate probabilities must be positive");
    if (c.reward != 1 && c.reward != -1)
      throw ConfigError("candidate rewards must be +1 or -1");
  }

  AdvantageVector adv;
  adv.variant = variant;
  adv.values.assign(n, 0.0);

  if (variant == AdvantageVariant::TlpoWeighted) {
    double prob_sum = 0.0, weighted_reward = 0.0;
    for (const Candidate& c : set.candidates) {
      prob_sum += c.old_prob;
      weighted_reward += c.old_prob * c.reward;
    }
    adv.mu = weighted_reward / prob_sum;
    double z = 0.0;
    for (const Candidate& c : set.candidates)
      z += std::abs(c.old_prob * (c.reward - adv.mu));
    adv.z = z;
    if (z == 0.0) {
      adv.degenerate = true;
      return adv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Candidate& c = set.candidates[i];
      adv.values[i] = c.old_prob * (c.reward - adv.mu) / z;
    }
    return adv;
  }

  double mean = 0.0;
  for (const Candidate& c : set.candidates) mean += c.reward;
  mean /= static_cast<double>(n);
  adv.mu = mean;

  if (variant == AdvantageVariant::Unweighted) {
    bool all_zero = true;
    for (std::size_t i = 0; i < n; ++i) {
      adv.values[i] = set.candidates[i].reward - mean;
      if (adv.values[i] != 0.0) all_zero = false;
    }
    if (all_zero) {
      adv.values.assign(n, 0.0);
      adv.degenerate = true;
    }
    return adv;
  }

  // Group-relative: population standard deviation.
  double var = 0.0;
  for (const Candidate& c : set.candidates) {
    const double d = c.reward - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  const double sigma = std::sqrt(var);
  adv.z = sigma;
  if (sigma == 0.0) {
    adv.degenerate = true;
    return adv;
  }
  for (std::size_t i = 0; i < n; ++i)
    adv.values[i] = (set.candidates[i].reward - mean) / sigma;
  return adv;
}

double kl_estimate(double p_theta, double p_ref) {
  if (!(p_theta > 0.0) || p_theta > 1.0 || !(p_ref > 0.0) || p_ref > 1.0)
    throw ConfigError("kl_estimate: probabilities must be in (0, 1]");
  const double r = p_ref / p_theta;
  return r - std::log(r) - 1.0;
}

double clipped_term(double p_theta, double p_old, double advantage, double eps) {
  if (!(p_old > 0.0)) throw ConfigError("clipped_term: p_old must be positive");
  if (!(eps > 0.0) || eps >= 1.0)
    throw ConfigError("clipped_term: eps must be in (0, 1)");
  const double r = p_theta / p_old;
  const double clipped = std::clamp(r, 1.0 - eps, 1.0 + eps);
  return std::min(r * advantage, clipped * advantage);
}

ObjectiveValue tlpo_objective(const CandidateSet& set, const PolicyTable& theta,
                              const PolicyTable& ref, const ObjectiveConfig& config,
                              SparseGradient* grad_out) {
  ObjectiveValue out;
  const std::size_t n = set.candidates.size();
  if (n < 2) throw ConfigError("objective needs >= 2 candidates");

  const ContextKey key = theta.key_of(set.context);
  if (grad_out) {
    grad_out->key = key;
    grad_out->d_logits.assign(static_cast<std::size_t>(theta.vocab_size()), 0.0);
    grad_out->d_tag_bias.fill(0.0);
  }

  const AdvantageVector adv = compute_advantages(set, config.variant);
  if (adv.degenerate) {
    out.degenerate = true;
    return out;
  }

  const Distribution dist_theta = theta.dist_for_key(key);
  const Distribution dist_ref = ref.dist_for_key(key);
  const double inv_n = 1.0 / static_cast<double>(n);

  // dJ/d pi_theta(t_i), to be chained through the softmax below.
  std::vector<double> dj_dp(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const Candidate& c = set.candidates[i];
    const std::size_t tok = static_cast<std::size_t>(c.token);
    CandidateTerm term;
    term.token = c.token;
    term.p_old = c.old_prob;
    term.p_theta = dist_theta.probs[tok];
    term.p_ref = dist_ref.probs[tok];
    term.reward = c.reward;
    term.advantage = adv.values[i];
    term.ratio = term.p_theta / term.p_old;

    const double unclipped = term.ratio * term.advantage;
    const double clipped =
        std::clamp(term.ratio, 1.0 - config.clip_eps, 1.0 + config.clip_eps) *
        term.advantage;
    const double surr = std::min(unclipped, clipped);
    // Ties take the unclipped branch, so "clipped" means strictly binding.
    term.clipped = clipped < unclipped;

    term.kl = kl_estimate(term.p_theta, term.p_ref);

    out.surrogate += inv_n * surr;
    out.kl += inv_n * term.kl;

    // Surrogate derivative: A/p_old on the active unclipped branch, zero when
    // the clip is binding. KL derivative: d(r - ln r - 1)/dp = -(r - 1)/p.
    double g = term.clipped ? 0.0 : term.advantage / term.p_old;
    const double rho = term.p_ref / term.p_theta;
    g += config.kl_beta * (rho - 1.0) / term.p_theta;
    dj_dp[i] = inv_n * g;

    out.per_candidate.push_back(term);
  }
  out.total = out.surrogate - config.kl_beta * out.kl;

  if (grad_out) {
    // d pi_i / d z_j = pi_i (delta_ij - pi_j), all candidates share the row.
    double weighted_sum = 0.0;  // sum_i dj_dp[i] * pi_i
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t tok = static_cast<std::size_t>(set.candidates[i].token);
      weighted_sum += dj_dp[i] * dist_theta.probs[tok];
    }
    for (std::size_t j = 0; j < grad_out->d_logits.size(); ++j)
      grad_out->d_logits[j] = -dist_theta.probs[j] * weighted_sum;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t tok = static_cast<std::size_t>(set.candidates[i].token);
      grad_out->d_logits[tok] += dj_dp[i] * dist_theta.probs[tok];
    }
    if (theta.tag_coupling()) {
      const auto& tags = theta.tags();
      for (std::size_t j = 0; j < grad_out->d_logits.size(); ++j)
        grad_out->d_tag_bias[static_cast<std::size_t>(tags[j])] +=
            grad_out->d_logits[j];
    }
  }
  return out;
}

}  // namespace tlpo
