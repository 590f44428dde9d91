#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Training loop: sample a prompt batch under the current policy, locate the
// confusion point of each response, build top-N candidate sets with lookahead
// rewards, snapshot the policy as pi_old, then run p gradient-ascent
// iterations of the clipped objective against that fixed snapshot. Clean
// responses are discarded; the reference policy never changes.
//

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlpo/corpus.hpp"
#include "tlpo/exploration.hpp"
#include "tlpo/objective.hpp"
#include "tlpo/policy.hpp"

namespace tlpo {

struct TrainConfig {
  int candidate_count = 16;                           // N
  int lookahead = 3;                                  // k
  int inner_iterations = 2;                           // p
  int steps = 200;                                    // M
  int batch_size = 8;
  double step_size = 1.5;                             // alpha before scheduling
  double clip_eps = 0.2;
  double kl_beta = 0.04;
  EnglishMode mode = EnglishMode::Neutral;
  AdvantageVariant variant = AdvantageVariant::TlpoWeighted;
  SelectionStrategy strategy = SelectionStrategy::Ranked;
  int max_response_len = 0;       // 0: use the corpus spec value
  bool greedy_lookahead = true;
  std::uint64_t seed = 1;
  int incident_limit = 10;
  int checkpoint_interval = 0;    // steps between periodic checkpoints; 0 = off
  std::string checkpoint_dir;    // required when checkpoint_interval > 0
  bool trace_inner = false;      // record per-iteration ratio inputs

  void validate() const;
};

/// Step-size schedule: linear warmup over the first 10% of steps, then cosine
/// decay from alpha down to 10% of alpha at the final step.
double schedule_alpha(const TrainConfig& config, int step);

struct StepStats {
  int step = 0;
  double alpha = 0.0;
  int candidate_sets = 0;
  int clean_responses = 0;
  int degenerate_sets = 0;
  double objective = 0.0;   // batch mean total
  double surrogate = 0.0;
  double kl_mean = 0.0;     // mean per-candidate KL estimate across sets
  int incidents = 0;
};

/// One ratio-input record per (inner iteration, set, candidate) when tracing.
struct InnerTrace {
  int iteration = 0;
  int set_index = 0;
  std::int32_t token = 0;
  double p_old = 0.0;
  double advantage = 0.0;
  double p_theta = 0.0;
};

struct TrainedContext {
  ContextKey key;
  std::vector<std::int32_t> candidates;  // explored set at first visit
  int first_step = 0;
};

struct TrainState {
  PolicyTable theta;
  PolicyTable ref;
  int step = 0;
  std::int64_t confusion_hits = 0;
  std::int64_t clean_responses = 0;
  std::int64_t degenerate_sets = 0;
  int incidents = 0;
  std::map<ContextKey, TrainedContext> trained_contexts;
  std::vector<StepStats> history;
  std::vector<InnerTrace> traces;  // populated only with trace_inner
};

/// Samples one response per prompt, keeps only the ones with a confusion
/// point, and returns their candidate sets with rewards assigned. Candidate
/// probabilities are taken under the current theta (which becomes pi_old:
/// the snapshot below happens before any update).
std::vector<CandidateSet> rollout_step(TrainState& state,
                                       const std::vector<const PromptRecord*>& batch,
                                       const Corpus& corpus,
                                       const TrainConfig& config,
                                       std::uint64_t step_seed);

/// p gradient-ascent iterations on the batch objective (mean over sets).
/// All iterations reuse the same (p_old, R, A); only theta moves. A
/// non-finite objective or gradient restores theta and counts an incident.
void optimize_step(TrainState& state, const std::vector<CandidateSet>& sets,
                   const TrainConfig& config);

struct TrainingReport {
  std::vector<StepStats> steps;
  double kl_clean_before = 0.0;  // mean KL(theta||ref) on clean contexts
  double kl_clean_after = 0.0;
  std::int64_t trained_context_count = 0;
  int incidents = 0;
};

/// Runs M outer steps starting from `initial` (resume by passing a loaded
/// checkpoint and its step). The reference policy is the corpus base policy.
/// Throws NumericError once the incident limit is exceeded.
TrainState run_training(const TrainConfig& config, const Corpus& corpus,
                        PolicyTable initial, int start_step = 0,
                        TrainingReport* report = nullptr);

}  // namespace tlpo
