// SPDX-License-Identifier: Apache-2.0

#include "tlpo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "tlpo/errors.hpp"
#include "tlpo/rng.hpp"

namespace tlpo {

namespace {

// Seed stream tags; combined with (master seed, step, index) they give every
// random decision its own reproducible substream.
constexpr std::uint64_t kSeedBatch = 0xB1;
constexpr std::uint64_t kSeedRollout = 0xB2;
constexpr std::uint64_t kSeedSelect = 0xB3;
constexpr std::uint64_t kSeedLookahead = 0xB4;

}  // namespace

void TrainConfig::validate() const {
  if (candidate_count < 2) throw ConfigError("candidate count must be >= 2");
  if (lookahead < 0) throw ConfigError("lookahead must be >= 0");
  if (inner_iterations < 1) throw ConfigError("inner iterations must be >= 1");
  if (steps < 0) throw ConfigError("step count must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("step size must be > 0");
  if (!(clip_eps > 0.0) || clip_eps >= 1.0)
    throw ConfigError("clip epsilon must be in (0, 1)");
  if (kl_beta < 0.0) throw ConfigError("KL weight must be >= 0");
  if (incident_limit < 1) throw ConfigError("incident limit must be >= 1");
  if (checkpoint_interval < 0) throw ConfigError("checkpoint interval must be >= 0");
  if (checkpoint_interval > 0 && checkpoint_dir.empty())
    throw ConfigError("periodic checkpoints need a checkpoint directory");
}

double schedule_alpha(const TrainConfig& config, int step) {
  const int total = std::max(config.steps, 1);
  const int warmup = std::max(1, (total + 9) / 10);  // first 10% of steps
  if (step < warmup)
    return config.step_size * static_cast<double>(step + 1) /
           static_cast<double>(warmup);
  if (total <= warmup) return config.step_size;
  const double progress = static_cast<double>(step - warmup) /
                          static_cast<double>(total - warmup);
  const double cosine = 0.5 * (1.0 + std::cos(3.14159265358979323846 * progress));
  return config.step_size * (0.1 + 0.9 * cosine);
}

std::vector<CandidateSet> rollout_step(TrainState& state,
                                       const std::vector<const PromptRecord*>& batch,
                                       const Corpus& corpus,
                                       const TrainConfig& config,
                                       std::uint64_t step_seed) {
  const ScriptRules rules = corpus.rules();
  const int max_len = config.max_response_len > 0 ? config.max_response_len
                                                  : corpus.spec.max_response_len;
  std::vector<CandidateSet> sets;

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const PromptRecord& prompt = *batch[i];
    SampleOptions sample_opts;
    sample_opts.eos_id = corpus.vocab.eos_id();
    const std::vector<std::int32_t> response = sample_sequence(
        state.theta, prompt.tokens, prompt.id, max_len,
        Rng::mix(step_seed, kSeedRollout, i), sample_opts);
    if (response.empty()) {
      ++state.clean_responses;
      continue;
    }

    const auto c = detect_confusion_point(response, corpus.vocab, rules, config.mode);
    if (!c.has_value()) {
      ++state.clean_responses;  // no error signal: excluded from training
      continue;
    }
    ++state.confusion_hits;

    const Context ctx = context_after(
        state.theta, prompt.tokens, prompt.id,
        std::span<const std::int32_t>(response.data(),
                                      static_cast<std::size_t>(*c)));
    CandidateSet set =
        select_candidates(state.theta, ctx, config.candidate_count,
                          config.strategy, Rng::mix(step_seed, kSeedSelect, i));
    LookaheadOptions look;
    look.greedy = config.greedy_lookahead;
    look.seed = Rng::mix(step_seed, kSeedLookahead, i);
    assign_rewards(set, state.theta, corpus.vocab, rules, config.mode,
                   config.lookahead, look);

    const ContextKey key = state.theta.key_of(ctx);
    if (!state.trained_contexts.count(key)) {
      TrainedContext tc;
      tc.key = key;
      tc.first_step = state.step;
      for (const Candidate& cand : set.candidates) tc.candidates.push_back(cand.token);
      state.trained_contexts.emplace(key, std::move(tc));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

void optimize_step(TrainState& state, const std::vector<CandidateSet>& sets,
                   const TrainConfig& config) {
  const double alpha = schedule_alpha(config, state.step);
  StepStats stats;
  stats.step = state.step;
  stats.alpha = alpha;
  stats.candidate_sets = static_cast<int>(sets.size());

  if (sets.empty()) {
    ++state.step;  // the schedule advances per processed batch
    state.history.push_back(stats);
    return;
  }

  ObjectiveConfig obj;
  obj.clip_eps = config.clip_eps;
  obj.kl_beta = config.kl_beta;
  obj.variant = config.variant;

  // pi_old is already frozen inside the candidate sets (selection-time
  // probabilities); only theta moves across the p iterations.
  const PolicyTable before = state.theta;  // restored on incident
  bool failed = false;

  for (int iter = 0; iter < config.inner_iterations && !failed; ++iter) {
    // Fixed reduction order: accumulate per-row gradients set by set.
    std::map<ContextKey, SparseGradient> accum;
    double total_sum = 0.0, surr_sum = 0.0, kl_sum = 0.0;
    int degenerate = 0;

    for (std::size_t s = 0; s < sets.size(); ++s) {
      SparseGradient grad;
      const ObjectiveValue value =
          tlpo_objective(sets[s], state.theta, state.ref, obj, &grad);
      if (value.degenerate) {
        ++degenerate;
        continue;
      }
      if (!std::isfinite(value.total)) {
        failed = true;
        break;
      }
      total_sum += value.total;
      surr_sum += value.surrogate;
      kl_sum += value.kl;

      if (config.trace_inner) {
        for (const CandidateTerm& term : value.per_candidate) {
          state.traces.push_back({iter, static_cast<int>(s), term.token,
                                  term.p_old, term.advantage, term.p_theta});
        }
      }

      auto it = accum.find(grad.key);
      if (it == accum.end()) {
        accum.emplace(grad.key, std::move(grad));
      } else {
        SparseGradient& dst = it->second;
        for (std::size_t j = 0; j < dst.d_logits.size(); ++j)
          dst.d_logits[j] += grad.d_logits[j];
        for (std::size_t t = 0; t < dst.d_tag_bias.size(); ++t)
          dst.d_tag_bias[t] += grad.d_tag_bias[t];
      }
    }

    if (!failed) {
      const double inv_sets = 1.0 / static_cast<double>(sets.size());
      try {
        for (auto& [key, grad] : accum) {
          for (double& v : grad.d_logits) v *= inv_sets;
          for (double& v : grad.d_tag_bias) v *= inv_sets;
          state.theta.apply_update(grad, alpha);
        }
      } catch (const NumericError&) {
        failed = true;
      }
    }

    if (iter == 0) {
      stats.objective = total_sum / static_cast<double>(sets.size());
      stats.surrogate = surr_sum / static_cast<double>(sets.size());
      stats.kl_mean = kl_sum / static_cast<double>(sets.size());
      stats.degenerate_sets = degenerate;
      state.degenerate_sets += degenerate;
    }
  }
  if (failed) {
    state.theta = before;  // roll the whole step back
    ++state.incidents;
    ++stats.incidents;
  }
  ++state.step;
  state.history.push_back(stats);
}

TrainState run_training(const TrainConfig& config, const Corpus& corpus,
                        PolicyTable initial, int start_step,
                        TrainingReport* report) {
  config.validate();
  if (initial.vocab_hash() != corpus.vocab.content_hash())
    throw FormatError("policy was built for a different vocabulary");

  TrainState state;
  state.theta = std::move(initial);
  state.ref = corpus.base_policy;  // fixed for the whole run
  state.step = start_step;

  const std::vector<const PromptRecord*> train_prompts = corpus.split(false);
  if (train_prompts.empty()) throw ConfigError("corpus has no training prompts");

  auto mean_clean_kl = [&]() {
    if (corpus.clean_contexts.empty()) return 0.0;
    double sum = 0.0;
    for (const ContextKey& key : corpus.clean_contexts)
      sum += state.theta.row_kl(state.ref, key);
    return sum / static_cast<double>(corpus.clean_contexts.size());
  };

  if (report) report->kl_clean_before = mean_clean_kl();

  while (state.step < config.steps) {
    if (state.incidents >= config.incident_limit)
      throw NumericError("training incident limit exceeded (" +
                         std::to_string(state.incidents) + " incidents)");
    const std::uint64_t step_seed =
        Rng::mix(config.seed, kSeedBatch, static_cast<std::uint64_t>(state.step));
    Rng batch_rng(step_seed);
    std::vector<const PromptRecord*> batch;
    batch.reserve(static_cast<std::size_t>(config.batch_size));
    for (int i = 0; i < config.batch_size; ++i)
      batch.push_back(train_prompts[batch_rng.next_below(train_prompts.size())]);

    const std::vector<CandidateSet> sets =
        rollout_step(state, batch, corpus, config, step_seed);
    optimize_step(state, sets, config);

    if (config.checkpoint_interval > 0 &&
        state.step % config.checkpoint_interval == 0 &&
        state.step < config.steps) {
      const auto path = std::filesystem::path(config.checkpoint_dir) /
                        ("checkpoint_" + std::to_string(state.step) + ".tlpo");
      save_checkpoint(state.theta, static_cast<std::uint64_t>(state.step),
                      path.string());
    }
  }

  if (report) {
    report->steps = state.history;
    report->kl_clean_after = mean_clean_kl();
    report->trained_context_count =
        static_cast<std::int64_t>(state.trained_contexts.size());
    report->incidents = state.incidents;
  }
  return state;
}

}  // namespace tlpo
