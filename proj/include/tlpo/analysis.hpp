#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Evaluation, probability-shift analysis and the ablation harness. These are
// the measurement surfaces behind the CLI: every function returns a plain
// struct plus a deterministic JSON form so that identical seeds produce
// byte-identical reports.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlpo/corpus.hpp"
#include "tlpo/json_util.hpp"
#include "tlpo/metrics.hpp"
#include "tlpo/trainer.hpp"

namespace tlpo {

enum class EvalSplit : std::uint8_t { Heldout, Train, All };

const char* eval_split_name(EvalSplit s);
EvalSplit eval_split_from_name(const std::string& name);

struct EvalConfig {
  EnglishMode mode = EnglishMode::Neutral;
  EvalSplit split = EvalSplit::Heldout;
  int samples_per_prompt = 1;
  int max_response_len = 0;  // 0: corpus spec value
  std::uint64_t seed = 99;

  void validate() const;
};

struct ResponseDetail {
  std::int64_t prompt_id = 0;
  std::string text;
  ConfusionReport report;
};

struct EvalResult {
  MetricResult metrics;
  std::vector<ResponseDetail> responses;
  EvalConfig config;
};

EvalResult evaluate_policy(const Corpus& corpus, const PolicyTable& policy,
                           const EvalConfig& config);

Json eval_to_json(const EvalResult& result, const Corpus& corpus,
                  const PolicyTable& policy);

/// Per-context probability movement between two checkpoints over the same
/// row, split into the groups of the beyond-top-N analysis:
///   (a) explored candidates that are confusion tokens,
///   (b) confusion tokens outside the explored set,
///   (c) non-confusion tokens outside the explored set.
struct ShiftContext {
  ContextKey key;
  double explored_confusion_before = 0.0, explored_confusion_after = 0.0;
  double outside_confusion_before = 0.0, outside_confusion_after = 0.0;
  double outside_clean_before = 0.0, outside_clean_after = 0.0;
};

struct ShiftReport {
  std::vector<ShiftContext> contexts;
  double outside_confusion_decreased_fraction = 0.0;
  double mean_outside_clean_delta = 0.0;
  double mean_outside_confusion_delta = 0.0;
  double mean_explored_confusion_delta = 0.0;
};

ShiftReport shift_analysis(const Corpus& corpus, const PolicyTable& baseline,
                           const PolicyTable& trained,
                           const std::vector<TrainedContext>& contexts);

Json shift_to_json(const ShiftReport& report);

/// Train-report serialization (per-step scalars, trained contexts with their
/// explored candidate sets, clean-context KL before/after).
Json train_report_to_json(const TrainingReport& report, const TrainState& state,
                          const TrainConfig& config);

std::vector<TrainedContext> trained_contexts_from_json(const Json& report);

struct AblationRow {
  AdvantageVariant variant;
  SelectionStrategy strategy;
  double rpr_before = 0.0;
  double rpr_after = 0.0;
  double wpr_after = 0.0;
  double kl_clean = 0.0;          // capability proxy: KL-to-ref on clean contexts
  double kl_trained = 0.0;        // mean full-row KL at trained contexts
  double kl_valid_shape = 0.0;    // KL between renormalized non-confusion masses
  ContextKey first_context;       // first trained context (seed-sharing check)
};

struct AblationReport {
  std::vector<AblationRow> rows;      // ranked by the capability proxy
  double baseline_rpr = 0.0;
};

/// Runs the 3 advantage variants x 2 selection strategies with identical
/// seeds on the same corpus and ranks the rows by the capability proxy
/// (ties broken by the trained-context KL, then by name).
AblationReport run_ablation(const Corpus& corpus, const TrainConfig& base_config,
                            const EvalConfig& eval_config);

Json ablation_to_json(const AblationReport& report);

/// Renders the human-readable summary table included next to each report.
std::string ablation_summary(const AblationReport& report);

}  // namespace tlpo
