#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <span>

#include "tlpo/detector.hpp"

namespace tlpo {

struct MetricCounts {
  std::int64_t words_pass = 0;
  std::int64_t words_total = 0;      // excluded words are not counted
  std::int64_t responses_pass = 0;
  std::int64_t responses_total = 0;
};

struct MetricResult {
  double wpr = 0.0;  // pooled over all responses
  double rpr = 0.0;
  MetricCounts counts;
  std::int64_t all_excluded_responses = 0;  // counted as pass; flagged for audit
};

/// Word Pass Rate and Response Pass Rate over a response set. WPR pools word
/// counts across responses; a response passes iff it has zero CONFUSED words.
/// Throws UndefinedMetricError instead of producing NaN when there are no
/// responses or no countable words at all.
MetricResult compute_metrics(std::span<const ConfusionReport> reports);

}  // namespace tlpo
