// SPDX-License-Identifier: Apache-2.0

#include "tlpo/metrics.hpp"

#include "tlpo/errors.hpp"

namespace tlpo {

MetricResult compute_metrics(std::span<const ConfusionReport> reports) {
  if (reports.empty())
    throw UndefinedMetricError("compute_metrics: no responses");

  MetricResult result;
  for (const ConfusionReport& report : reports) {
    bool confused = false;
    std::int64_t counted = 0;
    for (const auto& [_, cls] : report.words) {
      switch (cls) {
        case WordClass::Pass:
          ++result.counts.words_pass;
          ++counted;
          break;
        case WordClass::Confused:
          confused = true;
          ++counted;
          break;
        case WordClass::Excluded:
          break;
      }
    }
    result.counts.words_total += counted;
    ++result.counts.responses_total;
    if (!confused) ++result.counts.responses_pass;
    if (counted == 0) ++result.all_excluded_responses;
  }

  if (result.counts.words_total == 0)
    throw UndefinedMetricError("compute_metrics: zero countable words");

  result.wpr = static_cast<double>(result.counts.words_pass) /
               static_cast<double>(result.counts.words_total);
  result.rpr = static_cast<double>(result.counts.responses_pass) /
               static_cast<double>(result.counts.responses_total);
  return result;
}

}  // namespace tlpo
