// SPDX-License-Identifier: Apache-2.0

#include "tlpo/exploration.hpp"

#include <algorithm>
#include <numeric>

#include "tlpo/errors.hpp"
#include "tlpo/rng.hpp"

namespace tlpo {

const char* selection_strategy_name(SelectionStrategy s) {
  return s == SelectionStrategy::Ranked ? "ranked" : "multinomial";
}

SelectionStrategy selection_strategy_from_name(const std::string& name) {
  if (name == "ranked") return SelectionStrategy::Ranked;
  if (name == "multinomial") return SelectionStrategy::Multinomial;
  throw ConfigError("unknown selection strategy: " + name);
}

CandidateSet select_candidates(const PolicyTable& snapshot, const Context& ctx,
                               int n, SelectionStrategy strategy,
                               std::uint64_t seed) {
  if (n < 2) throw ConfigError("candidate count must be >= 2");
  if (n > snapshot.vocab_size())
    throw ConfigError("candidate count exceeds vocabulary size");

  const Distribution dist = snapshot.next_token_dist(ctx);
  CandidateSet set;
  set.context = ctx;
  set.strategy = strategy;
  set.candidates.reserve(static_cast<std::size_t>(n));

  if (strategy == SelectionStrategy::Ranked) {
    std::vector<std::int32_t> order(dist.probs.size());
    std::iota(order.begin(), order.end(), 0);
    // Descending probability, ascending id on ties.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::int32_t a, std::int32_t b) {
                       const double pa = dist.probs[static_cast<std::size_t>(a)];
                       const double pb = dist.probs[static_cast<std::size_t>(b)];
                       if (pa != pb) return pa > pb;
                       return a < b;
                     });
    for (int i = 0; i < n; ++i) {
      const std::int32_t id = order[static_cast<std::size_t>(i)];
      set.candidates.push_back({id, dist.probs[static_cast<std::size_t>(id)], 0});
    }
  } else {
    Rng rng(seed);
    std::vector<double> weights = dist.probs;
    for (int i = 0; i < n; ++i) {
      const std::size_t pick = sample_index(rng, weights);
      set.candidates.push_back(
          {static_cast<std::int32_t>(pick), dist.probs[pick], 0});
      weights[pick] = 0.0;  // without replacement
    }
  }
  return set;
}

int lookahead_reward(const PolicyTable& snapshot, const Context& ctx,
                     std::int32_t token, int k, const Vocab& vocab,
                     const ScriptRules& rules, EnglishMode mode,
                     const LookaheadOptions& opts) {
  if (k < 0) throw ConfigError("lookahead length must be >= 0");

  std::vector<std::int32_t> fragment{token};
  Context cur = snapshot.advance(ctx, token);
  Rng rng(opts.seed);
  for (int t = 0; t < k; ++t) {
    const Distribution dist = snapshot.next_token_dist(cur);
    std::int32_t next;
    if (opts.greedy) {
      std::size_t best = 0;
      for (std::size_t j = 1; j < dist.probs.size(); ++j)
        if (dist.probs[j] > dist.probs[best]) best = j;
      next = static_cast<std::int32_t>(best);
    } else {
      next = static_cast<std::int32_t>(sample_index(rng, dist.probs));
    }
    if (next == vocab.eos_id()) break;
    fragment.push_back(next);
    cur = snapshot.advance(cur, next);
  }

  const ConfusionReport report = analyze_tokens(fragment, vocab, rules, mode);
  return report.has_confusion() ? -1 : +1;
}

void assign_rewards(CandidateSet& set, const PolicyTable& snapshot,
                    const Vocab& vocab, const ScriptRules& rules,
                    EnglishMode mode, int k, const LookaheadOptions& opts) {
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    LookaheadOptions per = opts;
    per.seed = Rng::mix(opts.seed, i);  // independent stream per candidate
    set.candidates[i].reward = lookahead_reward(
        snapshot, set.context, set.candidates[i].token, k, vocab, rules, mode, per);
  }
}

}  // namespace tlpo
