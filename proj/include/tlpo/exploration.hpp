#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Candidate construction at a confusion point and lookahead rewards.
//
// Ranked selection takes the N most probable next tokens (descending, ties
// broken by ascending id); multinomial selection draws N distinct tokens
// without replacement. Each candidate is scored by decoding it together with
// a short rollout of k continuation tokens and checking the fragment for
// confused words: -1 if any, +1 otherwise.
//

#include <cstdint>
#include <vector>

#include "tlpo/detector.hpp"
#include "tlpo/policy.hpp"
#include "tlpo/vocab.hpp"

namespace tlpo {

enum class SelectionStrategy : std::uint8_t { Ranked, Multinomial };

const char* selection_strategy_name(SelectionStrategy s);
SelectionStrategy selection_strategy_from_name(const std::string& name);

struct Candidate {
  std::int32_t token = 0;
  double old_prob = 0.0;  // probability under the selection-time snapshot
  int reward = 0;         // +1 or -1 once assigned
};

struct CandidateSet {
  Context context;
  std::vector<Candidate> candidates;
  SelectionStrategy strategy = SelectionStrategy::Ranked;

  int size() const { return static_cast<int>(candidates.size()); }
};

/// Builds the candidate set at `ctx` from an immutable policy snapshot.
/// Requires 2 <= n <= |V|. Rewards are left at 0 until assigned.
CandidateSet select_candidates(const PolicyTable& snapshot, const Context& ctx,
                               int n, SelectionStrategy strategy,
                               std::uint64_t seed);

struct LookaheadOptions {
  bool greedy = true;        // greedy rollout keeps rewards seed-free
  std::uint64_t seed = 0;    // used only when greedy == false
};

/// Reward for placing `token` at `ctx`: roll k continuation tokens, decode
/// the fragment (token + lookahead), and return -1 if the fragment contains a
/// CONFUSED word under `mode`, else +1. k = 0 checks the token surface alone.
int lookahead_reward(const PolicyTable& snapshot, const Context& ctx,
                     std::int32_t token, int k, const Vocab& vocab,
                     const ScriptRules& rules, EnglishMode mode,
                     const LookaheadOptions& opts = {});

/// Assigns lookahead rewards to every candidate in the set.
void assign_rewards(CandidateSet& set, const PolicyTable& snapshot,
                    const Vocab& vocab, const ScriptRules& rules,
                    EnglishMode mode, int k, const LookaheadOptions& opts = {});

}  // namespace tlpo
