#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Tabular autoregressive softmax policy with exact analytic gradients.
//
// A context is the (prompt, last-m-tokens) conditioning pair. Lookup keys
// treat a full window as prompt-independent (the Markov property of an
// n-gram model); the prompt id only disambiguates while the window is still
// underfull at the start of generation. This is what lets updates learned on
// training prompts transfer to held-out prompts that pass through the same
// windows.
//
// Row parameters are per-token logits plus an optional per-language-group
// bias shared by all tokens of that group in the row. With the coupling
// disabled the row is a plain logit vector. With it enabled, suppressing a
// few tokens of one group also moves the rest of the group — the tabular
// stand-in for language-specific components in a real model, and the
// mechanism behind probability shifts of tokens that never entered the
// explored candidate set.
//

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlpo/vocab.hpp"

namespace tlpo {

struct Context {
  std::int64_t prompt_id = -1;
  std::vector<std::int32_t> window;  // oldest first, length <= m
};

/// Map key derived from a Context. prompt == -1 once the window is full.
struct ContextKey {
  std::int64_t prompt = -1;
  std::vector<std::int32_t> window;

  auto operator<=>(const ContextKey&) const = default;

  std::string to_string() const;
};

struct Distribution {
  std::vector<double> probs;
};

struct PolicyRow {
  std::vector<double> logits;                     // one per token
  std::array<double, kNumLangTags> tag_bias{};    // shared per-group offsets
};

/// Gradient with respect to one row's parameters.
struct SparseGradient {
  ContextKey key;
  std::vector<double> d_logits;
  std::array<double, kNumLangTags> d_tag_bias{};
};

class PolicyTable {
 public:
  PolicyTable() = default;
  PolicyTable(int window_len, std::int32_t vocab_size, std::uint64_t vocab_hash,
              bool tag_coupling = false, std::vector<LangTag> tags = {});

  int window_len() const { return window_len_; }
  std::int32_t vocab_size() const { return vocab_size_; }
  std::uint64_t vocab_hash() const { return vocab_hash_; }
  bool tag_coupling() const { return tag_coupling_; }
  const std::vector<LangTag>& tags() const { return tags_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::map<ContextKey, PolicyRow>& rows() const { return rows_; }

  ContextKey key_of(const Context& ctx) const;

  /// Effective logits z = logits + tag_bias[tag]; zeros for unseen contexts.
  std::vector<double> effective_logits(const ContextKey& key) const;

  /// softmax(z) with max-subtraction. Deterministic; uniform on unseen rows.
  Distribution next_token_dist(const Context& ctx) const;
  Distribution dist_for_key(const ContextKey& key) const;

  double prob_of(const Context& ctx, std::int32_t token) const;

  /// d log pi(token|ctx) / d(row params): delta - pi on logits, group
  /// indicator minus group mass on tag biases.
  SparseGradient log_prob_grad(const Context& ctx, std::int32_t token) const;

  /// params += step * grad. Materializes a zero row for unseen keys first.
  /// Throws NumericError if grad or step contains non-finite entries.
  void apply_update(const SparseGradient& grad, double step);

  /// Replaces the row for `key`. Used by corpus seeding and checkpoint load.
  void set_row(const ContextKey& key, PolicyRow row);
  const PolicyRow* find_row(const ContextKey& key) const;

  /// Shifts a context window by one generated token.
  Context advance(const Context& ctx, std::int32_t token) const;

  /// Full-distribution KL(this || other) at one context, in nats.
  double row_kl(const PolicyTable& other, const ContextKey& key) const;

  bool operator==(const PolicyTable& other) const = default;

 private:
  int window_len_ = 1;
  std::int32_t vocab_size_ = 0;
  std::uint64_t vocab_hash_ = 0;
  bool tag_coupling_ = false;
  std::vector<LangTag> tags_;
  std::map<ContextKey, PolicyRow> rows_;
};

struct SampleOptions {
  bool greedy = false;      // default: temperature-1 multinomial sampling
  std::int32_t eos_id = -1; // stop (without emitting) when sampled
};

/// Autoregressive rollout. Pure function of (policy, prompt tokens, prompt
/// id, seed): the same inputs always yield the same sequence.
std::vector<std::int32_t> sample_sequence(const PolicyTable& policy,
                                          std::span<const std::int32_t> prompt_tokens,
                                          std::int64_t prompt_id, int max_len,
                                          std::uint64_t seed,
                                          const SampleOptions& opts = {});

/// Context the policy is in after consuming `prompt_tokens` plus `generated`.
Context context_after(const PolicyTable& policy,
                      std::span<const std::int32_t> prompt_tokens,
                      std::int64_t prompt_id,
                      std::span<const std::int32_t> generated);

// Checkpoint format: little-endian binary, versioned header, rows sorted by
// key. Doubles are stored bit-exactly.
void save_checkpoint(const PolicyTable& policy, std::uint64_t step,
                     const std::string& path);
std::pair<PolicyTable, std::uint64_t> load_checkpoint(const std::string& path);

/// Digest of the checkpoint serialization (stable identity for reports).
std::uint64_t policy_digest(const PolicyTable& policy);

}  // namespace tlpo
