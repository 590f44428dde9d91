#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Synthetic multilingual corpora for desk-scale experiments.
//
// "Languages" are disjoint Unicode script slices — the target language uses
// its real script (Hangul by default), confusion tokens are Cyrillic words
// split into two sub-tokens, English tokens are ASCII words, neutral tokens
// are digit strings — so the real detector runs unmodified on toy data.
//
// The seeded base policy puts exactly `confusion_rate` of next-token mass on
// confused word-initial tokens at every word-exit context. Contexts carrying
// confusion mass are recorded as `confusion_contexts`; contexts guaranteed
// free of it (after English/neutral tokens) are the `clean_contexts` probe
// set used for the capability-preservation measurements.
//

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlpo/detector.hpp"
#include "tlpo/policy.hpp"
#include "tlpo/vocab.hpp"

namespace tlpo {

struct PromptRecord {
  std::int64_t id = 0;
  std::string text;
  std::string lang;
  std::vector<std::int32_t> tokens;
  bool heldout = false;
};

struct CorpusSpec {
  std::string lang = "ko";
  int target_words = 24;
  int confused_words = 10;   // each is a two-token Cyrillic word
  int english_words = 6;
  int neutral_words = 4;
  int prompts = 400;
  double confusion_rate = 0.06;  // next-token confusion mass at word exits
  double english_mass = 0.02;
  double neutral_mass = 0.01;
  double stop_mass = 0.0;        // EOS mass at word exits
  int window = 1;                // generator seeds bigram tables only
  int max_response_len = 8;
  double holdout_fraction = 0.4;
  bool tag_coupling = true;
  std::uint64_t seed = 1234;

  void validate() const;
};

struct Corpus {
  CorpusSpec spec;
  Vocab vocab;
  std::vector<PromptRecord> prompts;
  PolicyTable base_policy;
  std::vector<ContextKey> confusion_contexts;
  std::vector<ContextKey> clean_contexts;

  ScriptRules rules() const;
  std::vector<const PromptRecord*> split(bool heldout) const;
};

Corpus gen_synthetic_corpus(const CorpusSpec& spec);

/// Drops every prompt whose text contains a word classified CONFUSED under
/// `mode` (exclusion rules run first). Idempotent.
std::vector<PromptRecord> filter_target_language(
    std::span<const PromptRecord> prompts, const ScriptRules& rules,
    EnglishMode mode = EnglishMode::Strict, std::int64_t* dropped = nullptr);

// Line-delimited prompt records: one JSON object per line with fields
// id, lang, split, text, tokens. Errors name the offending line.
void save_prompts(std::span<const PromptRecord> prompts, const std::string& path);
std::vector<PromptRecord> load_prompts(const std::string& path);

/// Order-independent digest of a prompt list (content identity for manifests).
std::uint64_t prompts_digest(std::span<const PromptRecord> prompts);

// Corpus directory: corpus.jsonl + vocab.json + policy.tlpo + manifest.json.
void save_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);

}  // namespace tlpo
