#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// Rule-based language-confusion detection.
//
// Words are classified by script membership of their letters after a fixed
// cascade of exclusion rules. The cascade order is part of the contract:
//
//   1. URL / email
//   2. code identifier (foo(), a::b, snake_case, camelCase)
//   3. unit string (10kg, 3.5cm, 100km/h)
//   4. leading capital letter (proper nouns)
//   5. character-level symbol classes (math, currency, arrows, tone marks,
//      phonetic symbols, emoji) — a word made only of excluded or neutral
//      characters is EXCLUDED
//
// A surviving word is PASS iff every letter lies in the allowed script set;
// ENGLISH_NEUTRAL additionally allows ASCII letters, ENGLISH_STRICT does not.
// EXCLUDED words count in neither the pass nor the total word set.
//

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlpo/policy.hpp"
#include "tlpo/unicode.hpp"
#include "tlpo/vocab.hpp"

namespace tlpo {

enum class WordClass : std::uint8_t { Pass, Confused, Excluded };

const char* word_class_name(WordClass c);

enum class EnglishMode : std::uint8_t { Neutral, Strict };

const char* english_mode_name(EnglishMode m);
EnglishMode english_mode_from_name(const std::string& name);

enum class TargetLang : std::uint8_t { Korean, Chinese, Japanese, Arabic };

const char* target_lang_name(TargetLang lang);
TargetLang target_lang_from_name(const std::string& name);

struct ScriptRules {
  TargetLang lang = TargetLang::Korean;
  std::vector<Script> allowed;                    // scripts of the target language
  std::vector<std::string> extra_exclude;         // extra substring patterns
  std::string unicode_version = kUnicodeVersionPin;

  static ScriptRules for_lang(TargetLang lang);
  bool script_allowed(Script s) const;
};

struct Word {
  std::string surface;
  std::size_t begin = 0;  // [begin, end) in code points of the source text
  std::size_t end = 0;
  WordClass cls = WordClass::Excluded;
};

/// Whitespace split first, then within each chunk a new word starts whenever
/// a letter's script differs from the previous letter's script. Non-letters
/// bind to the current word. Handles scriptio continua without a dictionary.
std::vector<Word> segment(const std::string& text, const ScriptRules& rules);

WordClass classify_word(const std::string& word, const ScriptRules& rules,
                        EnglishMode mode);

struct ConfusionReport {
  std::vector<std::pair<std::string, WordClass>> words;
  std::optional<std::int32_t> confusion_point;  // token index
  EnglishMode mode = EnglishMode::Neutral;

  bool has_confusion() const { return confusion_point.has_value(); }
  std::int64_t counted_words() const;
};

/// Classifies every word of the decoded sequence and locates the confusion
/// point: the smallest token index contributing an off-script character to a
/// CONFUSED word. Within a multi-token word this is the first token that
/// actually carries the offending characters.
ConfusionReport analyze_tokens(std::span<const std::int32_t> tokens,
                               const Vocab& vocab, const ScriptRules& rules,
                               EnglishMode mode);

/// Word classes for raw text (no token mapping, so no confusion point).
std::vector<Word> analyze_text(const std::string& text,
                               const ScriptRules& rules, EnglishMode mode);

std::optional<std::int32_t> detect_confusion_point(
    std::span<const std::int32_t> tokens, const Vocab& vocab,
    const ScriptRules& rules, EnglishMode mode);

}  // namespace tlpo
