#pragma once

// SPDX-License-Identifier: Apache-2.0

//
// UTF-8 decoding and per-character classification.
//
// Every code point is mapped to a (category, script) pair by a single sorted
// range table. Classification is what the word-level detector builds on:
// Letter characters carry a script and decide pass/confused; the symbol
// categories are the character-level exclusion classes; Neutral characters
// (digits, punctuation, whitespace) never count for or against any language.
//
// The table is pinned to one Unicode version (kUnicodeVersionPin) and is the
// only place script/symbol knowledge lives. Emoji misclassification was the
// known weak spot of rule-based detection, hence the explicit pin recorded in
// every serialized report.
//

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tlpo {

inline constexpr const char* kUnicodeVersionPin = "15.1";

enum class Script : std::uint8_t {
  Latin,
  Cyrillic,
  Greek,
  Hebrew,
  Arabic,
  Devanagari,
  Thai,
  Hangul,
  Han,
  Hiragana,
  Katakana,
  Other,  // recognized as a letter, script outside the table
};

enum class CharCategory : std::uint8_t {
  Letter,      // script-bearing; decides language membership
  Neutral,     // digits, punctuation, whitespace: never confusing
  MathSymbol,  // character-level exclusion classes below
  Currency,
  Arrow,
  ToneMark,
  Phonetic,
  Emoji,
};

struct CharInfo {
  CharCategory category;
  Script script;  // meaningful only when category == Letter
};

CharInfo classify_char(char32_t cp);

/// True for characters in an exclusion class (everything except Letter and
/// Neutral).
bool is_excluded_char(char32_t cp);

/// Uppercase letters in the bicameral scripts the detector knows about
/// (Latin, Cyrillic, Greek). Drives the leading-capital exclusion rule.
bool is_uppercase_letter(char32_t cp);

bool is_whitespace(char32_t cp);

const char* script_name(Script s);

/// Decodes UTF-8 into code points. Invalid byte sequences decode to U+FFFD
/// (one replacement per rejected byte) so classification stays total and
/// deterministic.
std::vector<char32_t> utf8_decode(std::string_view text);

std::string utf8_encode(char32_t cp);
std::string utf8_encode(const std::vector<char32_t>& cps);

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

}  // namespace tlpo
