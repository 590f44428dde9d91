// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "tlpo/unicode.hpp"

using namespace tlpo;

TEST_CASE("scripts classify as expected") {
  CHECK(classify_char(U'한').script == Script::Hangul);
  CHECK(classify_char(U'가').script == Script::Hangul);
  CHECK(classify_char(U'п').script == Script::Cyrillic);
  CHECK(classify_char(U'Я').script == Script::Cyrillic);
  CHECK(classify_char(U'a').script == Script::Latin);
  CHECK(classify_char(U'Z').script == Script::Latin);
  CHECK(classify_char(U'中').script == Script::Han);
  CHECK(classify_char(U'の').script == Script::Hiragana);
  CHECK(classify_char(U'カ').script == Script::Katakana);
  CHECK(classify_char(char32_t{0x0645}).script == Script::Arabic);  // م
  CHECK(classify_char(U'λ').script == Script::Greek);
}

TEST_CASE("symbol classes classify as expected") {
  CHECK(classify_char(U'5').category == CharCategory::Neutral);
  CHECK(classify_char(U'.').category == CharCategory::Neutral);
  CHECK(classify_char(U'。').category == CharCategory::Neutral);
  CHECK(classify_char(U'$').category == CharCategory::Currency);
  CHECK(classify_char(U'₩').category == CharCategory::Currency);
  CHECK(classify_char(U'€').category == CharCategory::Currency);
  CHECK(classify_char(U'×').category == CharCategory::MathSymbol);
  CHECK(classify_char(U'∑').category == CharCategory::MathSymbol);
  CHECK(classify_char(U'±').category == CharCategory::MathSymbol);
  CHECK(classify_char(U'→').category == CharCategory::Arrow);
  CHECK(classify_char(U'⇒').category == CharCategory::Arrow);
  CHECK(classify_char(char32_t{0x02C7}).category == CharCategory::ToneMark);  // ˇ
  CHECK(classify_char(char32_t{0x0301}).category == CharCategory::ToneMark);  // combining acute
  CHECK(classify_char(char32_t{0x01CE}).category == CharCategory::ToneMark);  // ǎ
  CHECK(classify_char(char32_t{0x0259}).category == CharCategory::Phonetic);  // ə
  CHECK(classify_char(char32_t{0x3105}).category == CharCategory::Phonetic);  // ㄅ
  CHECK(classify_char(char32_t{0x1F600}).category == CharCategory::Emoji);    // 😀
  CHECK(classify_char(char32_t{0x2764}).category == CharCategory::Emoji);     // ❤
  CHECK(classify_char(char32_t{0x23F0}).category == CharCategory::Emoji);     // ⏰
}

TEST_CASE("uppercase detection covers the bicameral scripts") {
  CHECK(is_uppercase_letter(U'P'));
  CHECK(is_uppercase_letter(U'Ж'));
  CHECK(is_uppercase_letter(U'Ω'));
  CHECK(is_uppercase_letter(U'É'));
  CHECK_FALSE(is_uppercase_letter(U'p'));
  CHECK_FALSE(is_uppercase_letter(U'ж'));
  CHECK_FALSE(is_uppercase_letter(U'한'));
  CHECK_FALSE(is_uppercase_letter(U'×'));
}

TEST_CASE("utf8 round trip") {
  const std::string s = "한글 и русский, 中文 and english 😀";
  CHECK(utf8_encode(utf8_decode(s)) == s);
  CHECK(utf8_length("한글") == 2);
  CHECK(utf8_length("ab") == 2);
  CHECK(utf8_length("") == 0);
}

TEST_CASE("invalid utf8 decodes to replacement characters") {
  const std::string bad = "a\xFF\xFE";
  const auto cps = utf8_decode(bad);
  REQUIRE(cps.size() == 3);
  CHECK(cps[0] == U'a');
  CHECK(cps[1] == char32_t{0xFFFD});
  CHECK(cps[2] == char32_t{0xFFFD});
}

TEST_CASE("unknown letters count as foreign, ascii controls as neutral") {
  CHECK(classify_char(char32_t{0x0531}).category == CharCategory::Letter);  // Armenian
  CHECK(classify_char(char32_t{0x0531}).script == Script::Other);
  CHECK(classify_char(char32_t{0x0001}).category == CharCategory::Neutral);
}
