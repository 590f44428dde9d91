// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlpo/detector.hpp"
#include "tlpo/errors.hpp"

using namespace tlpo;

namespace {

std::vector<std::string> surfaces(const std::vector<Word>& words) {
  std::vector<std::string> out;
  for (const Word& w : words) out.push_back(w.surface);
  return out;
}

const ScriptRules kKo = ScriptRules::for_lang(TargetLang::Korean);

Vocab two_token_vocab() {
  // 0: eos  1: " 하나"  2: " 둘"  3: " при"  4: "вет"  5: " 하"  6: "ло"
  std::vector<VocabEntry> entries{
      {0, "。", LangTag::Neutral},    {1, " 하나", LangTag::Target},
      {2, " 둘", LangTag::Target},    {3, " при", LangTag::Confused},
      {4, "вет", LangTag::Confused},  {5, " 하", LangTag::Target},
      {6, "ло", LangTag::Confused},
  };
  return Vocab(std::move(entries), 0);
}

}  // namespace

TEST_CASE("whitespace segmentation") {
  CHECK(surfaces(segment("안녕 세계", kKo)) ==
        std::vector<std::string>{"안녕", "세계"});
  CHECK(segment("", kKo).empty());
  CHECK(segment("   ", kKo).empty());
}

TEST_CASE("script runs split scriptio continua") {
  CHECK(surfaces(segment("你好world你好", kKo)) ==
        std::vector<std::string>{"你好", "world", "你好"});
  CHECK(surfaces(segment("안녕привет", kKo)) ==
        std::vector<std::string>{"안녕", "привет"});
  // Neutral characters bind to the current run instead of splitting it.
  CHECK(surfaces(segment("안녕123, 세계", kKo)) ==
        std::vector<std::string>{"안녕123,", "세계"});
}

TEST_CASE("segmentation records code point offsets") {
  const auto words = segment("你好 world", kKo);
  REQUIRE(words.size() == 2);
  CHECK(words[0].begin == 0);
  CHECK(words[0].end == 2);
  CHECK(words[1].begin == 3);
  CHECK(words[1].end == 8);
}

TEST_CASE("classification spec examples") {
  CHECK(classify_word("https://a.b", kKo, EnglishMode::Neutral) == WordClass::Excluded);
  CHECK(classify_word("Paris", kKo, EnglishMode::Neutral) == WordClass::Excluded);
  CHECK(classify_word("привет", kKo, EnglishMode::Neutral) == WordClass::Confused);
  CHECK(classify_word("hello", kKo, EnglishMode::Neutral) == WordClass::Pass);
  CHECK(classify_word("hello", kKo, EnglishMode::Strict) == WordClass::Confused);
  CHECK(classify_word("안녕", kKo, EnglishMode::Strict) == WordClass::Pass);
}

TEST_CASE("extra exclusion patterns from the rules config") {
  ScriptRules rules = kKo;
  rules.extra_exclude = {"qwfp"};
  CHECK(classify_word("xqwfpx", rules, EnglishMode::Strict) == WordClass::Excluded);
  CHECK(classify_word("hello", rules, EnglishMode::Strict) == WordClass::Confused);
}

TEST_CASE("empty words are rejected") {
  CHECK_THROWS_AS(classify_word("", kKo, EnglishMode::Neutral), ConfigError);
}

TEST_CASE("fixture corpus classifies exactly in both modes") {
  std::ifstream in(std::string(TLPO_SOURCE_DIR) + "/tests/fixtures/detector_cases.jsonl");
  REQUIRE(in.good());
  std::string line;
  int cases = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const ScriptRules rules =
        ScriptRules::for_lang(target_lang_from_name(j.at("lang").get<std::string>()));
    const std::string word = j.at("word").get<std::string>();
    const std::string family = j.at("family").get<std::string>();
    CAPTURE(word);
    CAPTURE(family);
    CHECK(word_class_name(classify_word(word, rules, EnglishMode::Neutral)) ==
          j.at("expect_neutral").get<std::string>());
    CHECK(word_class_name(classify_word(word, rules, EnglishMode::Strict)) ==
          j.at("expect_strict").get<std::string>());
    ++cases;
  }
  CHECK(cases >= 500);
}

TEST_CASE("neutral mode never confuses more words than strict") {
  std::ifstream in(std::string(TLPO_SOURCE_DIR) + "/tests/fixtures/detector_cases.jsonl");
  REQUIRE(in.good());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    const ScriptRules rules =
        ScriptRules::for_lang(target_lang_from_name(j.at("lang").get<std::string>()));
    const std::string word = j.at("word").get<std::string>();
    const bool confused_neutral =
        classify_word(word, rules, EnglishMode::Neutral) == WordClass::Confused;
    const bool confused_strict =
        classify_word(word, rules, EnglishMode::Strict) == WordClass::Confused;
    CAPTURE(word);
    CHECK((!confused_neutral || confused_strict));
  }
}

TEST_CASE("confusion point on tagged sequences") {
  const Vocab vocab = two_token_vocab();
  const ScriptRules rules = kKo;

  SUBCASE("all target tokens: no confusion point") {
    const std::vector<std::int32_t> seq{1, 2, 1};
    CHECK_FALSE(detect_confusion_point(seq, vocab, rules, EnglishMode::Neutral));
  }
  SUBCASE("confused word at position 3") {
    const std::vector<std::int32_t> seq{1, 2, 1, 3, 4};
    const auto c = detect_confusion_point(seq, vocab, rules, EnglishMode::Neutral);
    REQUIRE(c.has_value());
    CHECK(*c == 3);
  }
  SUBCASE("first of two confusion sites wins") {
    const std::vector<std::int32_t> seq{1, 2, 1, 2, 1, 3, 4, 1, 2, 3, 4};
    const auto c = detect_confusion_point(seq, vocab, rules, EnglishMode::Neutral);
    REQUIRE(c.has_value());
    CHECK(*c == 5);
  }
}

TEST_CASE("confusion point lands on the token carrying the off-script run") {
  const Vocab vocab = two_token_vocab();

  // " при" + "вет" decode to one Cyrillic word; the first token carries the
  // first foreign character.
  const std::vector<std::int32_t> word_start{1, 3, 4};
  auto c = detect_confusion_point(word_start, vocab, kKo, EnglishMode::Neutral);
  REQUIRE(c.has_value());
  CHECK(*c == 1);

  // " 하" + "ло" decode to " 하ло": the Hangul sub-token is clean, the
  // Cyrillic continuation is where the characters leave the allowed set.
  const std::vector<std::int32_t> trap{1, 5, 6};
  c = detect_confusion_point(trap, vocab, kKo, EnglishMode::Neutral);
  REQUIRE(c.has_value());
  CHECK(*c == 2);
}

TEST_CASE("report invariants") {
  const Vocab vocab = two_token_vocab();
  const std::vector<std::int32_t> confused{1, 3, 4, 2};
  const std::vector<std::int32_t> clean{1, 2};

  const ConfusionReport a = analyze_tokens(confused, vocab, kKo, EnglishMode::Neutral);
  CHECK(a.has_confusion());
  bool any_confused = false;
  for (const auto& [_, cls] : a.words) any_confused |= cls == WordClass::Confused;
  CHECK(any_confused);

  const ConfusionReport b = analyze_tokens(clean, vocab, kKo, EnglishMode::Neutral);
  CHECK_FALSE(b.has_confusion());
  for (const auto& [_, cls] : b.words) CHECK(cls != WordClass::Confused);

  // Determinism: same inputs, same report.
  const ConfusionReport a2 = analyze_tokens(confused, vocab, kKo, EnglishMode::Neutral);
  CHECK(a.words == a2.words);
  CHECK(a.confusion_point == a2.confusion_point);
}

TEST_CASE("excluded words are not counted") {
  ConfusionReport report;
  report.words = {{"안녕", WordClass::Pass},
                  {"https://a.b", WordClass::Excluded},
                  {"привет", WordClass::Confused}};
  CHECK(report.counted_words() == 2);
}
