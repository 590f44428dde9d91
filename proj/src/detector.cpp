// SPDX-License-Identifier: Apache-2.0

#include "tlpo/detector.hpp"

#include <algorithm>
#include <cctype>

#include "tlpo/errors.hpp"

namespace tlpo {

namespace {

bool ascii_letter(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

bool ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

bool starts_with_ci(const std::string& s, const char* prefix) {
  std::size_t i = 0;
  for (; prefix[i]; ++i) {
    if (i >= s.size()) return false;
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

bool looks_like_url(const std::string& w) {
  if (w.find("://") != std::string::npos) return true;
  return starts_with_ci(w, "www.");
}

bool looks_like_email(const std::string& w) {
  const auto at = w.find('@');
  if (at == std::string::npos || at == 0 || at + 1 >= w.size()) return false;
  if (w.find('@', at + 1) != std::string::npos) return false;
  const auto dot = w.find('.', at + 1);
  return dot != std::string::npos && dot > at + 1 && dot + 1 < w.size();
}

// foo(), std::vector, snake_case, camelCase.
bool looks_like_identifier(const std::vector<char32_t>& cps, const std::string& w) {
  if (w.find("()") != std::string::npos) return true;
  if (w.find("::") != std::string::npos) return true;
  for (std::size_t i = 1; i + 1 < cps.size(); ++i) {
    if (cps[i] == U'_' && (ascii_letter(cps[i - 1]) || ascii_digit(cps[i - 1])) &&
        (ascii_letter(cps[i + 1]) || ascii_digit(cps[i + 1])))
      return true;
  }
  for (std::size_t i = 1; i < cps.size(); ++i) {
    if (cps[i - 1] >= U'a' && cps[i - 1] <= U'z' && cps[i] >= U'A' && cps[i] <= U'Z')
      return true;
  }
  return false;
}

// Digits (optionally with one decimal separator) followed by a short Latin
// unit, optionally slashed: 10kg, 3.5cm, 100km/h, 42MHz.
bool looks_like_unit(const std::vector<char32_t>& cps) {
  std::size_t i = 0;
  if (i >= cps.size() || !ascii_digit(cps[i])) return false;
  while (i < cps.size() && ascii_digit(cps[i])) ++i;
  if (i < cps.size() && (cps[i] == U'.' || cps[i] == U',')) {
    ++i;
    if (i >= cps.size() || !ascii_digit(cps[i])) return false;
    while (i < cps.size() && ascii_digit(cps[i])) ++i;
  }
  if (i >= cps.size()) return false;  // plain number: not a unit string
  auto take_letters = [&]() {
    std::size_t n = 0;
    while (i < cps.size() && ascii_letter(cps[i]) && n < 5) {
      ++i;
      ++n;
    }
    return n;
  };
  if (take_letters() == 0) return false;
  if (i < cps.size() && cps[i] == U'/') {
    ++i;
    if (take_letters() == 0) return false;
  }
  // Allow a trailing degree/percent-style neutral symbol but nothing else.
  return i == cps.size();
}

}  // namespace

const char* word_class_name(WordClass c) {
  switch (c) {
    case WordClass::Pass: return "PASS";
    case WordClass::Confused: return "CONFUSED";
    case WordClass::Excluded: return "EXCLUDED";
  }
  return "EXCLUDED";
}

const char* english_mode_name(EnglishMode m) {
  return m == EnglishMode::Neutral ? "neutral" : "strict";
}

EnglishMode english_mode_from_name(const std::string& name) {
  if (name == "neutral") return EnglishMode::Neutral;
  if (name == "strict") return EnglishMode::Strict;
  throw ConfigError("unknown english mode: " + name + " (expected neutral|strict)");
}

const char* target_lang_name(TargetLang lang) {
  switch (lang) {
    case TargetLang::Korean: return "ko";
    case TargetLang::Chinese: return "zh";
    case TargetLang::Japanese: return "ja";
    case TargetLang::Arabic: return "ar";
  }
  return "ko";
}

TargetLang target_lang_from_name(const std::string& name) {
  if (name == "ko" || name == "korean") return TargetLang::Korean;
  if (name == "zh" || name == "chinese") return TargetLang::Chinese;
  if (name == "ja" || name == "japanese") return TargetLang::Japanese;
  if (name == "ar" || name == "arabic") return TargetLang::Arabic;
  throw ConfigError("unknown target language: " + name);
}

ScriptRules ScriptRules::for_lang(TargetLang lang) {
  ScriptRules rules;
  rules.lang = lang;
  switch (lang) {
    case TargetLang::Korean:
      rules.allowed = {Script::Hangul};
      break;
    case TargetLang::Chinese:
      rules.allowed = {Script::Han};
      break;
    case TargetLang::Japanese:
      rules.allowed = {Script::Hiragana, Script::Katakana, Script::Han};
      break;
    case TargetLang::Arabic:
      rules.allowed = {Script::Arabic};
      break;
  }
  return rules;
}

bool ScriptRules::script_allowed(Script s) const {
  return std::find(allowed.begin(), allowed.end(), s) != allowed.end();
}

std::vector<Word> segment(const std::string& text, const ScriptRules& rules) {
  (void)rules;  // segmentation is script-driven, not language-driven
  const std::vector<char32_t> cps = utf8_decode(text);
  std::vector<Word> words;

  std::vector<char32_t> current;
  std::size_t word_begin = 0;
  bool have_letter = false;
  Script last_script = Script::Other;

  auto flush = [&](std::size_t end_pos) {
    if (current.empty()) return;
    Word w;
    w.surface = utf8_encode(current);
    w.begin = word_begin;
    w.end = end_pos;
    words.push_back(std::move(w));
    current.clear();
    have_letter = false;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_whitespace(cp)) {
      flush(i);
      continue;
    }
    const CharInfo info = classify_char(cp);
    if (info.category == CharCategory::Letter && have_letter &&
        info.script != last_script) {
      flush(i);  // script boundary inside a chunk (scriptio continua)
    }
    if (current.empty()) word_begin = i;
    current.push_back(cp);
    if (info.category == CharCategory::Letter) {
      have_letter = true;
      last_script = info.script;
    }
  }
  flush(cps.size());
  return words;
}

WordClass classify_word(const std::string& word, const ScriptRules& rules,
                        EnglishMode mode) {
  if (word.empty()) throw ConfigError("classify_word: empty word");
  const std::vector<char32_t> cps = utf8_decode(word);

  // Stage 1: URL / email.
  if (looks_like_url(word) || looks_like_email(word)) return WordClass::Excluded;
  for (const std::string& pat : rules.extra_exclude) {
    if (!pat.empty() && word.find(pat) != std::string::npos)
      return WordClass::Excluded;
  }
  // Stage 2: code identifiers.
  if (looks_like_identifier(cps, word)) return WordClass::Excluded;
  // Stage 3: unit strings.
  if (looks_like_unit(cps)) return WordClass::Excluded;
  // Stage 4: leading capital (proper noun).
  if (is_uppercase_letter(cps.front())) return WordClass::Excluded;

  // Stage 5: character scan. Symbol-class characters are ignored; letters
  // must all be allowed for the word to pass.
  bool any_letter = false;
  bool any_foreign = false;
  for (char32_t cp : cps) {
    const CharInfo info = classify_char(cp);
    if (info.category != CharCategory::Letter) continue;  // neutral or excluded
    any_letter = true;
    bool ok = rules.script_allowed(info.script);
    if (!ok && mode == EnglishMode::Neutral && ascii_letter(cp)) ok = true;
    if (!ok) any_foreign = true;
  }
  if (!any_letter) return WordClass::Excluded;
  return any_foreign ? WordClass::Confused : WordClass::Pass;
}

std::vector<Word> analyze_text(const std::string& text,
                               const ScriptRules& rules, EnglishMode mode) {
  std::vector<Word> words = segment(text, rules);
  for (Word& w : words) w.cls = classify_word(w.surface, rules, mode);
  return words;
}

std::int64_t ConfusionReport::counted_words() const {
  std::int64_t n = 0;
  for (const auto& [_, cls] : words)
    if (cls != WordClass::Excluded) ++n;
  return n;
}

ConfusionReport analyze_tokens(std::span<const std::int32_t> tokens,
                               const Vocab& vocab, const ScriptRules& rules,
                               EnglishMode mode) {
  ConfusionReport report;
  report.mode = mode;

  auto [text, spans] = vocab.decode_with_spans(tokens);
  const std::vector<Word> words = analyze_text(text, rules, mode);
  report.words.reserve(words.size());
  for (const Word& w : words) report.words.emplace_back(w.surface, w.cls);

  // Confusion point: first character (in text order) that is an off-script
  // letter of a CONFUSED word, mapped back to the token that produced it.
  const std::vector<char32_t> cps = utf8_decode(text);
  for (const Word& w : words) {
    if (w.cls != WordClass::Confused) continue;
    std::size_t bad_pos = w.end;
    for (std::size_t pos = w.begin; pos < w.end; ++pos) {
      const CharInfo info = classify_char(cps[pos]);
      if (info.category != CharCategory::Letter) continue;
      bool ok = rules.script_allowed(info.script);
      if (!ok && mode == EnglishMode::Neutral && ascii_letter(cps[pos])) ok = true;
      if (!ok) {
        bad_pos = pos;
        break;
      }
    }
    for (std::size_t t = 0; t < spans.size(); ++t) {
      if (bad_pos >= spans[t].first && bad_pos < spans[t].second) {
        report.confusion_point = static_cast<std::int32_t>(t);
        break;
      }
    }
    break;  // only the first confused word defines c
  }
  return report;
}

std::optional<std::int32_t> detect_confusion_point(
    std::span<const std::int32_t> tokens, const Vocab& vocab,
    const ScriptRules& rules, EnglishMode mode) {
  return analyze_tokens(tokens, vocab, rules, mode).confusion_point;
}

}  // namespace tlpo
