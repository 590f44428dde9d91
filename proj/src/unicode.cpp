// SPDX-License-Identifier: Apache-2.0

#include "tlpo/unicode.hpp"

#include <algorithm>
#include <array>

namespace tlpo {

namespace {

struct Range {
  char32_t lo;
  char32_t hi;  // inclusive
  CharCategory category;
  Script script;
};

constexpr Script kNone = Script::Other;

// Sorted, disjoint. Anything not listed falls back to: Neutral below U+0080,
// Letter/Other above (unknown scripts count as foreign letters).
constexpr Range kRanges[] = {
    {0x0009, 0x000D, CharCategory::Neutral, kNone},   // control whitespace
    {0x0020, 0x0023, CharCategory::Neutral, kNone},   // space ! " #
    {0x0024, 0x0024, CharCategory::Currency, kNone},  // $
    {0x0025, 0x002F, CharCategory::Neutral, kNone},
    {0x0030, 0x0039, CharCategory::Neutral, kNone},  // digits
    {0x003A, 0x0040, CharCategory::Neutral, kNone},
    {0x0041, 0x005A, CharCategory::Letter, Script::Latin},
    {0x005B, 0x0060, CharCategory::Neutral, kNone},
    {0x0061, 0x007A, CharCategory::Letter, Script::Latin},
    {0x007B, 0x007E, CharCategory::Neutral, kNone},
    {0x00A0, 0x00A1, CharCategory::Neutral, kNone},
    {0x00A2, 0x00A5, CharCategory::Currency, kNone},  // ¢ £ ¤ ¥
    {0x00A6, 0x00B0, CharCategory::Neutral, kNone},   // incl. ° (degree)
    {0x00B1, 0x00B3, CharCategory::MathSymbol, kNone},
    {0x00B4, 0x00BF, CharCategory::Neutral, kNone},
    {0x00C0, 0x00D6, CharCategory::Letter, Script::Latin},
    {0x00D7, 0x00D7, CharCategory::MathSymbol, kNone},  // ×
    {0x00D8, 0x00F6, CharCategory::Letter, Script::Latin},
    {0x00F7, 0x00F7, CharCategory::MathSymbol, kNone},  // ÷
    {0x00F8, 0x00FF, CharCategory::Letter, Script::Latin},
    {0x0100, 0x01CC, CharCategory::Letter, Script::Latin},
    // Pinyin third-tone / umlaut-tone vowel block: Ǎǎ..Ǜǜ.
    {0x01CD, 0x01DC, CharCategory::ToneMark, kNone},
    {0x01DD, 0x024F, CharCategory::Letter, Script::Latin},
    {0x0250, 0x02AF, CharCategory::Phonetic, kNone},  // IPA extensions
    {0x02B0, 0x02C6, CharCategory::Phonetic, kNone},
    {0x02C7, 0x02CB, CharCategory::ToneMark, kNone},  // ˇ ˈ ˉ ˊ ˋ
    {0x02CC, 0x02D8, CharCategory::Phonetic, kNone},
    {0x02D9, 0x02D9, CharCategory::ToneMark, kNone},  // ˙
    {0x02DA, 0x02FF, CharCategory::Phonetic, kNone},
    {0x0300, 0x036F, CharCategory::ToneMark, kNone},  // combining diacritics
    {0x0370, 0x03FF, CharCategory::Letter, Script::Greek},
    {0x0400, 0x052F, CharCategory::Letter, Script::Cyrillic},
    {0x0590, 0x05FF, CharCategory::Letter, Script::Hebrew},
    {0x0600, 0x06FF, CharCategory::Letter, Script::Arabic},
    {0x0750, 0x077F, CharCategory::Letter, Script::Arabic},
    {0x08A0, 0x08FF, CharCategory::Letter, Script::Arabic},
    {0x0900, 0x097F, CharCategory::Letter, Script::Devanagari},
    {0x0E00, 0x0E7F, CharCategory::Letter, Script::Thai},
    {0x1100, 0x11FF, CharCategory::Letter, Script::Hangul},
    {0x1F00, 0x1FFF, CharCategory::Letter, Script::Greek},
    {0x2000, 0x206F, CharCategory::Neutral, kNone},      // general punctuation
    {0x2070, 0x209F, CharCategory::MathSymbol, kNone},   // super/subscripts
    {0x20A0, 0x20CF, CharCategory::Currency, kNone},     // ₩ € ₹ ...
    {0x20D0, 0x20FF, CharCategory::ToneMark, kNone},     // combining symbols
    {0x2100, 0x218F, CharCategory::Neutral, kNone},      // ™ ℃ Ⅷ ...
    {0x2190, 0x21FF, CharCategory::Arrow, kNone},
    {0x2200, 0x22FF, CharCategory::MathSymbol, kNone},
    {0x2300, 0x23FF, CharCategory::Emoji, kNone},  // ⌚ ⏰ technical pictographs
    {0x2400, 0x259F, CharCategory::Neutral, kNone},
    {0x25A0, 0x25FF, CharCategory::Emoji, kNone},  // geometric (▶ et al.)
    {0x2600, 0x27BF, CharCategory::Emoji, kNone},  // misc symbols + dingbats
    {0x27C0, 0x27EF, CharCategory::MathSymbol, kNone},
    {0x27F0, 0x27FF, CharCategory::Arrow, kNone},
    {0x2800, 0x28FF, CharCategory::Neutral, kNone},  // braille
    {0x2900, 0x297F, CharCategory::Arrow, kNone},
    {0x2980, 0x2AFF, CharCategory::MathSymbol, kNone},
    {0x2B00, 0x2BFF, CharCategory::Arrow, kNone},
    {0x2DE0, 0x2DFF, CharCategory::Letter, Script::Cyrillic},
    {0x2E80, 0x2FDF, CharCategory::Letter, Script::Han},  // radicals
    {0x3000, 0x3004, CharCategory::Neutral, kNone},
    {0x3005, 0x3007, CharCategory::Letter, Script::Han},  // 々 〆 〇
    {0x3008, 0x303F, CharCategory::Neutral, kNone},       // CJK punctuation
    {0x3040, 0x309F, CharCategory::Letter, Script::Hiragana},
    {0x30A0, 0x30FF, CharCategory::Letter, Script::Katakana},
    {0x3100, 0x312F, CharCategory::Phonetic, kNone},  // bopomofo
    {0x3130, 0x318F, CharCategory::Letter, Script::Hangul},
    {0x31A0, 0x31BF, CharCategory::Phonetic, kNone},  // bopomofo extended
    {0x31F0, 0x31FF, CharCategory::Letter, Script::Katakana},
    {0x3200, 0x33FF, CharCategory::Neutral, kNone},  // ㎏ ㎞ enclosed/compat
    {0x3400, 0x4DBF, CharCategory::Letter, Script::Han},
    {0x4DC0, 0x4DFF, CharCategory::Neutral, kNone},
    {0x4E00, 0x9FFF, CharCategory::Letter, Script::Han},
    {0xA640, 0xA69F, CharCategory::Letter, Script::Cyrillic},
    {0xA960, 0xA97F, CharCategory::Letter, Script::Hangul},
    {0xAC00, 0xD7A3, CharCategory::Letter, Script::Hangul},
    {0xD7B0, 0xD7FF, CharCategory::Letter, Script::Hangul},
    {0xF900, 0xFAFF, CharCategory::Letter, Script::Han},
    {0xFB50, 0xFDFF, CharCategory::Letter, Script::Arabic},
    {0xFE00, 0xFE0F, CharCategory::Emoji, kNone},  // variation selectors
    {0xFE10, 0xFE4F, CharCategory::Neutral, kNone},
    {0xFE50, 0xFE68, CharCategory::Neutral, kNone},
    {0xFE69, 0xFE69, CharCategory::Currency, kNone},
    {0xFE6A, 0xFE6F, CharCategory::Neutral, kNone},
    {0xFE70, 0xFEFF, CharCategory::Letter, Script::Arabic},
    {0xFF01, 0xFF03, CharCategory::Neutral, kNone},
    {0xFF04, 0xFF04, CharCategory::Currency, kNone},
    {0xFF05, 0xFF20, CharCategory::Neutral, kNone},
    {0xFF21, 0xFF3A, CharCategory::Letter, Script::Latin},
    {0xFF3B, 0xFF40, CharCategory::Neutral, kNone},
    {0xFF41, 0xFF5A, CharCategory::Letter, Script::Latin},
    {0xFF5B, 0xFF65, CharCategory::Neutral, kNone},
    {0xFF66, 0xFF9D, CharCategory::Letter, Script::Katakana},
    {0xFF9E, 0xFF9F, CharCategory::ToneMark, kNone},
    {0xFFA0, 0xFFDC, CharCategory::Letter, Script::Hangul},
    {0xFFE0, 0xFFE1, CharCategory::Currency, kNone},
    {0xFFE2, 0xFFEF, CharCategory::Neutral, kNone},
    {0x1D400, 0x1D7FF, CharCategory::MathSymbol, kNone},
    {0x1F000, 0x1FBFF, CharCategory::Emoji, kNone},
    {0x20000, 0x2A6DF, CharCategory::Letter, Script::Han},
};

}  // namespace

CharInfo classify_char(char32_t cp) {
  const auto* it = std::upper_bound(
      std::begin(kRanges), std::end(kRanges), cp,
      [](char32_t v, const Range& r) { return v < r.lo; });
  if (it != std::begin(kRanges)) {
    const Range& r = *(it - 1);
    if (cp >= r.lo && cp <= r.hi) return {r.category, r.script};
  }
  if (cp < 0x80) return {CharCategory::Neutral, kNone};
  return {CharCategory::Letter, Script::Other};
}

bool is_excluded_char(char32_t cp) {
  const CharCategory c = classify_char(cp).category;
  return c != CharCategory::Letter && c != CharCategory::Neutral;
}

bool is_uppercase_letter(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return true;  // À..Þ
  if (cp >= 0x0391 && cp <= 0x03A9) return true;                  // Α..Ω
  if (cp >= 0x0400 && cp <= 0x042F) return true;                  // Ѐ..Я
  if (cp >= 0xFF21 && cp <= 0xFF3A) return true;                  // fullwidth
  return false;
}

bool is_whitespace(char32_t cp) {
  switch (cp) {
    case 0x0009:
    case 0x000A:
    case 0x000B:
    case 0x000C:
    case 0x000D:
    case 0x0020:
    case 0x00A0:
    case 0x2028:
    case 0x2029:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

const char* script_name(Script s) {
  switch (s) {
    case Script::Latin: return "Latin";
    case Script::Cyrillic: return "Cyrillic";
    case Script::Greek: return "Greek";
    case Script::Hebrew: return "Hebrew";
    case Script::Arabic: return "Arabic";
    case Script::Devanagari: return "Devanagari";
    case Script::Thai: return "Thai";
    case Script::Hangul: return "Hangul";
    case Script::Han: return "Han";
    case Script::Hiragana: return "Hiragana";
    case Script::Katakana: return "Katakana";
    case Script::Other: return "Other";
  }
  return "Other";
}

std::vector<char32_t> utf8_decode(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) -> unsigned {
    return static_cast<unsigned char>(text[k]);
  };
  while (i < text.size()) {
    const unsigned b0 = byte(i);
    char32_t cp = 0xFFFD;
    std::size_t len = 1;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < text.size() &&
               (byte(i + 1) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu));
      len = 2;
      if (cp < 0x80) cp = 0xFFFD;
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < text.size() &&
               (byte(i + 1) & 0xC0) == 0x80 && (byte(i + 2) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(((b0 & 0x0Fu) << 12) |
                                 ((byte(i + 1) & 0x3Fu) << 6) |
                                 (byte(i + 2) & 0x3Fu));
      len = 3;
      if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
    } else if ((b0 & 0xF8) == 0xF0 && i + 3 < text.size() &&
               (byte(i + 1) & 0xC0) == 0x80 && (byte(i + 2) & 0xC0) == 0x80 &&
               (byte(i + 3) & 0xC0) == 0x80) {
      cp = static_cast<char32_t>(((b0 & 0x07u) << 18) |
                                 ((byte(i + 1) & 0x3Fu) << 12) |
                                 ((byte(i + 2) & 0x3Fu) << 6) |
                                 (byte(i + 3) & 0x3Fu));
      len = 4;
      if (cp < 0x10000 || cp > 0x10FFFF) cp = 0xFFFD;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string utf8_encode(const std::vector<char32_t>& cps) {
  std::string out;
  for (char32_t cp : cps) out += utf8_encode(cp);
  return out;
}

std::size_t utf8_length(std::string_view text) {
  return utf8_decode(text).size();
}

}  // namespace tlpo
