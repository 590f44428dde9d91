#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
#
# Builds the hand-labeled word-classification fixture. Labels are assigned by
# construction from the rule family each case exercises — never by running
# the detector — so the fixture stays an independent oracle.

import json
import random

rng = random.Random(20260810)

LANGS = ["ko", "zh", "ja", "ar"]


def hangul_word(n=2):
    return "".join(chr(0xAC00 + rng.randrange(11172)) for _ in range(n))


HAN_POOL = "的一是不了人我在有他这为之大来以个中上们到说国和地也子时道出而要于就下得可你年生"


def han_word(n=2):
    return "".join(rng.choice(HAN_POOL) for _ in range(n))


def hiragana_word(n=3):
    return "".join(chr(0x3042 + rng.randrange(0x52)) for _ in range(n))


def katakana_word(n=3):
    return "".join(chr(0x30A2 + rng.randrange(0x50)) for _ in range(n))


def arabic_word(n=4):
    return "".join(chr(0x0627 + rng.randrange(0x24)) for _ in range(n))


def cyrillic_word(n=5):
    return "".join(chr(0x0430 + rng.randrange(32)) for _ in range(n))


def greek_word(n=5):
    return "".join(chr(0x03B1 + rng.randrange(17)) for _ in range(n))


def hebrew_word(n=4):
    return "".join(chr(0x05D0 + rng.randrange(22)) for _ in range(n))


def thai_word(n=4):
    return "".join(chr(0x0E01 + rng.randrange(0x2E)) for _ in range(n))


def devanagari_word(n=4):
    return "".join(chr(0x0915 + rng.randrange(0x24)) for _ in range(n))


TARGET_MAKERS = {
    "ko": [hangul_word],
    "zh": [han_word],
    "ja": [hiragana_word, katakana_word, lambda: han_word(1) + hiragana_word(2)],
    "ar": [arabic_word],
}

FOREIGN_MAKERS = {
    "ko": [cyrillic_word, greek_word, han_word, thai_word],
    "zh": [cyrillic_word, hiragana_word, hangul_word, hebrew_word],
    "ja": [cyrillic_word, hangul_word, greek_word, devanagari_word],
    "ar": [cyrillic_word, hebrew_word, hangul_word, greek_word],
}

ENGLISH = ["data", "model", "token", "answer", "result", "value", "thing",
           "input", "output", "number", "system", "being", "quick", "small",
           "large", "word"]
CAPITALIZED = ["Paris", "Seoul", "Tokyo", "Amazon"]
URLS = ["https://a.b", "http://example.com/path?q=1", "www.example.org",
        "ftp://files.example.net", "https://한국.example", "www.test.co.kr"]
EMAILS = ["user@example.com", "a.b@c.d.org", "test_user@mail.net",
          "x@y.z", "admin@서버.kr", "foo+bar@baz.io"]
IDENTIFIERS = ["foo()", "std::vector", "snake_case", "getValue", "my_var_2",
               "obj.method()", "toString", "run_training"]
UNITS = ["10kg", "3.5cm", "100km/h", "42MHz", "7ms", "1.5GB", "250ml", "9mm", "12kWh", "0.5mg"]
FOREIGN_CAPITALS = ["Москва", "Привет", "Ψυχη", "Дом"]
SYMBOLS = ["∑", "×", "÷", "→", "⇒", "₩", "€", "$", "≤≥", "±"]
TONE_PHONETIC = ["ˇ", "ˉˊˋ", "ə", "ㄅㄆㄇ"]
EMOJI = ["😀", "🎉🎉", "❤", "⏰"]
DIGITS = ["123", "3.14", "2026", "..", "1,000", "42"]


def case(lang, word, neutral, strict, family):
    return {"lang": lang, "word": word, "expect_neutral": neutral,
            "expect_strict": strict, "family": family}


cases = []
for lang in LANGS:
    makers = TARGET_MAKERS[lang]
    seen = set()
    for i in range(24):
        w = makers[i % len(makers)]()
        while w in seen:
            w = makers[i % len(makers)]()
        seen.add(w)
        cases.append(case(lang, w, "PASS", "PASS", "target"))
    for i in range(18):
        w = FOREIGN_MAKERS[lang][i % len(FOREIGN_MAKERS[lang])]()
        cases.append(case(lang, w, "CONFUSED", "CONFUSED", "foreign_script"))
    for i in range(14):
        cases.append(case(lang, ENGLISH[i], "PASS", "CONFUSED", "english"))
    for w in CAPITALIZED:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "leading_capital"))
    for w in URLS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "url"))
    for w in EMAILS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "email"))
    for w in IDENTIFIERS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "identifier"))
    for w in UNITS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "unit"))
    for w in FOREIGN_CAPITALS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "foreign_capital"))
    for w in SYMBOLS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "symbol"))
    for w in TONE_PHONETIC:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "tone_phonetic"))
    for w in EMOJI:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "emoji"))
    for w in DIGITS:
        cases.append(case(lang, w, "EXCLUDED", "EXCLUDED", "digits_only"))
    # Mixed forms: neutral characters never flip a word's class.
    tw = makers[0]()
    cases.append(case(lang, tw + "123", "PASS", "PASS", "target_digits"))
    tw = makers[0]()
    cases.append(case(lang, tw + ",", "PASS", "PASS", "target_punct"))
    tw = makers[0]()
    cases.append(case(lang, tw + "😀", "PASS", "PASS", "target_emoji_char"))
    tw = makers[0]()
    cases.append(case(lang, tw + cyrillic_word(2), "CONFUSED", "CONFUSED",
                      "target_foreign_mix"))
    cases.append(case(lang, "café", "CONFUSED", "CONFUSED", "latin_extended"))
    cases.append(case(lang, "ｈｅｌｌｏ", "CONFUSED", "CONFUSED", "fullwidth_latin"))

# Pinyin with tone-marked vowels: the toned vowel is an excluded character,
# the bare letters are Basic Latin.
for lang in LANGS:
    cases.append(case(lang, "mǎ", "PASS", "CONFUSED", "pinyin_tone"))
    cases.append(case(lang, "hǎo", "PASS", "CONFUSED", "pinyin_tone"))

with open("detector_cases.jsonl", "w", encoding="utf-8") as f:
    for c in cases:
        f.write(json.dumps(c, ensure_ascii=False) + "\n")

families = {}
for c in cases:
    families[c["family"]] = families.get(c["family"], 0) + 1
print(f"{len(cases)} cases")
for fam, count in sorted(families.items()):
    print(f"  {fam}: {count}")
