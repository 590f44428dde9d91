// SPDX-License-Identifier: Apache-2.0

#include "tlpo/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "tlpo/digest.hpp"
#include "tlpo/errors.hpp"
#include "tlpo/json_util.hpp"
#include "tlpo/rng.hpp"

namespace fs = std::filesystem;

namespace tlpo {

namespace {

constexpr std::uint32_t kCorpusVersion = 1;

std::string make_hangul_word(Rng& rng) {
  // Two random precomposed syllables from the Hangul block.
  std::string w = " ";
  for (int i = 0; i < 2; ++i)
    w += utf8_encode(static_cast<char32_t>(0xAC00 + rng.next_below(11172)));
  return w;
}

std::string make_han_word(Rng& rng) {
  std::string w = " ";
  for (int i = 0; i < 2; ++i)
    w += utf8_encode(static_cast<char32_t>(0x4E00 + rng.next_below(0x2000)));
  return w;
}

std::string make_kana_word(Rng& rng) {
  std::string w = " ";
  for (int i = 0; i < 2; ++i)
    w += utf8_encode(static_cast<char32_t>(0x3042 + rng.next_below(0x52)));
  return w;
}

std::string make_arabic_word(Rng& rng) {
  std::string w = " ";
  for (int i = 0; i < 3; ++i)
    w += utf8_encode(static_cast<char32_t>(0x0627 + rng.next_below(0x24)));
  return w;
}

std::string make_target_word(Rng& rng, TargetLang lang) {
  switch (lang) {
    case TargetLang::Korean: return make_hangul_word(rng);
    case TargetLang::Chinese: return make_han_word(rng);
    case TargetLang::Japanese: return make_kana_word(rng);
    case TargetLang::Arabic: return make_arabic_word(rng);
  }
  return make_hangul_word(rng);
}

// Five lowercase Cyrillic letters, later split into a 3-letter initial
// sub-token and a 2-letter continuation.
std::string make_cyrillic_letters(Rng& rng) {
  std::string w;
  for (int i = 0; i < 5; ++i)
    w += utf8_encode(static_cast<char32_t>(0x0430 + rng.next_below(32)));
  return w;
}

const char* kEnglishPool[] = {"data",  "model", "token", "input", "value",
                              "index", "state", "batch", "layer", "query",
                              "score", "table", "graph", "cache", "merge",
                              "frame"};

double zipf_weight(int rank, double alpha) {
  return std::pow(static_cast<double>(rank + 1), -alpha);
}

}  // namespace

void CorpusSpec::validate() const {
  if (target_words < 1 || confused_words < 0 || english_words < 0 ||
      neutral_words < 0)
    throw ConfigError("vocab group sizes must be >= 1 target, >= 0 others");
  if (prompts < 1) throw ConfigError("prompt count must be >= 1");
  if (confusion_rate < 0.0 || confusion_rate > 1.0)
    throw ConfigError("confusion rate must be in [0, 1]");
  if (confusion_rate > 0.0 && confused_words == 0)
    throw ConfigError("confusion rate > 0 requires confused tokens");
  const double fixed = confusion_rate + english_mass + neutral_mass + stop_mass;
  if (english_mass < 0 || neutral_mass < 0 || stop_mass < 0 || fixed >= 0.999)
    throw ConfigError("group masses must be non-negative and leave room for target mass");
  if (window != 1)
    throw ConfigError("the synthetic generator seeds bigram tables only (window = 1)");
  if (max_response_len < 1) throw ConfigError("max response length must be >= 1");
  if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
    throw ConfigError("holdout fraction must be in (0, 1)");
  target_lang_from_name(lang);  // throws on unknown language
}

ScriptRules Corpus::rules() const {
  return ScriptRules::for_lang(target_lang_from_name(spec.lang));
}

std::vector<const PromptRecord*> Corpus::split(bool heldout) const {
  std::vector<const PromptRecord*> out;
  for (const PromptRecord& p : prompts)
    if (p.heldout == heldout) out.push_back(&p);
  return out;
}

Corpus gen_synthetic_corpus(const CorpusSpec& spec) {
  spec.validate();
  const TargetLang lang = target_lang_from_name(spec.lang);
  Rng rng(spec.seed);

  // ---- vocabulary -------------------------------------------------------
  std::vector<VocabEntry> entries;
  std::set<std::string> used;
  auto add_entry = [&](const std::string& surface, LangTag tag) {
    if (!used.insert(surface).second)
      throw ConfigError("vocab construction produced a duplicate surface");
    entries.push_back({static_cast<std::int32_t>(entries.size()), surface, tag});
    return entries.back().id;
  };
  auto add_unique = [&](auto make, LangTag tag) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::string s = make();
      if (!used.count(s)) return add_entry(s, tag);
    }
    throw ConfigError("vocab construction failed to find a unique surface");
  };

  const std::int32_t eos_id = add_entry(utf8_encode(char32_t{0x3002}), LangTag::Neutral);

  std::vector<std::int32_t> target_ids;
  for (int i = 0; i < spec.target_words; ++i)
    target_ids.push_back(add_unique([&] { return make_target_word(rng, lang); },
                                    LangTag::Target));

  std::vector<std::int32_t> confused_initial_ids, confused_cont_ids;
  for (int i = 0; i < spec.confused_words; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw ConfigError("vocab construction failed to split a confused word");
      const std::string letters = make_cyrillic_letters(rng);
      const std::vector<char32_t> cps = utf8_decode(letters);
      const std::string head = " " + utf8_encode({cps.begin(), cps.begin() + 3});
      const std::string tail = utf8_encode({cps.begin() + 3, cps.end()});
      if (used.count(head) || used.count(tail) || head == " " + tail) continue;
      confused_initial_ids.push_back(add_entry(head, LangTag::Confused));
      confused_cont_ids.push_back(add_entry(tail, LangTag::Confused));
      break;
    }
  }

  std::vector<std::int32_t> english_ids;
  for (int i = 0; i < spec.english_words; ++i) {
    const std::size_t pool = sizeof(kEnglishPool) / sizeof(kEnglishPool[0]);
    if (static_cast<std::size_t>(i) < pool) {
      english_ids.push_back(add_entry(std::string(" ") + kEnglishPool[i], LangTag::English));
    } else {
      english_ids.push_back(add_unique(
          [&] {
            std::string w = " ";
            for (int j = 0; j < 5; ++j)
              w += static_cast<char>('a' + rng.next_below(26));
            return w;
          },
          LangTag::English));
    }
  }

  std::vector<std::int32_t> neutral_ids;
  for (int i = 0; i < spec.neutral_words; ++i)
    neutral_ids.push_back(add_unique(
        [&] { return " " + std::to_string(10 + rng.next_below(9990)); },
        LangTag::Neutral));

  Vocab vocab(std::move(entries), eos_id);

  // ---- seeded policy ----------------------------------------------------
  Corpus corpus;
  corpus.spec = spec;
  corpus.vocab = std::move(vocab);
  PolicyTable policy(spec.window, corpus.vocab.size(), corpus.vocab.content_hash(),
                     spec.tag_coupling,
                     spec.tag_coupling ? corpus.vocab.tags() : std::vector<LangTag>{});

  const std::size_t vsize = static_cast<std::size_t>(corpus.vocab.size());
  const double floor = 1e-12;

  // One word-exit row per context. `confused` controls whether the row
  // carries confusion mass (exactly confusion_rate when it does).
  auto build_exit_row = [&](bool confused) {
    std::vector<double> p(vsize, floor);
    double budget = 1.0 - floor * static_cast<double>(vsize);

    const double conf_total = confused ? spec.confusion_rate : 0.0;
    const double eng_total = english_ids.empty() ? 0.0 : spec.english_mass;
    const double neu_total = neutral_ids.empty() ? 0.0 : spec.neutral_mass;
    const double stop_total = spec.stop_mass;
    const double target_total = budget - conf_total - eng_total - neu_total - stop_total;

    // Per-row permuted Zipf shape over target tokens so no token is globally
    // rare across every row.
    std::vector<std::int32_t> perm = target_ids;
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.next_below(i)]);
    std::vector<double> tw(perm.size());
    double tw_sum = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      tw[i] = zipf_weight(static_cast<int>(i), 1.1) * (0.8 + 0.4 * rng.next_unit());
      tw_sum += tw[i];
    }
    for (std::size_t i = 0; i < perm.size(); ++i)
      p[static_cast<std::size_t>(perm[i])] += target_total * tw[i] / tw_sum;

    if (conf_total > 0.0) {
      // Geometric shape over confused initials; steepened until the largest
      // one lands inside any top-16 ranking, so ranked exploration always
      // sees at least one confused candidate at a fresh confusion context.
      double ratio = 0.75;
      for (int rounds = 0; rounds < 24; ++rounds) {
        std::vector<double> cw(confused_initial_ids.size());
        double cw_sum = 0.0;
        for (std::size_t i = 0; i < cw.size(); ++i) {
          cw[i] = std::pow(ratio, static_cast<double>(i));
          cw_sum += cw[i];
        }
        const double c1 = conf_total * cw[0] / cw_sum;
        // 16th-largest target probability is the entry bar for N = 16.
        std::vector<double> sorted_tp;
        for (std::size_t i = 0; i < perm.size(); ++i)
          sorted_tp.push_back(target_total * tw[i] / tw_sum);
        std::sort(sorted_tp.begin(), sorted_tp.end(), std::greater<>());
        const std::size_t bar_idx = std::min<std::size_t>(15, sorted_tp.size() - 1);
        if (c1 > sorted_tp[bar_idx] * 1.05 || rounds == 23) {
          for (std::size_t i = 0; i < cw.size(); ++i)
            p[static_cast<std::size_t>(confused_initial_ids[i])] +=
                conf_total * cw[i] / cw_sum;
          break;
        }
        ratio *= 0.85;
      }
    }
    for (std::size_t i = 0; i < english_ids.size(); ++i)
      p[static_cast<std::size_t>(english_ids[i])] +=
          eng_total / static_cast<double>(english_ids.size());
    for (std::size_t i = 0; i < neutral_ids.size(); ++i)
      p[static_cast<std::size_t>(neutral_ids[i])] +=
          neu_total / static_cast<double>(neutral_ids.size());
    if (stop_total > 0.0) p[static_cast<std::size_t>(eos_id)] += stop_total;

    PolicyRow row;
    row.logits.resize(vsize);
    for (std::size_t j = 0; j < vsize; ++j) row.logits[j] = std::log(p[j]);
    return row;
  };

  auto key_for = [&](std::int32_t token) {
    ContextKey key;
    key.prompt = -1;
    key.window = {token};
    return key;
  };

  const bool any_confusion = spec.confusion_rate > 0.0 && spec.confused_words > 0;
  for (std::int32_t t : target_ids) {
    const ContextKey key = key_for(t);
    policy.set_row(key, build_exit_row(any_confusion));
    (any_confusion ? corpus.confusion_contexts : corpus.clean_contexts).push_back(key);
  }
  for (std::size_t i = 0; i < confused_initial_ids.size(); ++i) {
    // Mid-word row: deterministic continuation of the confused word.
    std::vector<double> p(vsize, floor);
    p[static_cast<std::size_t>(confused_cont_ids[i])] =
        1.0 - floor * static_cast<double>(vsize - 1);
    PolicyRow row;
    row.logits.resize(vsize);
    for (std::size_t j = 0; j < vsize; ++j) row.logits[j] = std::log(p[j]);
    const ContextKey key = key_for(confused_initial_ids[i]);
    policy.set_row(key, std::move(row));
    corpus.confusion_contexts.push_back(key);

    // Word-exit row after the continuation token.
    const ContextKey exit_key = key_for(confused_cont_ids[i]);
    policy.set_row(exit_key, build_exit_row(any_confusion));
    (any_confusion ? corpus.confusion_contexts : corpus.clean_contexts)
        .push_back(exit_key);
  }
  for (std::int32_t t : english_ids) {
    const ContextKey key = key_for(t);
    policy.set_row(key, build_exit_row(false));
    corpus.clean_contexts.push_back(key);
  }
  for (std::int32_t t : neutral_ids) {
    const ContextKey key = key_for(t);
    policy.set_row(key, build_exit_row(false));
    corpus.clean_contexts.push_back(key);
  }
  corpus.base_policy = std::move(policy);

  // ---- prompts -----------------------------------------------------------
  corpus.prompts.reserve(static_cast<std::size_t>(spec.prompts));
  for (int i = 0; i < spec.prompts; ++i) {
    PromptRecord rec;
    rec.id = i;
    rec.lang = spec.lang;
    const int len = 2 + static_cast<int>(rng.next_below(2));
    for (int t = 0; t < len; ++t)
      rec.tokens.push_back(target_ids[rng.next_below(target_ids.size())]);
    rec.text = corpus.vocab.decode(rec.tokens);
    corpus.prompts.push_back(std::move(rec));
  }
  // Seeded shuffle, then the tail becomes the held-out split.
  std::vector<std::size_t> order(corpus.prompts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_below(i)]);
  const auto heldout_count = static_cast<std::size_t>(
      std::llround(spec.holdout_fraction * static_cast<double>(order.size())));
  for (std::size_t r = 0; r < order.size(); ++r)
    corpus.prompts[order[r]].heldout = r >= order.size() - heldout_count;

  return corpus;
}

std::vector<PromptRecord> filter_target_language(
    std::span<const PromptRecord> prompts, const ScriptRules& rules,
    EnglishMode mode, std::int64_t* dropped) {
  std::vector<PromptRecord> kept;
  kept.reserve(prompts.size());
  std::int64_t drop_count = 0;
  for (const PromptRecord& rec : prompts) {
    bool confused = false;
    for (const Word& w : analyze_text(rec.text, rules, mode)) {
      if (w.cls == WordClass::Confused) {
        confused = true;
        break;
      }
    }
    if (confused) {
      ++drop_count;
    } else {
      kept.push_back(rec);
    }
  }
  if (dropped) *dropped = drop_count;
  return kept;
}

void save_prompts(std::span<const PromptRecord> prompts, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write prompts: " + path);
  for (const PromptRecord& rec : prompts) {
    Json j{{"id", rec.id},
           {"lang", rec.lang},
           {"split", rec.heldout ? "heldout" : "train"},
           {"text", rec.text},
           {"tokens", rec.tokens}};
    out << j.dump() << "\n";
  }
  if (!out) throw IoError("prompt write failed: " + path);
}

std::vector<PromptRecord> load_prompts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open prompts: " + path);
  std::vector<PromptRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": malformed prompt record: " + e.what());
    }
    try {
      PromptRecord rec;
      rec.id = j.at("id").get<std::int64_t>();
      rec.lang = j.at("lang").get<std::string>();
      rec.heldout = j.at("split").get<std::string>() == "heldout";
      rec.text = j.at("text").get<std::string>();
      rec.tokens = j.at("tokens").get<std::vector<std::int32_t>>();
      if (rec.text.empty())
        throw FormatError(path + ":" + std::to_string(lineno) + ": empty prompt text");
      out.push_back(std::move(rec));
    } catch (const Json::exception& e) {
      throw FormatError(path + ":" + std::to_string(lineno) +
                        ": bad prompt record: " + e.what());
    }
  }
  return out;
}

std::uint64_t prompts_digest(std::span<const PromptRecord> prompts) {
  Digest d;
  for (const PromptRecord& rec : prompts) {
    d.update_u64(static_cast<std::uint64_t>(rec.id));
    d.update(rec.lang);
    d.update(rec.text);
    d.update_u64(rec.heldout ? 1 : 0);
    for (std::int32_t t : rec.tokens) d.update_u64(static_cast<std::uint64_t>(t));
  }
  return d.value();
}

namespace {

Json vocab_to_json(const Vocab& vocab) {
  Json entries = Json::array();
  for (const VocabEntry& e : vocab.entries())
    entries.push_back(Json{{"id", e.id},
                           {"surface", e.surface},
                           {"tag", lang_tag_name(e.tag)}});
  return Json{{"version", kCorpusVersion},
              {"eos_id", vocab.eos_id()},
              {"entries", entries}};
}

Vocab vocab_from_json(const Json& j) {
  if (j.at("version").get<std::uint32_t>() != kCorpusVersion)
    throw FormatError("unsupported vocab version");
  std::vector<VocabEntry> entries;
  for (const Json& e : j.at("entries")) {
    entries.push_back({e.at("id").get<std::int32_t>(),
                       e.at("surface").get<std::string>(),
                       lang_tag_from_name(e.at("tag").get<std::string>())});
  }
  return Vocab(std::move(entries), j.at("eos_id").get<std::int32_t>());
}

Json spec_to_json(const CorpusSpec& spec) {
  return Json{{"lang", spec.lang},
              {"target_words", spec.target_words},
              {"confused_words", spec.confused_words},
              {"english_words", spec.english_words},
              {"neutral_words", spec.neutral_words},
              {"prompts", spec.prompts},
              {"confusion_rate", spec.confusion_rate},
              {"english_mass", spec.english_mass},
              {"neutral_mass", spec.neutral_mass},
              {"stop_mass", spec.stop_mass},
              {"window", spec.window},
              {"max_response_len", spec.max_response_len},
              {"holdout_fraction", spec.holdout_fraction},
              {"tag_coupling", spec.tag_coupling},
              {"seed", spec.seed}};
}

CorpusSpec spec_from_json(const Json& j) {
  CorpusSpec spec;
  spec.lang = j.value("lang", spec.lang);
  spec.target_words = j.value("target_words", spec.target_words);
  spec.confused_words = j.value("confused_words", spec.confused_words);
  spec.english_words = j.value("english_words", spec.english_words);
  spec.neutral_words = j.value("neutral_words", spec.neutral_words);
  spec.prompts = j.value("prompts", spec.prompts);
  spec.confusion_rate = j.value("confusion_rate", spec.confusion_rate);
  spec.english_mass = j.value("english_mass", spec.english_mass);
  spec.neutral_mass = j.value("neutral_mass", spec.neutral_mass);
  spec.stop_mass = j.value("stop_mass", spec.stop_mass);
  spec.window = j.value("window", spec.window);
  spec.max_response_len = j.value("max_response_len", spec.max_response_len);
  spec.holdout_fraction = j.value("holdout_fraction", spec.holdout_fraction);
  spec.tag_coupling = j.value("tag_coupling", spec.tag_coupling);
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create corpus directory: " + dir);

  save_prompts(corpus.prompts, (fs::path(dir) / "corpus.jsonl").string());
  write_text_file((fs::path(dir) / "vocab.json").string(),
                  vocab_to_json(corpus.vocab).dump(2) + "\n");
  save_checkpoint(corpus.base_policy, 0, (fs::path(dir) / "policy.tlpo").string());

  Json confusion = Json::array(), clean = Json::array();
  for (const ContextKey& k : corpus.confusion_contexts) confusion.push_back(key_to_json(k));
  for (const ContextKey& k : corpus.clean_contexts) clean.push_back(key_to_json(k));
  std::int64_t train_count = 0;
  for (const PromptRecord& p : corpus.prompts)
    if (!p.heldout) ++train_count;
  Json manifest{
      {"format", "tlpo-corpus"},
      {"version", kCorpusVersion},
      {"spec", spec_to_json(corpus.spec)},
      {"counts",
       {{"prompts", corpus.prompts.size()},
        {"train", train_count},
        {"heldout", static_cast<std::int64_t>(corpus.prompts.size()) - train_count},
        {"vocab", corpus.vocab.size()}}},
      {"confusion_contexts", confusion},
      {"clean_contexts", clean},
      {"digests",
       {{"corpus.jsonl", to_hex64(digest_file((fs::path(dir) / "corpus.jsonl").string()))},
        {"vocab.json", to_hex64(digest_file((fs::path(dir) / "vocab.json").string()))},
        {"policy.tlpo", to_hex64(digest_file((fs::path(dir) / "policy.tlpo").string()))},
        {"prompts", to_hex64(prompts_digest(corpus.prompts))}}},
      {"unicode_version", kUnicodeVersionPin}};
  write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

Corpus load_corpus(const std::string& dir) {
  const Json manifest =
      parse_json(read_text_file((fs::path(dir) / "manifest.json").string()),
                 dir + "/manifest.json");
  if (manifest.value("format", "") != "tlpo-corpus")
    throw FormatError(dir + ": not a corpus directory");
  if (manifest.at("version").get<std::uint32_t>() != kCorpusVersion)
    throw FormatError(dir + ": unsupported corpus version");

  Corpus corpus;
  corpus.spec = spec_from_json(manifest.at("spec"));
  corpus.vocab = vocab_from_json(parse_json(
      read_text_file((fs::path(dir) / "vocab.json").string()), dir + "/vocab.json"));
  corpus.prompts = load_prompts((fs::path(dir) / "corpus.jsonl").string());
  auto [policy, step] = load_checkpoint((fs::path(dir) / "policy.tlpo").string());
  (void)step;
  if (policy.vocab_hash() != corpus.vocab.content_hash())
    throw FormatError(dir + ": base policy was built for a different vocabulary");
  corpus.base_policy = std::move(policy);
  for (const Json& k : manifest.at("confusion_contexts"))
    corpus.confusion_contexts.push_back(key_from_json(k));
  for (const Json& k : manifest.at("clean_contexts"))
    corpus.clean_contexts.push_back(key_from_json(k));

  // Loaded text must agree with the token stream it claims to encode.
  for (const PromptRecord& rec : corpus.prompts) {
    for (std::int32_t t : rec.tokens)
      if (!corpus.vocab.valid_id(t))
        throw FormatError(dir + ": prompt " + std::to_string(rec.id) +
                          " references an unknown token id");
    if (corpus.vocab.decode(rec.tokens) != rec.text)
      throw FormatError(dir + ": prompt " + std::to_string(rec.id) +
                        " text does not match its tokens");
  }
  return corpus;
}

}  // namespace tlpo
