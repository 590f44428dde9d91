// SPDX-License-Identifier: Apache-2.0

#include "tlpo/vocab.hpp"

#include <unordered_set>

#include "tlpo/digest.hpp"
#include "tlpo/errors.hpp"
#include "tlpo/unicode.hpp"

namespace tlpo {

const char* lang_tag_name(LangTag t) {
  switch (t) {
    case LangTag::Target: return "TARGET";
    case LangTag::Confused: return "CONFUSED";
    case LangTag::English: return "ENGLISH";
    case LangTag::Neutral: return "NEUTRAL";
  }
  return "NEUTRAL";
}

LangTag lang_tag_from_name(const std::string& name) {
  if (name == "TARGET") return LangTag::Target;
  if (name == "CONFUSED") return LangTag::Confused;
  if (name == "ENGLISH") return LangTag::English;
  if (name == "NEUTRAL") return LangTag::Neutral;
  throw FormatError("unknown language tag: " + name);
}

Vocab::Vocab(std::vector<VocabEntry> entries, std::int32_t eos_id)
    : entries_(std::move(entries)), eos_id_(eos_id) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const VocabEntry& e = entries_[i];
    if (e.id != static_cast<std::int32_t>(i))
      throw ConfigError("vocab ids must be contiguous from 0");
    if (e.surface.empty()) throw ConfigError("vocab surfaces must be non-empty");
    if (!seen.insert(e.surface).second)
      throw ConfigError("duplicate vocab surface: " + e.surface);
  }
  if (eos_id_ >= 0 && !valid_id(eos_id_)) throw ConfigError("eos id out of range");
}

const VocabEntry& Vocab::entry(std::int32_t id) const {
  if (!valid_id(id)) throw ConfigError("token id out of range: " + std::to_string(id));
  return entries_[static_cast<std::size_t>(id)];
}

std::vector<LangTag> Vocab::tags() const {
  std::vector<LangTag> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.tag);
  return out;
}

std::string Vocab::decode(std::span<const std::int32_t> tokens) const {
  std::string out;
  for (std::int32_t id : tokens) out += surface(id);
  return out;
}

std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>>
Vocab::decode_with_spans(std::span<const std::int32_t> tokens) const {
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(tokens.size());
  std::size_t pos = 0;
  for (std::int32_t id : tokens) {
    const std::string& s = surface(id);
    const std::size_t n = utf8_length(s);
    spans.emplace_back(pos, pos + n);
    pos += n;
    text += s;
  }
  return {std::move(text), std::move(spans)};
}

std::uint64_t Vocab::content_hash() const {
  Digest d;
  for (const auto& e : entries_) {
    d.update_u64(static_cast<std::uint64_t>(e.id));
    d.update(e.surface);
    d.update_u64(static_cast<std::uint64_t>(e.tag));
  }
  d.update_u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(eos_id_)));
  return d.value();
}

}  // namespace tlpo
