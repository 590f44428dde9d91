#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace tlpo {

/// Language group of a token. Drives synthetic corpus construction and the
/// optional per-group bias in the policy; the detector itself never looks at
/// tags (it classifies decoded text).
enum class LangTag : std::uint8_t {
  Target = 0,
  Confused = 1,
  English = 2,
  Neutral = 3,
};

inline constexpr std::size_t kNumLangTags = 4;

const char* lang_tag_name(LangTag t);
LangTag lang_tag_from_name(const std::string& name);

struct VocabEntry {
  std::int32_t id = 0;
  std::string surface;  // word-initial tokens carry a leading U+0020
  LangTag tag = LangTag::Neutral;
};

/// Finite token inventory. Ids are contiguous 0..size-1; surfaces are
/// non-empty and unique. Decoding is plain surface concatenation (the
/// leading-space convention marks word starts, BPE-style).
class Vocab {
 public:
  Vocab() = default;
  Vocab(std::vector<VocabEntry> entries, std::int32_t eos_id = -1);

  std::int32_t size() const { return static_cast<std::int32_t>(entries_.size()); }
  bool valid_id(std::int32_t id) const { return id >= 0 && id < size(); }
  const VocabEntry& entry(std::int32_t id) const;
  const std::string& surface(std::int32_t id) const { return entry(id).surface; }
  LangTag tag(std::int32_t id) const { return entry(id).tag; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::vector<LangTag> tags() const;

  /// End-of-sequence token id, or -1 when the vocabulary has none.
  std::int32_t eos_id() const { return eos_id_; }

  std::string decode(std::span<const std::int32_t> tokens) const;

  /// Decode plus each token's [begin, end) span in code points of the
  /// decoded text. Needed to map a confused word back to the token that
  /// produced its first off-script character.
  std::pair<std::string, std::vector<std::pair<std::size_t, std::size_t>>>
  decode_with_spans(std::span<const std::int32_t> tokens) const;

  /// Digest over (id, surface, tag, eos) — the identity check that ties a
  /// policy checkpoint to the vocabulary it was trained with.
  std::uint64_t content_hash() const;

 private:
  std::vector<VocabEntry> entries_;
  std::int32_t eos_id_ = -1;
};

}  // namespace tlpo
