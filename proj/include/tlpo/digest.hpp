#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <string>
#include <string_view>

namespace tlpo {

/// FNV-1a 64-bit content digest. Used for vocab identity checks, corpus
/// integrity records and run ids. Not a cryptographic hash.
class Digest {
 public:
  Digest() = default;

  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  void update_u64(std::uint64_t v);

  std::uint64_t value() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xCBF29CE484222325ULL;
};

std::uint64_t fnv1a64(std::string_view data);
std::string to_hex64(std::uint64_t v);

/// Digest of a file's raw bytes. Throws IoError if unreadable.
std::uint64_t digest_file(const std::string& path);

}  // namespace tlpo
