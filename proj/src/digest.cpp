// SPDX-License-Identifier: Apache-2.0

#include "tlpo/digest.hpp"

#include <array>
#include <cstdio>
#include <fstream>

#include "tlpo/errors.hpp"

namespace tlpo {

void Digest::update(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = state_;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  state_ = h;
}

void Digest::update_u64(std::uint64_t v) {
  std::array<unsigned char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v >> (8 * i));
  update(bytes.data(), bytes.size());
}

std::string Digest::hex() const { return to_hex64(state_); }

std::uint64_t fnv1a64(std::string_view data) {
  Digest d;
  d.update(data);
  return d.value();
}

std::string to_hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

std::uint64_t digest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file for digest: " + path);
  Digest d;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    d.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return d.value();
}

}  // namespace tlpo
