#pragma once

// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tlpo/errors.hpp"
#include "tlpo/policy.hpp"

namespace tlpo {

using Json = nlohmann::json;

inline Json key_to_json(const ContextKey& key) {
  return Json{{"prompt", key.prompt}, {"window", key.window}};
}

inline ContextKey key_from_json(const Json& j) {
  ContextKey key;
  key.prompt = j.at("prompt").get<std::int64_t>();
  key.window = j.at("window").get<std::vector<std::int32_t>>();
  return key;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError("malformed JSON in " + what + ": " + e.what());
  }
}

}  // namespace tlpo
