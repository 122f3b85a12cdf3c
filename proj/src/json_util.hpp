#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "laip/error.hpp"

namespace laip::detail {

using nlohmann::json;

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

/// Parses JSON, reporting syntax errors as ParseError with line/column.
inline json parse_json(std::string_view text, std::string_view what) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string(what) + ": syntax error", line, col);
  }
}

inline void expect_object(const json& j, std::string_view where,
                          std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ValidationError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ValidationError(std::string(where) + ": unknown field '" + key + "'");
  }
}

inline const json& require(const json& j, const char* key, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

inline std::string require_string(const json& j, const char* key, std::string_view where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw ValidationError(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace laip::detail
