#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "yw/error.hpp"

namespace yw::detail {

inline int line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

inline nlohmann::ordered_json parse_json(std::string_view text,
                                         ErrorCode on_error) {
  try {
    return nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto byte = e.byte > 0 ? e.byte - 1 : 0;
    throw Error(on_error, "invalid JSON", {}, line_at(text, byte));
  }
}

inline std::string require_string(const nlohmann::ordered_json& obj,
                                  const char* key, ErrorCode on_error,
                                  int line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw Error(on_error, std::string("'") + key + "' must be a string", {},
                line);
  }
  return it->get<std::string>();
}

// Line on which each object element of the first array nested directly in
// the top-level object starts. Lets schema errors point at a record.
inline std::vector<int> array_element_lines(std::string_view text) {
  std::vector<int> lines;
  std::vector<char> stack;
  int line = 1;
  bool in_string = false;
  bool seen_array = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') ++line;
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    switch (c) {
      case '"':
        in_string = true;
        break;
      case '{':
        if (stack.size() == 2 && stack.back() == '[') lines.push_back(line);
        stack.push_back(c);
        break;
      case '[':
        if (stack.size() == 1) {
          if (seen_array) return lines;
          seen_array = true;
        }
        stack.push_back(c);
        break;
      case '}':
      case ']':
        if (!stack.empty()) stack.pop_back();
        break;
      default:
        break;
    }
  }
  return lines;
}

}  // namespace yw::detail
