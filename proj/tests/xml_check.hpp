/*
 * Copyright 2026 The tcal Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

namespace tcal::testing {

// Minimal well-formedness check: balanced tags, quoted attributes, no stray
// '<' in text. Enough for the SVG writer's output, not a general parser.
inline bool well_formed_xml(const std::string& s, std::string* why = nullptr) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  const auto fail = [&](const std::string& m) {
    if (why) *why = m + " at " + std::to_string(i);
    return false;
  };
  while (i < s.size()) {
    if (s[i] != '<') {
      if (s[i] == '>') return fail("stray '>'");
      ++i;
      continue;
    }
    const auto close = s.find('>', i);
    if (close == std::string::npos) return fail("unterminated tag");
    std::string tag = s.substr(i + 1, close - i - 1);
    if (tag.find('<') != std::string::npos) return fail("'<' inside tag");
    if (!tag.empty() && tag[0] == '?') {
      if (tag.back() != '?') return fail("bad declaration");
    } else if (!tag.empty() && tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
    } else {
      const bool self_closing = !tag.empty() && tag.back() == '/';
      if (self_closing) tag.pop_back();
      const auto name = tag.substr(0, tag.find_first_of(" \n\t"));
      if (name.empty()) return fail("empty tag name");
      std::size_t quotes = 0;
      for (char c : tag) quotes += c == '"';
      if (quotes % 2) return fail("unbalanced quotes");
      if (!self_closing) stack.push_back(name);
    }
    i = close + 1;
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  return true;
}

inline std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace tcal::testing
