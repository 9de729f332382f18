/**
 * Copyright (c) 2026 the transw authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#include "transw/tokenize.hpp"

#include <cctype>
#include <fstream>
#include <iostream>

#include "transw/common.hpp"

namespace transw {

namespace {

bool is_split_char(char c) {
  switch (c) {
    case '/':
    case '_':
    case '-':
    case '.':
    case ' ':
    case '\t':
    case '\r':
    case '\n':
    case '\v':
    case '\f':
      return true;
    default:
      return false;
  }
}

bool keep_token(const std::string& tok) {
  if (tok.empty()) return false;
  bool has_alnum = false, all_digits = true;
  for (unsigned char c : tok) {
    if (std::isalnum(c)) has_alnum = true;
    if (!std::isdigit(c)) all_digits = false;
  }
  if (!has_alnum) return false;   // pure punctuation
  if (all_digits) return false;   // sense numbers, ids
  // WordNet part-of-speech markers.
  if (tok == "nn" || tok == "vb" || tok == "jj" || tok == "rb") return false;
  return true;
}

}  // namespace

TokenSequence tokenize(std::string_view surface) {
  TokenSequence seq;
  seq.source.assign(surface);
  std::string cur;
  auto flush = [&] {
    if (keep_token(cur)) seq.tokens.push_back(cur);
    cur.clear();
  };
  for (char c : surface) {
    if (is_split_char(c)) {
      flush();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  return seq;
}

TokenSequence tokenize_named(std::string_view surface, const NameMap& names) {
  TokenSequence seq = tokenize(names.apply(surface));
  seq.source.assign(surface);
  return seq;
}

NameMap load_name_map(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open name map '" + path + "'");
  NameMap map;
  std::string line;
  size_t lineno = 0, duplicates = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ToolkitError(ErrClass::ParseError,
                         path + ":" + std::to_string(lineno) + ": expected two tab-separated columns");
    std::string raw = line.substr(0, tab);
    std::string name = line.substr(tab + 1);
    if (map.contains(raw)) duplicates++;
    map.insert(std::move(raw), std::move(name));
  }
  if (duplicates > 0)
    std::cerr << "warning: " << path << ": " << duplicates
              << " duplicate raw surface(s), last occurrence wins\n";
  return map;
}

}  // namespace transw
