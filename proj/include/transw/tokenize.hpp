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

#ifndef TRANSW_TOKENIZE_HPP
#define TRANSW_TOKENIZE_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transw/vocab.hpp"

namespace transw {

struct TokenSequence {
  std::string source;
  std::vector<std::string> tokens;
};

// Splits on '/', '_', '-', '.' and whitespace, lowercases ASCII, and drops
// fragments that cannot carry a word vector: empty pieces, pure punctuation,
// pure digits, and bare part-of-speech tags ("nn", "vb", "jj", "rb") left
// over from WordNet sense suffixes.
TokenSequence tokenize(std::string_view surface);

// Optional raw-surface -> human-readable-name override, applied before
// tokenization. Freebase machine ids carry no words without it.
class NameMap {
 public:
  NameMap() = default;

  void insert(std::string raw, std::string name) { map_[std::move(raw)] = std::move(name); }

  std::string_view apply(std::string_view surface) const {
    auto it = map_.find(surface);
    return it == map_.end() ? surface : std::string_view(it->second);
  }

  bool contains(std::string_view surface) const { return map_.find(surface) != map_.end(); }
  size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, std::string, StringHash, StringEq> map_;
};

// Two-column tab file: raw-surface \t human-name. Duplicate rows: last wins
// with a warning.
NameMap load_name_map(const std::string& path);

// tokenize(name_map.apply(surface)).
TokenSequence tokenize_named(std::string_view surface, const NameMap& names);

}  // namespace transw

#endif
