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

#ifndef TRANSW_VOCAB_HPP
#define TRANSW_VOCAB_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transw/common.hpp"

namespace transw {

struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

struct StringEq {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const { return a == b; }
};

// Surface form <-> dense integer id bijection. Ids are contiguous from 0 in
// first-seen order, so construction from the same files is deterministic.
class Vocab {
 public:
  // Returns the id, inserting when unseen. Throws in frozen mode.
  int id_of(std::string_view surface) {
    auto it = index_.find(surface);
    if (it != index_.end()) return it->second;
    if (frozen_)
      throw ToolkitError(ErrClass::ParseError,
                         "unknown surface in frozen vocab: '" + std::string(surface) + "'");
    int id = static_cast<int>(surfaces_.size());
    surfaces_.emplace_back(surface);
    index_.emplace(surfaces_.back(), id);
    return id;
  }

  // -1 when absent.
  int find(std::string_view surface) const {
    auto it = index_.find(surface);
    return it == index_.end() ? -1 : it->second;
  }

  const std::string& lookup(int id) const { return surfaces_.at(static_cast<size_t>(id)); }

  int size() const { return static_cast<int>(surfaces_.size()); }

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }

  const std::vector<std::string>& surfaces() const { return surfaces_; }

  uint64_t fingerprint() const;

 private:
  std::vector<std::string> surfaces_;
  std::unordered_map<std::string, int, StringHash, StringEq> index_;
  bool frozen_ = false;
};

}  // namespace transw

#endif
