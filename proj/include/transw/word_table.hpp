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

#ifndef TRANSW_WORD_TABLE_HPP
#define TRANSW_WORD_TABLE_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "transw/common.hpp"
#include "transw/vocab.hpp"

namespace transw {

enum class OovPolicy : uint8_t { Zero = 0, HashSeeded = 1 };

OovPolicy parse_oov_policy(const std::string& s);
std::string oov_policy_name(OovPolicy p);

// Immutable word -> k-dim vector map loaded from a text vector file
// ("word v1 v2 ... vk" per line; an optional word2vec-style "count dim"
// header line is skipped). Out-of-vocabulary lookups fall back to the
// configured policy instead of failing.
class WordEmbeddingTable {
 public:
  WordEmbeddingTable() = default;  // empty table; fill via load()

  // expected_dim 0 infers the dimension from the first data line.
  // oov_scale 0 resolves to 6/sqrt(k).
  static WordEmbeddingTable load(const std::string& path, int expected_dim,
                                 OovPolicy policy = OovPolicy::HashSeeded,
                                 double oov_scale = 0.0);

  int dim() const { return k_; }
  size_t size() const { return words_.size(); }
  OovPolicy policy() const { return policy_; }
  double oov_scale() const { return oov_scale_; }
  uint64_t fingerprint() const { return fingerprint_; }

  // nullptr when the word is not in the file.
  const double* find(std::string_view word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : &data_[static_cast<size_t>(it->second) * k_];
  }

  bool contains(std::string_view word) const { return index_.find(word) != index_.end(); }

  // Stored vector, or the deterministic fallback for OOV words. Pure:
  // the same word yields bit-identical components across processes.
  std::vector<double> resolve(std::string_view word) const;

  // The fallback alone (used by models that materialize OOV words).
  std::vector<double> oov_vector(std::string_view word) const;

  static std::vector<double> oov_vector(std::string_view word, OovPolicy policy, int k,
                                        double scale);

 private:
  int k_ = 0;
  OovPolicy policy_ = OovPolicy::HashSeeded;
  double oov_scale_ = 0.0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, int, StringHash, StringEq> index_;
  uint64_t fingerprint_ = 0;
};

}  // namespace transw

#endif
