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

#include "transw/word_table.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "transw/rng.hpp"

namespace transw {

OovPolicy parse_oov_policy(const std::string& s) {
  if (s == "zero") return OovPolicy::Zero;
  if (s == "hash") return OovPolicy::HashSeeded;
  throw ToolkitError(ErrClass::ConfigInvalid,
                     "unknown OOV policy '" + s + "' (expected hash or zero)");
}

std::string oov_policy_name(OovPolicy p) { return p == OovPolicy::Zero ? "zero" : "hash"; }

namespace {

// Parses "word v1 ... vk". Returns false when the line is blank.
bool parse_vector_line(const std::string& line, std::string& word, std::vector<double>& values) {
  values.clear();
  const char* p = line.c_str();
  while (*p == ' ' || *p == '\t') p++;
  const char* word_start = p;
  while (*p && *p != ' ' && *p != '\t') p++;
  if (p == word_start) return false;
  word.assign(word_start, p);
  while (*p) {
    while (*p == ' ' || *p == '\t') p++;
    if (!*p) break;
    char* end = nullptr;
    double v = std::strtod(p, &end);
    if (end == p) {
      values.clear();
      values.push_back(std::nan(""));  // signals a non-numeric field
      return true;
    }
    values.push_back(v);
    p = end;
  }
  return true;
}

bool looks_like_count_header(const std::string& word, const std::vector<double>& values) {
  if (values.size() != 1) return false;
  for (char c : word)
    if (!isdigit(static_cast<unsigned char>(c))) return false;
  return values[0] == static_cast<long>(values[0]) && values[0] > 0;
}

}  // namespace

WordEmbeddingTable WordEmbeddingTable::load(const std::string& path, int expected_dim,
                                            OovPolicy policy, double oov_scale) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open word vector file '" + path + "'");

  WordEmbeddingTable table;
  table.policy_ = policy;
  table.k_ = expected_dim;

  std::string line, word;
  std::vector<double> values;
  size_t lineno = 0, duplicates = 0;
  bool first_data_line = true;
  uint64_t fp = 0xcbf29ce484222325ull;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!parse_vector_line(line, word, values)) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (values.size() == 1 && std::isnan(values[0]))
      throw ToolkitError(ErrClass::ParseError, where + ": non-numeric field");
    if (first_data_line && looks_like_count_header(word, values)) continue;  // word2vec header
    first_data_line = false;
    if (table.k_ == 0) table.k_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != table.k_)
      throw ToolkitError(ErrClass::ParseError,
                         where + ": expected " + std::to_string(table.k_) + " components, got " +
                             std::to_string(values.size()));
    if (table.index_.find(word) != table.index_.end()) {
      duplicates++;  // first occurrence wins
      continue;
    }
    int row = static_cast<int>(table.words_.size());
    table.words_.push_back(word);
    table.index_.emplace(table.words_.back(), row);
    table.data_.insert(table.data_.end(), values.begin(), values.end());
    fp = fnv1a64(word, fp);
    fp = fnv1a64(values.data(), values.size() * sizeof(double), fp);
  }
  if (duplicates > 0)
    std::cerr << "warning: " << path << ": " << duplicates
              << " duplicate word(s), first occurrence wins\n";
  if (table.k_ == 0)
    throw ToolkitError(ErrClass::ParseError, path + ": no word vectors found");
  table.oov_scale_ = oov_scale > 0 ? oov_scale : 6.0 / std::sqrt(static_cast<double>(table.k_));
  table.fingerprint_ = fp;
  return table;
}

std::vector<double> WordEmbeddingTable::oov_vector(std::string_view word, OovPolicy policy,
                                                   int k, double scale) {
  std::vector<double> v(static_cast<size_t>(k), 0.0);
  if (policy == OovPolicy::Zero) return v;
  Rng rng(derive_seed(fnv1a64(word), "oov"));
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

std::vector<double> WordEmbeddingTable::oov_vector(std::string_view word) const {
  return oov_vector(word, policy_, k_, oov_scale_);
}

std::vector<double> WordEmbeddingTable::resolve(std::string_view word) const {
  if (const double* p = find(word)) return std::vector<double>(p, p + k_);
  return oov_vector(word);
}

}  // namespace transw
