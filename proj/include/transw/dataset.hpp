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

#ifndef TRANSW_DATASET_HPP
#define TRANSW_DATASET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "transw/common.hpp"
#include "transw/rng.hpp"
#include "transw/tokenize.hpp"
#include "transw/vocab.hpp"

namespace transw {

// label: 0 = unlabeled (a stated fact), +1 / -1 from labeled files.
struct Triple {
  int32_t head = 0;
  int32_t relation = 0;
  int32_t tail = 0;
  int8_t label = 0;

  bool has_label() const { return label != 0; }
  bool positive() const { return label >= 0; }
};

inline bool same_ids(const Triple& a, const Triple& b) {
  return a.head == b.head && a.relation == b.relation && a.tail == b.tail;
}

enum class TripleSchema { Plain, Labeled };
enum class VocabMode { Build, Frozen };

// One line per triple: h \t r \t t  (plain)  or  h \t r \t t \t label.
// Labels must be 1 or -1. In Build mode unseen surfaces extend the vocabs.
std::vector<Triple> load_triples(const std::string& path, TripleSchema schema,
                                 Vocab& entities, Vocab& relations,
                                 VocabMode mode = VocabMode::Build);

// Hash set over (h, r, t); labels are ignored on insert and probe.
class TripleIndex {
 public:
  void insert(const Triple& t) { set_.insert(key(t)); }

  void insert_all(const std::vector<Triple>& ts) {
    for (const auto& t : ts)
      if (t.positive()) insert(t);
  }

  bool contains(const Triple& t) const { return set_.count(key(t)) != 0; }
  size_t size() const { return set_.size(); }

 private:
  struct Key {
    int32_t h, r, t;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      return static_cast<size_t>(fnv1a64(&k, sizeof(k)));
    }
  };
  static Key key(const Triple& t) { return Key{t.head, t.relation, t.tail}; }

  std::unordered_set<Key, KeyHash> set_;
};

struct SplitCounts {
  std::optional<long> entities, relations, train, valid, test;
};

// Flat key=value file with expected counts (entities, relations, train,
// valid, test). Any subset of keys may be present.
SplitCounts load_split_manifest(const std::string& path);

struct TripleDataset {
  std::string name;
  Vocab entities;
  Vocab relations;
  NameMap names;
  std::vector<Triple> train, valid, test;
  std::string provenance;

  std::vector<Triple> all_positives() const;
  TripleIndex positive_index() const;
  uint64_t fingerprint() const;

  // Throws ManifestMismatch when a supplied count disagrees.
  void check_manifest(const SplitCounts& expected) const;
};

struct DatasetPaths {
  std::string train, valid, test;  // valid/test optional (empty)
  std::string name_map;            // optional
  std::string manifest;            // optional
  std::string name;                // defaults to the train file stem
};

// Loads all splits with per-file schema auto-detection (3 columns plain,
// 4 columns labeled), builds the vocabs in train, valid, test order.
TripleDataset load_dataset(const DatasetPaths& paths);

// k disjoint relation-id sets for leave-relations-out cross validation.
struct RelationFoldPlan {
  int k = 0;
  uint64_t seed = 0;
  std::vector<std::vector<int>> folds;  // held-out relation ids per fold

  struct Partition {
    std::vector<Triple> train, test;
  };
  // A triple lands in `test` iff its relation is held out in this fold.
  Partition partition(const std::vector<Triple>& triples, int fold) const;
};

// Seeded shuffle, then round-robin deal: fold sizes differ by at most one.
RelationFoldPlan split_relations_kfold(const std::vector<int>& relation_ids, int k,
                                       uint64_t seed);

}  // namespace transw

#endif
