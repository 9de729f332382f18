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

#include "support/micro_kg.hpp"

#include <unistd.h>

#include <array>
#include <fstream>
#include <random>
#include <set>

#include "transw/rng.hpp"
#include "transw/trainer.hpp"

namespace transw::testing {

namespace {

const std::vector<std::string> kGiven = {"alan", "bree", "carl", "dina", "egon",
                                         "faye", "glen", "hana", "ivor", "june",
                                         "kilo", "lena", "milo", "nora", "otis"};
const std::vector<std::string> kCluster = {"film", "song", "star", "studio", "band"};
const std::vector<std::string> kDecor = {"old",  "new",  "big",  "red",  "blue", "dark",
                                         "gold", "iron", "last", "true", "wild", "free"};
const std::vector<std::string> kAction = {"starring", "director", "producer"};

struct RelationSpec {
  std::string name;
  int shift;
};

// Shifts decompose additively over the two name words:
//   film = 0, song = +2, starring = +1, director = -1, producer = 0.
const std::vector<RelationSpec> kRelations = {
    {"film_starring", +1}, {"film_director", -1}, {"film_producer", 0},
    {"song_starring", +3}, {"song_director", +1}, {"song_producer", +2},
};

int entity_group(int entity_id) { return (entity_id / static_cast<int>(kCluster.size())) % 5; }

}  // namespace

MicroKg make_micro_kg(const std::filesystem::path& dir, uint64_t seed) {
  std::filesystem::create_directories(dir);
  MicroKg kg;
  kg.dir = dir;

  // Entities: one per (given, cluster) pair, group = given index mod 5.
  std::vector<std::string> entity_names;
  for (size_t g = 0; g < kGiven.size(); g++)
    for (size_t c = 0; c < kCluster.size(); c++) {
      const std::string& decor = kDecor[(g * kCluster.size() + c) % kDecor.size()];
      entity_names.push_back(kGiven[g] + "_" + decor + "_" + kCluster[c]);
    }

  // Facts: group(t) - group(h) == shift(r), no self-loops.
  const int n_ent = static_cast<int>(entity_names.size());
  std::vector<std::array<int, 3>> facts;  // h, r, t by index
  for (size_t r = 0; r < kRelations.size(); r++)
    for (int h = 0; h < n_ent; h++)
      for (int t = 0; t < n_ent; t++) {
        if (h == t) continue;
        if (entity_group(t) - entity_group(h) == kRelations[r].shift)
          facts.push_back({h, static_cast<int>(r), t});
      }

  Rng rng(derive_seed(seed, "micro-kg"));
  shuffle(facts, rng);
  const size_t n = facts.size();
  const size_t n_valid = n / 10, n_test = n / 10;
  const size_t n_train = n - n_valid - n_test;

  auto write_plain = [&](const std::filesystem::path& path, size_t begin, size_t end) {
    std::ofstream out(path);
    for (size_t i = begin; i < end; i++)
      out << entity_names[static_cast<size_t>(facts[i][0])] << '\t'
          << kRelations[static_cast<size_t>(facts[i][1])].name << '\t'
          << entity_names[static_cast<size_t>(facts[i][2])] << '\n';
  };

  // Labeled splits: each positive plus one corrupted negative that is not a
  // planted fact anywhere.
  std::set<std::array<int, 3>> fact_set(facts.begin(), facts.end());
  auto write_labeled = [&](const std::filesystem::path& path, size_t begin, size_t end,
                           const char* tag) {
    Rng neg_rng(derive_seed(seed, tag));
    std::ofstream out(path);
    for (size_t i = begin; i < end; i++) {
      auto f = facts[i];
      out << entity_names[static_cast<size_t>(f[0])] << '\t'
          << kRelations[static_cast<size_t>(f[1])].name << '\t'
          << entity_names[static_cast<size_t>(f[2])] << "\t1\n";
      std::array<int, 3> neg = f;
      do {
        int e = static_cast<int>(neg_rng.index(static_cast<size_t>(n_ent)));
        neg = f;
        if (neg_rng.coin()) neg[0] = e;
        else neg[2] = e;
      } while (neg == f || fact_set.count(neg));
      out << entity_names[static_cast<size_t>(neg[0])] << '\t'
          << kRelations[static_cast<size_t>(neg[1])].name << '\t'
          << entity_names[static_cast<size_t>(neg[2])] << "\t-1\n";
    }
  };

  write_plain(dir / "train.tsv", 0, n_train);
  write_labeled(dir / "valid.tsv", n_train, n_train + n_valid, "valid-negs");
  write_labeled(dir / "test.tsv", n_train + n_valid, n, "test-negs");

  // Word vectors: every word used anywhere, k = 16, uniform [-0.5, 0.5].
  kg.words_path = dir / "words.txt";
  {
    std::vector<std::string> vocab;
    vocab.insert(vocab.end(), kGiven.begin(), kGiven.end());
    vocab.insert(vocab.end(), kCluster.begin(), kCluster.end());
    vocab.insert(vocab.end(), kDecor.begin(), kDecor.end());
    vocab.insert(vocab.end(), kAction.begin(), kAction.end());
    Rng wrng(derive_seed(seed, "word-vectors"));
    std::ofstream out(kg.words_path);
    out.precision(17);
    for (const auto& w : vocab) {
      out << w;
      for (int d = 0; d < 16; d++) out << ' ' << wrng.uniform(-0.15, 0.15);
      out << '\n';
    }
  }

  kg.config_path = dir / "micro.conf";
  {
    std::ofstream out(kg.config_path);
    out << "data.name = micro\n";
    out << "data.train = " << (dir / "train.tsv").string() << "\n";
    out << "data.valid = " << (dir / "valid.tsv").string() << "\n";
    out << "data.test = " << (dir / "test.tsv").string() << "\n";
    out << "words.path = " << kg.words_path.string() << "\n";
    out << "words.dim = 16\n";
    out << "model.kind = transw\n";
    out << "train.lr = 0.01\n";
    out << "train.margin = 1.0\n";
    out << "train.epochs = 150\n";
    out << "train.seed = 7\n";
    out << "train.early_stop_patience = 0\n";
  }

  DatasetPaths paths;
  paths.train = (dir / "train.tsv").string();
  paths.valid = (dir / "valid.tsv").string();
  paths.test = (dir / "test.tsv").string();
  paths.name = "micro";
  kg.dataset = load_dataset(paths);
  kg.words = WordEmbeddingTable::load(kg.words_path.string(), 16);

  // Folds hold out one of relations 0..4; every word of a held-out relation
  // still occurs in some kept relation.
  for (int r : {0, 1, 2, 4, 5}) {
    int id = kg.dataset.relations.find(kRelations[static_cast<size_t>(r)].name);
    kg.holdout_sets.push_back({id});
  }

  for (const auto& f : facts) {
    Triple t;
    t.head = kg.dataset.entities.find(entity_names[static_cast<size_t>(f[0])]);
    t.relation = kg.dataset.relations.find(kRelations[static_cast<size_t>(f[1])].name);
    t.tail = kg.dataset.entities.find(entity_names[static_cast<size_t>(f[2])]);
    kg.all_facts.push_back(t);
  }
  return kg;
}

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace transw::testing
