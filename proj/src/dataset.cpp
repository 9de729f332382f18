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

#include "transw/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace transw {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

int8_t parse_label(const std::string& field, const std::string& where) {
  if (field == "1") return 1;
  if (field == "-1") return -1;
  if (field == "0")
    throw ToolkitError(ErrClass::ParseError, where + ": label 0 is not supported (use 1 or -1)");
  throw ToolkitError(ErrClass::ParseError, where + ": label must be 1 or -1, got '" + field + "'");
}

}  // namespace

std::vector<Triple> load_triples(const std::string& path, TripleSchema schema, Vocab& entities,
                                 Vocab& relations, VocabMode mode) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open triple file '" + path + "'");

  const size_t want = schema == TripleSchema::Plain ? 3 : 4;
  const bool frozen = mode == VocabMode::Frozen;
  auto resolve = [&](Vocab& vocab, const std::string& surface, const std::string& where) {
    if (!frozen) return vocab.id_of(surface);
    int id = vocab.find(surface);
    if (id < 0)
      throw ToolkitError(ErrClass::ParseError,
                         where + ": unknown surface '" + surface + "' in frozen mode");
    return id;
  };

  std::vector<Triple> triples;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    const std::string where = path + ":" + std::to_string(lineno);
    if (fields.size() != want)
      throw ToolkitError(ErrClass::ParseError,
                         where + ": expected " + std::to_string(want) + " tab-separated fields, got " +
                             std::to_string(fields.size()));
    for (size_t i = 0; i < 3; i++)
      if (fields[i].empty())
        throw ToolkitError(ErrClass::ParseError, where + ": empty field " + std::to_string(i + 1));
    Triple t;
    t.head = resolve(entities, fields[0], where);
    t.relation = resolve(relations, fields[1], where);
    t.tail = resolve(entities, fields[2], where);
    if (schema == TripleSchema::Labeled) t.label = parse_label(fields[3], where);
    triples.push_back(t);
  }
  return triples;
}

uint64_t Vocab::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& s : surfaces_) {
    uint64_t len = s.size();
    h = fnv1a64(&len, sizeof(len), h);
    h = fnv1a64(std::string_view(s), h);
  }
  return h;
}

SplitCounts load_split_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open manifest '" + path + "'");
  SplitCounts counts;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bool blank = line.find_first_not_of(" \t") == std::string::npos;
      if (blank) continue;
      throw ToolkitError(ErrClass::ParseError,
                         path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t");
      size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    long v = 0;
    try {
      v = std::stol(value);
    } catch (...) {
      throw ToolkitError(ErrClass::ParseError, path + ":" + std::to_string(lineno) +
                                                   ": count must be an integer, got '" + value + "'");
    }
    if (key == "entities") counts.entities = v;
    else if (key == "relations") counts.relations = v;
    else if (key == "train") counts.train = v;
    else if (key == "valid") counts.valid = v;
    else if (key == "test") counts.test = v;
    else
      throw ToolkitError(ErrClass::ParseError,
                         path + ":" + std::to_string(lineno) + ": unknown manifest key '" + key + "'");
  }
  return counts;
}

std::vector<Triple> TripleDataset::all_positives() const {
  std::vector<Triple> out;
  out.reserve(train.size() + valid.size() + test.size());
  for (const auto* split : {&train, &valid, &test})
    for (const auto& t : *split)
      if (t.positive()) out.push_back(t);
  return out;
}

TripleIndex TripleDataset::positive_index() const {
  TripleIndex index;
  index.insert_all(train);
  index.insert_all(valid);
  index.insert_all(test);
  return index;
}

uint64_t TripleDataset::fingerprint() const {
  uint64_t h = entities.fingerprint();
  h = fnv1a64(&h, sizeof(h), relations.fingerprint());
  for (const auto* split : {&train, &valid, &test})
    for (const auto& t : *split) h = fnv1a64(&t, sizeof(t), h);
  return h;
}

void TripleDataset::check_manifest(const SplitCounts& expected) const {
  auto check = [&](const char* what, std::optional<long> want, long got) {
    if (want && *want != got)
      throw ToolkitError(ErrClass::ManifestMismatch,
                         name + ": manifest expects " + std::to_string(*want) + " " + what +
                             ", loaded " + std::to_string(got));
  };
  check("entities", expected.entities, entities.size());
  check("relations", expected.relations, relations.size());
  check("train", expected.train, static_cast<long>(train.size()));
  check("valid", expected.valid, static_cast<long>(valid.size()));
  check("test", expected.test, static_cast<long>(test.size()));
}

namespace {

TripleSchema detect_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open triple file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tabs = static_cast<size_t>(std::count(line.begin(), line.end(), '\t'));
    if (tabs == 2) return TripleSchema::Plain;
    if (tabs == 3) return TripleSchema::Labeled;
    throw ToolkitError(ErrClass::ParseError,
                       path + ": first data line has " + std::to_string(tabs + 1) +
                           " fields; expected 3 (plain) or 4 (labeled)");
  }
  return TripleSchema::Plain;  // empty file
}

}  // namespace

TripleDataset load_dataset(const DatasetPaths& paths) {
  if (paths.train.empty())
    throw ToolkitError(ErrClass::ConfigInvalid, "data.train is required");
  TripleDataset ds;
  ds.name = paths.name.empty() ? std::filesystem::path(paths.train).stem().string() : paths.name;
  ds.provenance = paths.train;
  if (!paths.name_map.empty()) ds.names = load_name_map(paths.name_map);

  ds.train = load_triples(paths.train, detect_schema(paths.train), ds.entities, ds.relations);
  if (!paths.valid.empty())
    ds.valid = load_triples(paths.valid, detect_schema(paths.valid), ds.entities, ds.relations);
  if (!paths.test.empty())
    ds.test = load_triples(paths.test, detect_schema(paths.test), ds.entities, ds.relations);

  if (!paths.name_map.empty()) {
    size_t unmapped = 0;
    for (const auto& s : ds.entities.surfaces())
      if (!ds.names.contains(s)) unmapped++;
    if (unmapped > 0)
      std::cerr << "warning: " << paths.name_map << ": " << unmapped << " of "
                << ds.entities.size() << " entities have no name-map entry\n";
  }

  if (!paths.manifest.empty()) ds.check_manifest(load_split_manifest(paths.manifest));
  return ds;
}

RelationFoldPlan::Partition RelationFoldPlan::partition(const std::vector<Triple>& triples,
                                                        int fold) const {
  if (fold < 0 || fold >= static_cast<int>(folds.size()))
    throw ToolkitError(ErrClass::Internal, "fold index out of range");
  std::unordered_set<int> held(folds[fold].begin(), folds[fold].end());
  Partition p;
  for (const auto& t : triples) {
    if (held.count(t.relation)) p.test.push_back(t);
    else p.train.push_back(t);
  }
  return p;
}

RelationFoldPlan split_relations_kfold(const std::vector<int>& relation_ids, int k,
                                       uint64_t seed) {
  if (k < 2)
    throw ToolkitError(ErrClass::ConfigInvalid, "fold count must be at least 2");
  if (static_cast<size_t>(k) > relation_ids.size())
    throw ToolkitError(ErrClass::ConfigInvalid,
                       "fold count " + std::to_string(k) + " exceeds relation count " +
                           std::to_string(relation_ids.size()));
  RelationFoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  std::vector<int> ids = relation_ids;
  Rng rng(derive_seed(seed, "relation-folds"));
  shuffle(ids, rng);
  plan.folds.assign(static_cast<size_t>(k), {});
  for (size_t i = 0; i < ids.size(); i++) plan.folds[i % k].push_back(ids[i]);
  return plan;
}

}  // namespace transw
