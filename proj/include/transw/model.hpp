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

#ifndef TRANSW_MODEL_HPP
#define TRANSW_MODEL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transw/common.hpp"
#include "transw/dataset.hpp"

namespace transw {

// Row-major dense matrix of doubles; deliberately minimal.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  void init(int r, int c, double v = 0.0) {
    rows = r;
    cols = c;
    a.assign(static_cast<size_t>(r) * c, v);
  }
  double* row(int i) { return &a[static_cast<size_t>(i) * cols]; }
  const double* row(int i) const { return &a[static_cast<size_t>(i) * cols]; }
};

// Translation dissimilarity ||h + r - t||: L1 sums absolute values, L2Squared
// sums squares. Exactly 0 iff h + r == t componentwise.
double distance(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, Norm norm);

struct ComposedEmbedding {
  std::vector<double> vec;
  Role role = Role::Entity;
  std::vector<std::string> tokens;  // provenance
};

// Which parameter table a sparse gradient entry addresses.
enum class ParamTable : uint8_t {
  ConnEnt,      // TransW entity-role connection vectors (per word)
  ConnRel,      // TransW relation-role connection vectors (per word)
  BiasEnt,      // TransW shared entity bias
  BiasRel,      // TransW relation bias
  WordVec,      // TransW word vectors (only when fine-tuning)
  EntityVec,    // TransE entity rows
  RelationVec,  // TransE relation rows
};

// Reusable sparse gradient set: a list of (table, row) slots, each holding a
// k-vector. Rows may repeat; applying entries sequentially is equivalent to
// applying their sum.
class GradientBuffer {
 public:
  struct Slot {
    ParamTable table;
    int32_t row;  // -1 for biases
  };

  void reset(int k) {
    k_ = k;
    slots_.clear();
    values_.clear();
  }

  // The returned span is valid only until the next push.
  std::span<double> push(ParamTable table, int32_t row) {
    slots_.push_back(Slot{table, row});
    values_.resize(values_.size() + static_cast<size_t>(k_), 0.0);
    return std::span<double>(values_.data() + values_.size() - k_, static_cast<size_t>(k_));
  }

  size_t size() const { return slots_.size(); }
  bool empty() const { return slots_.empty(); }
  int dim() const { return k_; }
  const Slot& slot(size_t i) const { return slots_[i]; }
  std::span<const double> values(size_t i) const {
    return std::span<const double>(values_.data() + i * static_cast<size_t>(k_),
                                   static_cast<size_t>(k_));
  }

 private:
  int k_ = 0;
  std::vector<Slot> slots_;
  std::vector<double> values_;
};

// Scorer interface shared by TransW and the TransE baseline. Scoring is
// read-only and safe to run concurrently; gradient application requires
// exclusive access.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  int dim() const { return k_; }
  Norm norm() const { return norm_; }

  virtual int entity_count() const = 0;
  virtual int relation_count() const = 0;

  // Embedding of a known id (for TransW: composed and, when the projection
  // flag is on, scaled back into the unit ball).
  virtual void entity_embedding(int id, std::vector<double>& out) const = 0;
  virtual void relation_embedding(int id, std::vector<double>& out) const = 0;

  // distance(compose(h), compose(r), compose(t)).
  virtual double score(const Triple& t) const = 0;

  // Subgradient of the pairwise hinge [margin + d(pos) - d(neg)]+ with
  // respect to every trainable parameter; returns the hinge value. The
  // buffer is left empty when the hinge is inactive.
  virtual double pair_gradients(const Triple& pos, const Triple& neg, double margin,
                                GradientBuffer& buf) const = 0;

  virtual void apply_gradients(const GradientBuffer& buf, double lr) = 0;

  // Per-epoch maintenance (TransE renormalizes entity rows here).
  virtual void end_epoch() {}

  // Fingerprints of the vocabularies the model was built against.
  uint64_t entity_fingerprint = 0;
  uint64_t relation_fingerprint = 0;
  uint64_t word_fingerprint = 0;

  // Global validity threshold, stored with the model once fitted.
  std::optional<double> sigma;

 protected:
  friend struct ModelCodec;
  int k_ = 0;
  Norm norm_ = Norm::L2Squared;
};

}  // namespace transw

#endif
