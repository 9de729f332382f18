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

#ifndef TRANSW_TRANSE_MODEL_HPP
#define TRANSW_TRANSE_MODEL_HPP

#include <string>
#include <vector>

#include "transw/model.hpp"
#include "transw/rng.hpp"

namespace transw {

// Baseline: one free vector per entity and relation, d = ||h + r - t||.
// Cannot score ids outside its tables; that asymmetry against TransW is the
// point of the comparison.
class TransEModel : public Model {
 public:
  // Uniform init in [-6/sqrt(k), 6/sqrt(k)], rows L2-normalized.
  TransEModel(const Vocab& entities, const Vocab& relations, int k, Norm norm, Rng& init_rng);

  ModelKind kind() const override { return ModelKind::TransE; }
  int entity_count() const override { return entity_vecs.rows; }
  int relation_count() const override { return relation_vecs.rows; }

  void entity_embedding(int id, std::vector<double>& out) const override;
  void relation_embedding(int id, std::vector<double>& out) const override;
  double score(const Triple& t) const override;
  double pair_gradients(const Triple& pos, const Triple& neg, double margin,
                        GradientBuffer& buf) const override;
  void apply_gradients(const GradientBuffer& buf, double lr) override;

  // Entity rows are renormalized to unit L2 norm at the end of every epoch.
  void end_epoch() override;

  std::vector<std::string> entity_surfaces;
  std::vector<std::string> relation_surfaces;
  Mat entity_vecs;    // n_e x k
  Mat relation_vecs;  // n_r x k

 private:
  friend struct ModelCodec;
  TransEModel() = default;

  void check_ids(const Triple& t) const;
};

}  // namespace transw

#endif
