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

#include "transw/transe_model.hpp"

#include <cmath>

namespace transw {

namespace {

void normalize_row(double* p, int k) {
  double s = 0.0;
  for (int d = 0; d < k; d++) s += p[d] * p[d];
  s = std::sqrt(s);
  if (s > 0.0)
    for (int d = 0; d < k; d++) p[d] /= s;
}

}  // namespace

TransEModel::TransEModel(const Vocab& entities, const Vocab& relations, int k, Norm norm,
                         Rng& init_rng) {
  if (k <= 0)
    throw ToolkitError(ErrClass::ConfigInvalid, "TransE embedding dimension must be positive");
  k_ = k;
  norm_ = norm;
  entity_fingerprint = entities.fingerprint();
  relation_fingerprint = relations.fingerprint();
  entity_surfaces = entities.surfaces();
  relation_surfaces = relations.surfaces();

  const double b = 6.0 / std::sqrt(static_cast<double>(k));
  entity_vecs.init(entities.size(), k);
  relation_vecs.init(relations.size(), k);
  for (Mat* m : {&entity_vecs, &relation_vecs}) {
    for (double& x : m->a) x = init_rng.uniform(-b, b);
    for (int i = 0; i < m->rows; i++) normalize_row(m->row(i), k);
  }
}

void TransEModel::check_ids(const Triple& t) const {
  if (t.head < 0 || t.head >= entity_vecs.rows || t.tail < 0 || t.tail >= entity_vecs.rows)
    throw ToolkitError(ErrClass::CapabilityMismatch,
                       "entity id outside the trained table (TransE cannot compose unseen surfaces)");
  if (t.relation < 0 || t.relation >= relation_vecs.rows)
    throw ToolkitError(ErrClass::CapabilityMismatch,
                       "relation id outside the trained table (TransE cannot compose unseen surfaces)");
}

void TransEModel::entity_embedding(int id, std::vector<double>& out) const {
  if (id < 0 || id >= entity_vecs.rows)
    throw ToolkitError(ErrClass::CapabilityMismatch, "entity id outside the trained table");
  out.assign(entity_vecs.row(id), entity_vecs.row(id) + k_);
}

void TransEModel::relation_embedding(int id, std::vector<double>& out) const {
  if (id < 0 || id >= relation_vecs.rows)
    throw ToolkitError(ErrClass::CapabilityMismatch, "relation id outside the trained table");
  out.assign(relation_vecs.row(id), relation_vecs.row(id) + k_);
}

double TransEModel::score(const Triple& t) const {
  check_ids(t);
  const double* h = entity_vecs.row(t.head);
  const double* r = relation_vecs.row(t.relation);
  const double* tl = entity_vecs.row(t.tail);
  double sum = 0.0;
  for (int d = 0; d < k_; d++) {
    double x = h[d] + r[d] - tl[d];
    sum += norm_ == Norm::L1 ? std::fabs(x) : x * x;
  }
  return sum;
}

double TransEModel::pair_gradients(const Triple& pos, const Triple& neg, double margin,
                                   GradientBuffer& buf) const {
  buf.reset(k_);
  double d_pos = score(pos), d_neg = score(neg);
  double loss = margin + d_pos - d_neg;
  if (loss <= 0.0) return 0.0;

  std::vector<double> g(static_cast<size_t>(k_));
  auto accumulate = [&](const Triple& t, double sign) {
    const double* h = entity_vecs.row(t.head);
    const double* r = relation_vecs.row(t.relation);
    const double* tl = entity_vecs.row(t.tail);
    for (int d = 0; d < k_; d++) {
      double x = h[d] + r[d] - tl[d];
      g[static_cast<size_t>(d)] = norm_ == Norm::L1 ? (x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0)) : 2.0 * x;
    }
    // A push invalidates previously returned spans; fill each before the next.
    auto gh = buf.push(ParamTable::EntityVec, t.head);
    for (int d = 0; d < k_; d++) gh[static_cast<size_t>(d)] = sign * g[static_cast<size_t>(d)];
    auto gr = buf.push(ParamTable::RelationVec, t.relation);
    for (int d = 0; d < k_; d++) gr[static_cast<size_t>(d)] = sign * g[static_cast<size_t>(d)];
    auto gt = buf.push(ParamTable::EntityVec, t.tail);
    for (int d = 0; d < k_; d++) gt[static_cast<size_t>(d)] = -sign * g[static_cast<size_t>(d)];
  };
  accumulate(pos, +1.0);
  accumulate(neg, -1.0);
  return loss;
}

void TransEModel::apply_gradients(const GradientBuffer& buf, double lr) {
  for (size_t i = 0; i < buf.size(); i++) {
    const auto& s = buf.slot(i);
    auto v = buf.values(i);
    double* p = nullptr;
    switch (s.table) {
      case ParamTable::EntityVec: p = entity_vecs.row(s.row); break;
      case ParamTable::RelationVec: p = relation_vecs.row(s.row); break;
      default:
        throw ToolkitError(ErrClass::Internal, "gradient table not owned by this model");
    }
    for (int d = 0; d < k_; d++) p[d] -= lr * v[static_cast<size_t>(d)];
  }
}

void TransEModel::end_epoch() {
  for (int i = 0; i < entity_vecs.rows; i++) normalize_row(entity_vecs.row(i), k_);
}

}  // namespace transw
