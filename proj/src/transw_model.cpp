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

#include "transw/transw_model.hpp"

#include <cmath>

#include "transw/tokenize.hpp"

namespace transw {

namespace {

// d/dDelta of the distance at Delta = h + r - t.
void distance_grad(const std::vector<double>& delta, Norm norm, std::vector<double>& g) {
  g.resize(delta.size());
  if (norm == Norm::L1) {
    for (size_t i = 0; i < delta.size(); i++)
      g[i] = delta[i] > 0 ? 1.0 : (delta[i] < 0 ? -1.0 : 0.0);
  } else {
    for (size_t i = 0; i < delta.size(); i++) g[i] = 2.0 * delta[i];
  }
}

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TransWModel::TransWModel(const Vocab& entities, const Vocab& relations, const NameMap& names,
                         const WordEmbeddingTable& words, Norm norm, bool fine_tune,
                         bool project, Rng& init_rng) {
  k_ = words.dim();
  norm_ = norm;
  fine_tune_words = fine_tune;
  project_entities = project;
  oov_policy = words.policy();
  oov_scale = words.oov_scale();
  entity_fingerprint = entities.fingerprint();
  relation_fingerprint = relations.fingerprint();
  word_fingerprint = words.fingerprint();

  entity_surfaces = entities.surfaces();
  relation_surfaces = relations.surfaces();

  // Union the words of every surface, in first-seen order, so that the same
  // files always produce the same parameter layout.
  std::vector<std::vector<double>> vecs;
  auto intern = [&](const std::string& word) {
    auto it = word_index_.find(word);
    if (it != word_index_.end()) return it->second;
    int row = static_cast<int>(word_list.size());
    word_list.push_back(word);
    word_index_.emplace(word_list.back(), row);
    vecs.push_back(words.resolve(word));
    return row;
  };
  auto tokenize_all = [&](const std::vector<std::string>& surfaces,
                          std::vector<std::vector<int>>& out) {
    out.reserve(surfaces.size());
    for (const auto& s : surfaces) {
      TokenSequence seq = tokenize_named(s, names);
      std::vector<int> rows;
      rows.reserve(seq.tokens.size());
      for (const auto& tok : seq.tokens) rows.push_back(intern(tok));
      out.push_back(std::move(rows));
    }
  };
  tokenize_all(entity_surfaces, ent_tokens_);
  tokenize_all(relation_surfaces, rel_tokens_);

  const int n_w = static_cast<int>(word_list.size());
  word_vecs.init(n_w, k_);
  for (int i = 0; i < n_w; i++)
    std::copy(vecs[i].begin(), vecs[i].end(), word_vecs.row(i));

  // All-ones start makes the initial composition a plain bag of word
  // vectors; the noise breaks symmetry between repeated words.
  conn_ent.init(n_w, k_);
  conn_rel.init(n_w, k_);
  for (Mat* m : {&conn_ent, &conn_rel})
    for (double& x : m->a) x = 1.0 + init_rng.uniform(-0.1, 0.1);
  bias_ent.assign(static_cast<size_t>(k_), 0.0);
  bias_rel.assign(static_cast<size_t>(k_), 0.0);
}

void TransWModel::rebuild_word_index() {
  word_index_.clear();
  for (size_t i = 0; i < word_list.size(); i++)
    word_index_.emplace(word_list[i], static_cast<int>(i));
}

int TransWModel::word_row(std::string_view word) const {
  auto it = word_index_.find(word);
  return it == word_index_.end() ? -1 : it->second;
}

// Canonical order: terms in token order, bias last. The save format and the
// bitwise composition tests rely on it.
void TransWModel::compose_entity_raw(int id, double* out) const {
  std::fill(out, out + k_, 0.0);
  for (int row : ent_tokens_[static_cast<size_t>(id)]) {
    const double* v = word_vecs.row(row);
    const double* c = conn_ent.row(row);
    for (int d = 0; d < k_; d++) out[d] += v[d] * c[d];
  }
  for (int d = 0; d < k_; d++) out[d] += bias_ent[static_cast<size_t>(d)];
}

void TransWModel::compose_relation_raw(int id, double* out) const {
  std::fill(out, out + k_, 0.0);
  for (int row : rel_tokens_[static_cast<size_t>(id)]) {
    const double* v = word_vecs.row(row);
    const double* c = conn_rel.row(row);
    for (int d = 0; d < k_; d++) out[d] += v[d] * c[d];
  }
  for (int d = 0; d < k_; d++) out[d] += bias_rel[static_cast<size_t>(d)];
}

void TransWModel::entity_embedding(int id, std::vector<double>& out) const {
  if (id < 0 || id >= entity_count())
    throw ToolkitError(ErrClass::Internal, "entity id out of range: " + std::to_string(id));
  out.resize(static_cast<size_t>(k_));
  compose_entity_raw(id, out.data());
  if (project_entities) {
    double n = l2_norm(out);
    if (n > 1.0)
      for (double& x : out) x /= n;
  }
}

void TransWModel::relation_embedding(int id, std::vector<double>& out) const {
  if (id < 0 || id >= relation_count())
    throw ToolkitError(ErrClass::Internal, "relation id out of range: " + std::to_string(id));
  out.resize(static_cast<size_t>(k_));
  compose_relation_raw(id, out.data());
}

double TransWModel::score(const Triple& t) const {
  std::vector<double> h, r, tl;
  entity_embedding(t.head, h);
  relation_embedding(t.relation, r);
  entity_embedding(t.tail, tl);
  return distance(h, r, tl, norm_);
}

ComposedEmbedding TransWModel::compose(const std::vector<std::string>& tokens, Role role,
                                       const WordEmbeddingTable* external) const {
  ComposedEmbedding out;
  out.role = role;
  out.tokens = tokens;
  out.vec.assign(static_cast<size_t>(k_), 0.0);
  const Mat& conn = role == Role::Entity ? conn_ent : conn_rel;
  for (const auto& tok : tokens) {
    int row = word_row(tok);
    if (row >= 0) {
      const double* v = word_vecs.row(row);
      const double* c = conn.row(row);
      for (int d = 0; d < k_; d++) out.vec[static_cast<size_t>(d)] += v[d] * c[d];
      continue;
    }
    // Word unknown to the model: resolve the vector externally or by the
    // stored OOV policy, and use the untrained connection fallback (ones).
    std::vector<double> v;
    if (external && external->contains(tok)) v = external->resolve(tok);
    else v = WordEmbeddingTable::oov_vector(tok, oov_policy, k_, oov_scale);
    for (int d = 0; d < k_; d++) out.vec[static_cast<size_t>(d)] += v[static_cast<size_t>(d)];
  }
  const std::vector<double>& bias = role == Role::Entity ? bias_ent : bias_rel;
  for (int d = 0; d < k_; d++) out.vec[static_cast<size_t>(d)] += bias[static_cast<size_t>(d)];
  return out;
}

ComposedEmbedding TransWModel::compose_surface(std::string_view surface, Role role,
                                               const WordEmbeddingTable* external) const {
  return compose(tokenize(surface).tokens, role, external);
}

namespace {

// Pullback of a gradient through p(x) = x / max(1, ||x||2).
void projection_pullback(const std::vector<double>& raw, std::vector<double>& grad) {
  double n = l2_norm(raw);
  if (n <= 1.0) return;
  double dot = 0.0;
  for (size_t i = 0; i < raw.size(); i++) dot += raw[i] * grad[i];
  const double n3 = n * n * n;
  for (size_t i = 0; i < raw.size(); i++) grad[i] = grad[i] / n - raw[i] * dot / n3;
}

}  // namespace

double TransWModel::pair_gradients(const Triple& pos, const Triple& neg, double margin,
                                   GradientBuffer& buf) const {
  buf.reset(k_);

  std::vector<double> h_raw(static_cast<size_t>(k_)), r(static_cast<size_t>(k_)),
      t_raw(static_cast<size_t>(k_));
  std::vector<double> h, t, delta(static_cast<size_t>(k_)), g;
  std::vector<double> gh, gt;

  double d_pos = 0.0, d_neg = 0.0;
  // sign +1 accumulates d(pos), -1 subtracts d(neg).
  auto accumulate = [&](const Triple& triple, double sign, bool apply) -> double {
    compose_entity_raw(triple.head, h_raw.data());
    compose_relation_raw(triple.relation, r.data());
    compose_entity_raw(triple.tail, t_raw.data());
    h = h_raw;
    t = t_raw;
    if (project_entities) {
      double nh = l2_norm(h);
      if (nh > 1.0)
        for (double& x : h) x /= nh;
      double nt = l2_norm(t);
      if (nt > 1.0)
        for (double& x : t) x /= nt;
    }
    for (int d = 0; d < k_; d++)
      delta[static_cast<size_t>(d)] =
          h[static_cast<size_t>(d)] + r[static_cast<size_t>(d)] - t[static_cast<size_t>(d)];
    double dist = 0.0;
    for (double x : delta) dist += norm_ == Norm::L1 ? std::fabs(x) : x * x;
    if (!apply) return dist;

    distance_grad(delta, norm_, g);
    // Gradients w.r.t. the composed vectors, pulled back through the
    // projection for the two entity slots.
    gh = g;
    gt = g;
    for (double& x : gt) x = -x;
    if (project_entities) {
      projection_pullback(h_raw, gh);
      projection_pullback(t_raw, gt);
    }

    auto spread_entity = [&](int id, const std::vector<double>& ge) {
      for (int row : ent_tokens_[static_cast<size_t>(id)]) {
        const double* v = word_vecs.row(row);
        auto slot = buf.push(ParamTable::ConnEnt, row);
        for (int d = 0; d < k_; d++) slot[static_cast<size_t>(d)] = sign * ge[static_cast<size_t>(d)] * v[d];
        if (fine_tune_words) {
          const double* c = conn_ent.row(row);
          auto wslot = buf.push(ParamTable::WordVec, row);
          for (int d = 0; d < k_; d++)
            wslot[static_cast<size_t>(d)] = sign * ge[static_cast<size_t>(d)] * c[d];
        }
      }
      auto bslot = buf.push(ParamTable::BiasEnt, -1);
      for (int d = 0; d < k_; d++) bslot[static_cast<size_t>(d)] = sign * ge[static_cast<size_t>(d)];
    };
    spread_entity(triple.head, gh);
    spread_entity(triple.tail, gt);

    for (int row : rel_tokens_[static_cast<size_t>(triple.relation)]) {
      const double* v = word_vecs.row(row);
      auto slot = buf.push(ParamTable::ConnRel, row);
      for (int d = 0; d < k_; d++) slot[static_cast<size_t>(d)] = sign * g[static_cast<size_t>(d)] * v[d];
      if (fine_tune_words) {
        const double* c = conn_rel.row(row);
        auto wslot = buf.push(ParamTable::WordVec, row);
        for (int d = 0; d < k_; d++)
          wslot[static_cast<size_t>(d)] = sign * g[static_cast<size_t>(d)] * c[d];
      }
    }
    auto bslot = buf.push(ParamTable::BiasRel, -1);
    for (int d = 0; d < k_; d++) bslot[static_cast<size_t>(d)] = sign * g[static_cast<size_t>(d)];
    return dist;
  };

  d_pos = accumulate(pos, +1.0, false);
  d_neg = accumulate(neg, -1.0, false);
  double loss = margin + d_pos - d_neg;
  if (loss <= 0.0) {
    buf.reset(k_);
    return 0.0;
  }
  accumulate(pos, +1.0, true);
  accumulate(neg, -1.0, true);
  return loss;
}

void TransWModel::apply_gradients(const GradientBuffer& buf, double lr) {
  for (size_t i = 0; i < buf.size(); i++) {
    const auto& s = buf.slot(i);
    auto v = buf.values(i);
    double* p = nullptr;
    switch (s.table) {
      case ParamTable::ConnEnt: p = conn_ent.row(s.row); break;
      case ParamTable::ConnRel: p = conn_rel.row(s.row); break;
      case ParamTable::BiasEnt: p = bias_ent.data(); break;
      case ParamTable::BiasRel: p = bias_rel.data(); break;
      case ParamTable::WordVec:
        if (!fine_tune_words)
          throw ToolkitError(ErrClass::Internal, "word-vector gradient on a frozen table");
        p = word_vecs.row(s.row);
        break;
      default:
        throw ToolkitError(ErrClass::Internal, "gradient table not owned by this model");
    }
    for (int d = 0; d < k_; d++) p[d] -= lr * v[static_cast<size_t>(d)];
  }
}

}  // namespace transw
