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

#ifndef TRANSW_TESTS_GRADCHECK_HPP
#define TRANSW_TESTS_GRADCHECK_HPP

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "transw/trainer.hpp"
#include "transw/transe_model.hpp"
#include "transw/transw_model.hpp"
#include "transw/word_table.hpp"

namespace transw::testing {

// Flat views over every trainable scalar of a model, so a central-difference
// oracle can perturb them one by one.
inline std::vector<double*> trainable_scalars(Model& model) {
  std::vector<double*> out;
  if (auto* tw = dynamic_cast<TransWModel*>(&model)) {
    for (auto& x : tw->conn_ent.a) out.push_back(&x);
    for (auto& x : tw->conn_rel.a) out.push_back(&x);
    for (auto& x : tw->bias_ent) out.push_back(&x);
    for (auto& x : tw->bias_rel) out.push_back(&x);
    if (tw->fine_tune_words)
      for (auto& x : tw->word_vecs.a) out.push_back(&x);
  } else if (auto* te = dynamic_cast<TransEModel*>(&model)) {
    for (auto& x : te->entity_vecs.a) out.push_back(&x);
    for (auto& x : te->relation_vecs.a) out.push_back(&x);
  }
  return out;
}

// Sums the sparse gradient buffer into the same flat layout.
inline std::vector<double> flatten_gradients(const Model& model, const GradientBuffer& buf) {
  const int k = model.dim();
  size_t conn_ent0 = 0, conn_rel0 = 0, bias_ent0 = 0, bias_rel0 = 0, words0 = 0;
  size_t ent0 = 0, rel0 = 0, total = 0;
  const auto* tw = dynamic_cast<const TransWModel*>(&model);
  const auto* te = dynamic_cast<const TransEModel*>(&model);
  if (tw) {
    conn_ent0 = 0;
    conn_rel0 = conn_ent0 + tw->conn_ent.a.size();
    bias_ent0 = conn_rel0 + tw->conn_rel.a.size();
    bias_rel0 = bias_ent0 + tw->bias_ent.size();
    words0 = bias_rel0 + tw->bias_rel.size();
    total = words0 + (tw->fine_tune_words ? tw->word_vecs.a.size() : 0);
  } else {
    ent0 = 0;
    rel0 = te->entity_vecs.a.size();
    total = rel0 + te->relation_vecs.a.size();
  }
  std::vector<double> g(total, 0.0);
  for (size_t i = 0; i < buf.size(); i++) {
    const auto& slot = buf.slot(i);
    auto v = buf.values(i);
    size_t base = 0;
    switch (slot.table) {
      case ParamTable::ConnEnt: base = conn_ent0 + static_cast<size_t>(slot.row) * k; break;
      case ParamTable::ConnRel: base = conn_rel0 + static_cast<size_t>(slot.row) * k; break;
      case ParamTable::BiasEnt: base = bias_ent0; break;
      case ParamTable::BiasRel: base = bias_rel0; break;
      case ParamTable::WordVec: base = words0 + static_cast<size_t>(slot.row) * k; break;
      case ParamTable::EntityVec: base = ent0 + static_cast<size_t>(slot.row) * k; break;
      case ParamTable::RelationVec: base = rel0 + static_cast<size_t>(slot.row) * k; break;
    }
    for (int d = 0; d < k; d++) g[base + static_cast<size_t>(d)] += v[static_cast<size_t>(d)];
  }
  return g;
}

struct GradCheckResult {
  bool usable = true;  // false when the instance sits on a kink and was skipped
  double rel_error = 0.0;
};

// Compares the model's analytic pair gradient against central finite
// differences of margin_loss(score(pos), score(neg)). Instances on hinge or
// L1/projection kinks are reported unusable so callers can resample.
inline GradCheckResult gradcheck_pair(Model& model, const Triple& pos, const Triple& neg,
                                      double margin, double eps = 1e-5) {
  GradCheckResult result;

  auto loss_fn = [&] { return margin_loss(model.score(pos), model.score(neg), margin); };

  // Hinge boundary: the subgradient is one-sided there.
  double gap = margin + model.score(pos) - model.score(neg);
  if (std::fabs(gap) < 1e-3) {
    result.usable = false;
    return result;
  }
  // L1 kinks: any near-zero difference component.
  if (model.norm() == Norm::L1) {
    std::vector<double> h, r, t;
    for (const Triple* q : {&pos, &neg}) {
      model.entity_embedding(q->head, h);
      model.relation_embedding(q->relation, r);
      model.entity_embedding(q->tail, t);
      for (size_t d = 0; d < h.size(); d++)
        if (std::fabs(h[d] + r[d] - t[d]) < 1e-3) {
          result.usable = false;
          return result;
        }
    }
  }
  // Projection kink at ||raw composition|| == 1.
  if (auto* tw = dynamic_cast<TransWModel*>(&model); tw && tw->project_entities) {
    for (const Triple* q : {&pos, &neg})
      for (int id : {q->head, q->tail}) {
        std::vector<double> sumv(static_cast<size_t>(tw->dim()), 0.0);
        for (int row : tw->entity_tokens()[static_cast<size_t>(id)])
          for (int d = 0; d < tw->dim(); d++)
            sumv[static_cast<size_t>(d)] += tw->word_vecs.row(row)[d] * tw->conn_ent.row(row)[d];
        for (int d = 0; d < tw->dim(); d++) sumv[static_cast<size_t>(d)] += tw->bias_ent[static_cast<size_t>(d)];
        double n = 0.0;
        for (double x : sumv) n += x * x;
        if (std::fabs(std::sqrt(n) - 1.0) < 1e-3) {
          result.usable = false;
          return result;
        }
      }
  }

  GradientBuffer buf;
  double loss = model.pair_gradients(pos, neg, margin, buf);
  (void)loss;
  std::vector<double> analytic = flatten_gradients(model, buf);

  std::vector<double*> params = trainable_scalars(model);
  std::vector<double> fd(params.size(), 0.0);
  for (size_t i = 0; i < params.size(); i++) {
    double saved = *params[i];
    *params[i] = saved + eps;
    double up = loss_fn();
    *params[i] = saved - eps;
    double down = loss_fn();
    *params[i] = saved;
    fd[i] = (up - down) / (2.0 * eps);
  }

  double num = 0.0, na = 0.0, nf = 0.0;
  for (size_t i = 0; i < fd.size(); i++) {
    double d = analytic[i] - fd[i];
    num += d * d;
    na += analytic[i] * analytic[i];
    nf += fd[i] * fd[i];
  }
  // Central differences carry ~eps*|loss|/h of roundoff noise per component;
  // below that floor both sides are zero for all practical purposes.
  double err = std::sqrt(num);
  if (err < 1e-7) {
    result.rel_error = 0.0;
    return result;
  }
  double denom = std::max({std::sqrt(na), std::sqrt(nf), 1e-8});
  result.rel_error = err / denom;
  return result;
}

// Random small TransW world: k <= 4, up to 3 tokens per element.
struct SmallWorld {
  Vocab entities, relations;
  NameMap names;
  std::unique_ptr<WordEmbeddingTable> words;  // backed by a temp file
  std::unique_ptr<TransWModel> transw;
  std::unique_ptr<TransEModel> transe;
};

inline SmallWorld make_small_world(const std::filesystem::path& dir, Rng& rng, Norm norm,
                                   bool fine_tune, bool project) {
  SmallWorld w;
  const int k = 1 + static_cast<int>(rng.index(4));
  const int n_words = 3 + static_cast<int>(rng.index(4));
  std::vector<std::string> word_names;
  for (int i = 0; i < n_words; i++) word_names.push_back("w" + std::to_string(i));

  std::filesystem::path path = dir / ("words-" + std::to_string(rng.next_u64() % 100000) + ".txt");
  {
    std::ofstream out(path);
    out.precision(17);
    for (const auto& name : word_names) {
      out << name;
      for (int d = 0; d < k; d++) out << ' ' << rng.uniform(-1.0, 1.0);
      out << '\n';
    }
  }
  w.words = std::make_unique<WordEmbeddingTable>(
      WordEmbeddingTable::load(path.string(), k, OovPolicy::HashSeeded));

  // Up to 2 shared-vocabulary tokens plus one unique token: <= 3 per element.
  auto random_surface = [&](const std::string& unique) {
    int n = static_cast<int>(rng.index(3));
    std::string s;
    for (int i = 0; i < n; i++) s += word_names[rng.index(word_names.size())] + "_";
    return s + unique;
  };
  for (int i = 0; i < 3; i++) w.entities.id_of(random_surface("e" + std::to_string(i)));
  for (int i = 0; i < 2; i++) w.relations.id_of(random_surface("r" + std::to_string(i)));

  w.transw = std::make_unique<TransWModel>(w.entities, w.relations, w.names, *w.words, norm,
                                           fine_tune, project, rng);
  // Move parameters off the ones/zeros starting point.
  for (auto& x : w.transw->conn_ent.a) x = rng.uniform(0.25, 1.75);
  for (auto& x : w.transw->conn_rel.a) x = rng.uniform(0.25, 1.75);
  for (auto& x : w.transw->bias_ent) x = rng.uniform(-0.5, 0.5);
  for (auto& x : w.transw->bias_rel) x = rng.uniform(-0.5, 0.5);

  w.transe = std::make_unique<TransEModel>(w.entities, w.relations, k, norm, rng);
  return w;
}

inline std::pair<Triple, Triple> random_pair(SmallWorld& w, Rng& rng) {
  Triple pos{static_cast<int32_t>(rng.index(3)), static_cast<int32_t>(rng.index(2)),
             static_cast<int32_t>(rng.index(3))};
  Triple neg = pos;
  if (rng.coin()) {
    do { neg.head = static_cast<int32_t>(rng.index(3)); } while (neg.head == pos.head);
  } else {
    do { neg.tail = static_cast<int32_t>(rng.index(3)); } while (neg.tail == pos.tail);
  }
  return {pos, neg};
}

}  // namespace transw::testing

#endif
