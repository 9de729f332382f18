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

#include "transw/trainer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include "transw/evaluator.hpp"
#include "transw/transe_model.hpp"
#include "transw/transw_model.hpp"

namespace transw {

void TrainConfig::validate() const {
  if (!(margin > 0.0))
    throw ToolkitError(ErrClass::ConfigInvalid, "train.margin must be > 0");
  if (!(lr > 0.0))
    throw ToolkitError(ErrClass::ConfigInvalid, "train.lr must be > 0");
  if (epochs < 1)
    throw ToolkitError(ErrClass::ConfigInvalid, "train.epochs must be >= 1");
  if (batch_size < 1)
    throw ToolkitError(ErrClass::ConfigInvalid, "train.batch must be >= 1");
  if (negatives < 1)
    throw ToolkitError(ErrClass::ConfigInvalid, "train.negatives must be >= 1");
  if (checkpoint_interval < 0)
    throw ToolkitError(ErrClass::ConfigInvalid, "train.checkpoint_interval must be >= 0");
  if (early_stop_patience < 0)
    throw ToolkitError(ErrClass::ConfigInvalid, "train.early_stop_patience must be >= 0");
  if (kind == ModelKind::TransE && transe_dim <= 0)
    throw ToolkitError(ErrClass::ConfigInvalid, "model.dim must be set for transe");
}

Triple sample_negative(const Triple& positive, const Vocab& entities, const TripleIndex& index,
                       Rng& rng, int max_retries, bool* exhausted) {
  const int n = entities.size();
  if (n < 2)
    throw ToolkitError(ErrClass::ConfigInvalid, "negative sampling needs at least 2 entities");
  if (exhausted) *exhausted = false;
  Triple neg = positive;
  neg.label = 0;
  const bool corrupt_head = rng.coin();
  for (int attempt = 0; attempt < max_retries; attempt++) {
    int e = static_cast<int>(rng.index(static_cast<size_t>(n)));
    if (corrupt_head) neg.head = e;
    else neg.tail = e;
    if (!same_ids(neg, positive) && !index.contains(neg)) return neg;
  }
  if (exhausted) *exhausted = true;
  return neg;
}

double margin_loss(double d_pos, double d_neg, double margin) {
  double l = margin + d_pos - d_neg;
  return l > 0.0 ? l : 0.0;
}

namespace {

[[noreturn]] void abort_non_finite(const Triple& t, double loss) {
  throw ToolkitError(ErrClass::Internal,
                     "non-finite loss " + std::to_string(loss) + " at triple (" +
                         std::to_string(t.head) + ", " + std::to_string(t.relation) + ", " +
                         std::to_string(t.tail) + "); lower the learning rate");
}

}  // namespace

EpochStats train_epoch(Model& model, const std::vector<Triple>& train, const Vocab& entities,
                       const TripleIndex& train_index, const TrainConfig& cfg, int epoch) {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(cfg.seed, "epoch", static_cast<uint64_t>(epoch)));

  std::vector<uint32_t> order(train.size());
  for (size_t i = 0; i < order.size(); i++) order[i] = static_cast<uint32_t>(i);
  shuffle(order, rng);

  GradientBuffer step, batch;
  double loss_sum = 0.0;
  size_t pairs = 0, active = 0, exhausted_count = 0;
  size_t in_batch = 0;

  auto flush_batch = [&] {
    if (batch.empty()) {
      in_batch = 0;
      return;
    }
    model.apply_gradients(batch, cfg.lr);
    batch.reset(model.dim());
    in_batch = 0;
  };

  batch.reset(model.dim());
  for (uint32_t idx : order) {
    const Triple& pos = train[idx];
    for (int j = 0; j < cfg.negatives; j++) {
      bool exhausted = false;
      Triple neg = sample_negative(pos, entities, train_index, rng, 100, &exhausted);
      if (exhausted) exhausted_count++;
      double loss = model.pair_gradients(pos, neg, cfg.margin, step);
      if (!std::isfinite(loss)) abort_non_finite(pos, loss);
      loss_sum += loss;
      pairs++;
      if (loss > 0.0) {
        active++;
        for (size_t i = 0; i < step.size(); i++) {
          auto dst = batch.push(step.slot(i).table, step.slot(i).row);
          auto src = step.values(i);
          std::copy(src.begin(), src.end(), dst.begin());
        }
      }
    }
    in_batch++;
    if (static_cast<int>(in_batch) >= cfg.batch_size) flush_batch();
  }
  flush_batch();
  model.end_epoch();

  if (exhausted_count > 0)
    std::cerr << "warning: epoch " << epoch << ": negative sampling retries exhausted for "
              << exhausted_count << " positives (corrupted triples may be known facts)\n";

  EpochStats stats;
  stats.epoch = epoch;
  stats.mean_loss = pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0;
  stats.active_fraction = pairs > 0 ? static_cast<double>(active) / static_cast<double>(pairs) : 0.0;
  stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return stats;
}

double validation_loss(const Model& model, const std::vector<Triple>& valid,
                       const Vocab& entities, const TripleIndex& index, const TrainConfig& cfg,
                       int epoch) {
  if (valid.empty()) return 0.0;
  Rng rng(derive_seed(cfg.seed, "valid", static_cast<uint64_t>(epoch)));
  double sum = 0.0;
  size_t n = 0;
  for (const auto& t : valid) {
    if (!t.positive()) continue;
    Triple neg = sample_negative(t, entities, index, rng);
    sum += margin_loss(model.score(t), model.score(neg), cfg.margin);
    n++;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

TrainStats run_training(Model& model, const std::vector<Triple>& train,
                        const std::vector<Triple>* valid, const Vocab& entities,
                        const TripleIndex& train_index, const TrainConfig& cfg, int start_epoch,
                        CheckpointSink checkpoint, double resume_best_valid,
                        int resume_since_improvement) {
  cfg.validate();
  TrainStats stats;
  const bool early_stop = cfg.early_stop_patience > 0 && valid && !valid->empty();
  double best_valid =
      start_epoch > 0 ? resume_best_valid : std::numeric_limits<double>::infinity();
  int since_improvement = start_epoch > 0 ? resume_since_improvement : 0;

  for (int epoch = start_epoch + 1; epoch <= cfg.epochs; epoch++) {
    EpochStats es = train_epoch(model, train, entities, train_index, cfg, epoch);

    if (early_stop) {
      double vl = validation_loss(model, *valid, entities, train_index, cfg, epoch);
      if (vl < best_valid) {
        best_valid = vl;
        since_improvement = 0;
      } else {
        since_improvement++;
      }
    }
    if (checkpoint && cfg.checkpoint_interval > 0 && epoch % cfg.checkpoint_interval == 0)
      es.checkpoint_path = checkpoint(model, epoch, best_valid, since_improvement);

    stats.epochs.push_back(std::move(es));
    if (early_stop && since_improvement >= cfg.early_stop_patience) break;
  }
  return stats;
}

TrainResult train(const TrainConfig& cfg, const TripleDataset& dataset,
                  const WordEmbeddingTable* words, CheckpointSink checkpoint) {
  cfg.validate();
  if (dataset.train.empty())
    throw ToolkitError(ErrClass::ConfigInvalid, "training split is empty");

  Rng init_rng(derive_seed(cfg.seed, "init"));
  std::unique_ptr<Model> model;
  if (cfg.kind == ModelKind::TransW) {
    if (!words)
      throw ToolkitError(ErrClass::ConfigInvalid, "transw requires a word vector table");
    model = std::make_unique<TransWModel>(dataset.entities, dataset.relations, dataset.names,
                                          *words, cfg.norm, cfg.fine_tune_words,
                                          cfg.project_entities, init_rng);
  } else {
    model = std::make_unique<TransEModel>(dataset.entities, dataset.relations, cfg.transe_dim,
                                          cfg.norm, init_rng);
  }

  // Training positives only; negatives are validated against the training
  // graph so evaluation facts never leak into sampling.
  std::vector<Triple> train_pos;
  train_pos.reserve(dataset.train.size());
  for (const auto& t : dataset.train)
    if (t.positive()) train_pos.push_back(t);
  TripleIndex train_index;
  train_index.insert_all(dataset.train);

  TrainResult result;
  result.stats = run_training(*model, train_pos, &dataset.valid, dataset.entities, train_index,
                              cfg, 0, std::move(checkpoint));

  if (cfg.fit_sigma) {
    Rng sigma_rng(derive_seed(cfg.seed, "sigma"));
    model->sigma =
        fit_global_threshold(*model, train_pos, dataset.entities, train_index, sigma_rng)
            .threshold;
  }
  result.model = std::move(model);
  return result;
}

}  // namespace transw
