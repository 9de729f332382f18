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

#ifndef TRANSW_TRAINER_HPP
#define TRANSW_TRAINER_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "transw/dataset.hpp"
#include "transw/model.hpp"
#include "transw/word_table.hpp"

namespace transw {

struct TrainConfig {
  double margin = 1.0;
  double lr = 0.01;
  int epochs = 1000;
  int batch_size = 1;
  int negatives = 1;  // sampled negatives per positive
  uint64_t seed = 1;
  ModelKind kind = ModelKind::TransW;
  Norm norm = Norm::L2Squared;
  int transe_dim = 0;  // TransE embedding size (TransW takes the word dim)
  bool fine_tune_words = false;
  bool project_entities = false;
  int checkpoint_interval = 0;       // epochs; 0 = no checkpoints
  int early_stop_patience = 50;      // 0 = off; needs a validation split
  bool fit_sigma = true;             // store a global threshold in the model

  void validate() const;  // margin > 0, lr > 0, epochs >= 1, ...
};

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double active_fraction = 0.0;  // hinge-active pairs / pairs
  double wall_ms = 0.0;
  std::string checkpoint_path;  // empty when none written
};

struct TrainStats {
  std::vector<EpochStats> epochs;
};

// Corrupts head or tail (fair coin) with a uniformly drawn entity, resampling
// while the corrupted triple equals the positive or is a known true triple.
// After max_retries the last draw is accepted and *exhausted set (pathological
// graphs).
Triple sample_negative(const Triple& positive, const Vocab& entities, const TripleIndex& index,
                       Rng& rng, int max_retries = 100, bool* exhausted = nullptr);

// max(0, margin + d_pos - d_neg).
double margin_loss(double d_pos, double d_neg, double margin);

// One seeded pass: shuffle, one (or `negatives`) sampled corruption(s) per
// positive, subgradient steps, end-of-epoch maintenance. Non-finite loss
// aborts naming the triple.
EpochStats train_epoch(Model& model, const std::vector<Triple>& train, const Vocab& entities,
                       const TripleIndex& train_index, const TrainConfig& cfg, int epoch);

// Called after each completed epoch; returning a non-empty string records a
// written checkpoint path in the stats.
using CheckpointSink = std::function<std::string(const Model&, int epoch, double best_valid,
                                                 int since_improvement)>;

// Full loop with optional early stopping on validation mean loss and
// checkpointing. `start_epoch` > 0 resumes a checkpointed model; the seed
// stream is derived per epoch, so a resumed run continues bit-exactly.
TrainStats run_training(Model& model, const std::vector<Triple>& train,
                        const std::vector<Triple>* valid, const Vocab& entities,
                        const TripleIndex& train_index, const TrainConfig& cfg,
                        int start_epoch = 0, CheckpointSink checkpoint = nullptr,
                        double resume_best_valid = 0.0, int resume_since_improvement = 0);

struct TrainResult {
  std::unique_ptr<Model> model;
  TrainStats stats;
};

// Builds the model for cfg.kind (TransW needs `words`), trains on
// dataset.train, fits sigma when configured.
TrainResult train(const TrainConfig& cfg, const TripleDataset& dataset,
                  const WordEmbeddingTable* words, CheckpointSink checkpoint = nullptr);

// Mean validation hinge loss with negatives drawn from a derived stream.
double validation_loss(const Model& model, const std::vector<Triple>& valid,
                       const Vocab& entities, const TripleIndex& index, const TrainConfig& cfg,
                       int epoch);

}  // namespace transw

#endif
