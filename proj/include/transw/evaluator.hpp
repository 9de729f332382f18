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

#ifndef TRANSW_EVALUATOR_HPP
#define TRANSW_EVALUATOR_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "transw/model.hpp"
#include "transw/trainer.hpp"

namespace transw {

enum class Slot : uint8_t { Head, Tail };
enum class RankSetting : uint8_t { Raw, Filtered };

struct RankResult {
  Triple query;
  Slot slot = Slot::Head;
  int raw_rank = 0;       // 1-based
  int filtered_rank = 0;  // <= raw_rank
};

// Caches composed entity/relation embeddings for a fixed model so candidate
// scoring is one O(k) distance per entity. Read-only over the model.
class EvalContext {
 public:
  EvalContext(const Model& model);

  const Model& model() const { return *model_; }
  int entity_count() const { return static_cast<int>(entities_.size()); }

  // d(candidate in `slot`, rest of `query` fixed).
  double slot_distance(const Triple& query, Slot slot, int candidate) const;

  double score(const Triple& t) const;  // through the cache

 private:
  const Model* model_;
  std::vector<std::vector<double>> entities_;
  std::vector<std::vector<double>> relations_;
};

// Rank of `true_id` under ascending distance. Ties take the mean rank of the
// tie group, rounded up. `filtered` skips candidates (other than the true
// one) whose substitution forms a known true triple.
int rank_from_distances(const std::vector<double>& dists, int true_id,
                        const std::vector<char>* filtered_out = nullptr);

RankResult rank_candidates(const EvalContext& ctx, const Triple& query, Slot slot,
                           const TripleIndex& index);

// Fraction of results with rank <= n under the chosen setting. Throws on an
// empty result set.
double hits_at_n(const std::vector<RankResult>& results, int n, RankSetting setting);

struct LinkPredictionReport {
  std::string dataset;
  std::vector<int> ns = {1, 3, 10};
  std::map<int, double> hits_raw;
  std::map<int, double> hits_filtered;
  size_t query_count = 0;
  std::vector<RankResult> results;  // kept for invariant checks
};

// Head and tail corruption for every positive test triple.
LinkPredictionReport link_prediction_eval(const Model& model, const std::vector<Triple>& test,
                                          const TripleIndex& index, const std::string& dataset,
                                          int threads = 1);

// Threshold selection: classify positive iff d <= sigma. Candidates are the
// sorted unique scores (reported as the midpoint to the next score where one
// exists) plus an all-negative sentinel below the minimum; the smallest
// maximizer wins, the sentinel only on a strict win.
struct ThresholdFit {
  double threshold = 0.0;
  double accuracy = 0.0;
};
ThresholdFit fit_threshold(const std::vector<double>& scores, const std::vector<int8_t>& labels,
                           bool balanced);

struct ThresholdTable {
  std::map<int, double> sigma_r;        // per relation
  std::map<int, double> fit_accuracy;   // validation accuracy per relation
  double global = 0.0;                  // fallback
  double global_accuracy = 0.0;
};

// Per-relation sigma maximizing validation accuracy; relations without both a
// positive and a negative (or unseen at classification time) fall back to the
// pooled global threshold.
ThresholdTable fit_relation_thresholds(const Model& model, const std::vector<Triple>& valid);

struct ClassificationReport {
  std::string dataset;
  double accuracy = 0.0;
  size_t test_count = 0;
  std::map<int, double> per_relation_accuracy;
  std::map<int, size_t> per_relation_count;
  ThresholdTable thresholds;
};

ClassificationReport triple_classification_eval(const Model& model, const ThresholdTable& table,
                                                const std::vector<Triple>& test,
                                                const std::string& dataset);

// Balanced-accuracy threshold over training positives vs one sampled
// corruption each.
ThresholdFit fit_global_threshold(const Model& model, const std::vector<Triple>& train,
                                  const Vocab& entities, const TripleIndex& index, Rng& rng);

struct UnknownFactFold {
  int fold = 0;
  size_t train_facts = 0, test_facts = 0;
  size_t train_relations = 0, test_relations = 0;
  double sigma = 0.0;
  double mean_accuracy = 0.0;
  double bias_lo = 0.0, bias_hi = 0.0;  // (min - mean, max - mean) over repeats
  std::vector<double> repeat_accuracies;
};

struct UnknownFactReport {
  std::string dataset;
  std::vector<UnknownFactFold> folds;
  double mean_accuracy = 0.0;
  double mean_bias_lo = 0.0, mean_bias_hi = 0.0;
};

struct UnknownFactOptions {
  int per_relation_cap = 5000;
  int repeats = 10;
  uint64_t seed = 1;
  // 0 = keep the training config's epoch count.
  int epochs_override = 0;
};

// Leave-relations-out protocol: per fold, train a fresh TransW model on the
// triples whose relations are kept, fit a global sigma on that training
// partition, then classify a balanced set of held-out-fold positives (capped
// per relation) plus an equal number of corrupted negatives; repeated
// subsampling gives the accuracy spread. Rejects non-TransW configs: the
// baseline has no embedding for an unseen relation.
UnknownFactReport unknown_fact_eval(const std::vector<std::vector<int>>& holdout_sets,
                                    const TripleDataset& dataset, const WordEmbeddingTable& words,
                                    const TrainConfig& cfg, const UnknownFactOptions& opts);

// Dual-format report emission: a human-readable table and line-delimited
// records "protocol <tab> dataset <tab> metric <tab> setting <tab> value".
void write_lp_report(const LinkPredictionReport&, std::ostream& table, std::ostream& records);
void write_tc_report(const ClassificationReport&, const Vocab& relations, std::ostream& table,
                     std::ostream& records);
void write_unknown_report(const UnknownFactReport&, std::ostream& table, std::ostream& records);

}  // namespace transw

#endif
