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

#include "transw/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "transw/transw_model.hpp"

namespace transw {

EvalContext::EvalContext(const Model& model) : model_(&model) {
  entities_.resize(static_cast<size_t>(model.entity_count()));
  for (int i = 0; i < model.entity_count(); i++) model.entity_embedding(i, entities_[static_cast<size_t>(i)]);
  relations_.resize(static_cast<size_t>(model.relation_count()));
  for (int i = 0; i < model.relation_count(); i++)
    model.relation_embedding(i, relations_[static_cast<size_t>(i)]);
}

double EvalContext::slot_distance(const Triple& query, Slot slot, int candidate) const {
  const auto& h = entities_[static_cast<size_t>(slot == Slot::Head ? candidate : query.head)];
  const auto& r = relations_[static_cast<size_t>(query.relation)];
  const auto& t = entities_[static_cast<size_t>(slot == Slot::Tail ? candidate : query.tail)];
  return distance(h, r, t, model_->norm());
}

double EvalContext::score(const Triple& t) const {
  return distance(entities_[static_cast<size_t>(t.head)], relations_[static_cast<size_t>(t.relation)],
                  entities_[static_cast<size_t>(t.tail)], model_->norm());
}

int rank_from_distances(const std::vector<double>& dists, int true_id,
                        const std::vector<char>* filtered_out) {
  const double d_true = dists[static_cast<size_t>(true_id)];
  size_t better = 0, ties = 0;
  for (size_t i = 0; i < dists.size(); i++) {
    if (filtered_out && (*filtered_out)[i] && static_cast<int>(i) != true_id) continue;
    if (dists[i] < d_true) better++;
    else if (dists[i] == d_true) ties++;  // includes the true entity
  }
  // Mean rank of the tie group, rounded up.
  return static_cast<int>(better + ties / 2 + 1);
}

RankResult rank_candidates(const EvalContext& ctx, const Triple& query, Slot slot,
                           const TripleIndex& index) {
  const int n = ctx.entity_count();
  std::vector<double> dists(static_cast<size_t>(n));
  std::vector<char> known(static_cast<size_t>(n), 0);
  Triple probe = query;
  for (int e = 0; e < n; e++) {
    dists[static_cast<size_t>(e)] = ctx.slot_distance(query, slot, e);
    if (slot == Slot::Head) probe.head = e;
    else probe.tail = e;
    known[static_cast<size_t>(e)] = index.contains(probe) ? 1 : 0;
  }
  RankResult result;
  result.query = query;
  result.slot = slot;
  const int true_id = slot == Slot::Head ? query.head : query.tail;
  result.raw_rank = rank_from_distances(dists, true_id);
  result.filtered_rank = rank_from_distances(dists, true_id, &known);
  return result;
}

double hits_at_n(const std::vector<RankResult>& results, int n, RankSetting setting) {
  if (n < 1)
    throw ToolkitError(ErrClass::ConfigInvalid, "hits@n needs n >= 1");
  if (results.empty())
    throw ToolkitError(ErrClass::ConfigInvalid, "hits@n over an empty result set");
  size_t hits = 0;
  for (const auto& r : results) {
    int rank = setting == RankSetting::Raw ? r.raw_rank : r.filtered_rank;
    if (rank <= n) hits++;
  }
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

LinkPredictionReport link_prediction_eval(const Model& model, const std::vector<Triple>& test,
                                          const TripleIndex& index, const std::string& dataset,
                                          int threads) {
  EvalContext ctx(model);
  std::vector<Triple> queries;
  queries.reserve(test.size());
  for (const auto& t : test)
    if (t.positive()) queries.push_back(t);

  LinkPredictionReport report;
  report.dataset = dataset;
  report.results.resize(queries.size() * 2);

  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; i++) {
      report.results[2 * i] = rank_candidates(ctx, queries[i], Slot::Head, index);
      report.results[2 * i + 1] = rank_candidates(ctx, queries[i], Slot::Tail, index);
    }
  };
  if (threads <= 1 || queries.size() < 2) {
    work(0, queries.size());
  } else {
    size_t n_threads = std::min<size_t>(static_cast<size_t>(threads), queries.size());
    std::vector<std::thread> pool;
    size_t chunk = (queries.size() + n_threads - 1) / n_threads;
    for (size_t t = 0; t < n_threads; t++) {
      size_t begin = t * chunk, end = std::min(queries.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  report.query_count = report.results.size();
  for (int n : report.ns) {
    report.hits_raw[n] = report.results.empty() ? 0.0 : hits_at_n(report.results, n, RankSetting::Raw);
    report.hits_filtered[n] =
        report.results.empty() ? 0.0 : hits_at_n(report.results, n, RankSetting::Filtered);
  }
  return report;
}

ThresholdFit fit_threshold(const std::vector<double>& scores, const std::vector<int8_t>& labels,
                           bool balanced) {
  if (scores.empty() || scores.size() != labels.size())
    throw ToolkitError(ErrClass::ConfigInvalid, "threshold fit needs scores with labels");

  size_t total_pos = 0, total_neg = 0;
  for (int8_t l : labels) (l > 0 ? total_pos : total_neg)++;

  // Sort (score, label) ascending; sweep the decision "d <= sigma => positive"
  // over the unique score values.
  std::vector<std::pair<double, int8_t>> items(scores.size());
  for (size_t i = 0; i < scores.size(); i++) items[i] = {scores[i], labels[i]};
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  auto metric = [&](size_t pos_in, size_t neg_in) {
    // pos_in/neg_in: items classified positive (score <= candidate).
    double tp = static_cast<double>(pos_in);
    double tn = static_cast<double>(total_neg - neg_in);
    if (!balanced)
      return (tp + tn) / static_cast<double>(scores.size());
    double tpr = total_pos > 0 ? tp / static_cast<double>(total_pos) : 0.0;
    double tnr = total_neg > 0 ? tn / static_cast<double>(total_neg) : 0.0;
    return (tpr + tnr) / 2.0;
  };

  double best_acc = -1.0, best_sigma = 0.0;
  size_t pos_in = 0, neg_in = 0;
  size_t i = 0;
  while (i < items.size()) {
    const double value = items[i].first;
    while (i < items.size() && items[i].first == value) {
      (items[i].second > 0 ? pos_in : neg_in)++;
      i++;
    }
    double acc = metric(pos_in, neg_in);
    if (acc > best_acc) {
      best_acc = acc;
      // Report the midpoint to the next distinct score when there is one;
      // the top boundary keeps its own value.
      best_sigma = i < items.size() ? (value + items[i].first) / 2.0 : value;
    }
  }
  // All-negative sentinel below the minimum; only a strict improvement wins.
  double acc_none = metric(0, 0);
  if (acc_none > best_acc) {
    best_acc = acc_none;
    best_sigma = items.front().first - 1.0;
  }
  return ThresholdFit{best_sigma, best_acc};
}

ThresholdTable fit_relation_thresholds(const Model& model, const std::vector<Triple>& valid) {
  if (valid.empty())
    throw ToolkitError(ErrClass::LabelsRequired, "threshold fitting needs a labeled validation set");
  EvalContext ctx(model);

  std::map<int, std::vector<double>> scores_by_rel;
  std::map<int, std::vector<int8_t>> labels_by_rel;
  std::vector<double> all_scores;
  std::vector<int8_t> all_labels;
  for (const auto& t : valid) {
    if (!t.has_label())
      throw ToolkitError(ErrClass::LabelsRequired,
                         "validation triples must carry 1/-1 labels for classification");
    double d = ctx.score(t);
    scores_by_rel[t.relation].push_back(d);
    labels_by_rel[t.relation].push_back(t.label);
    all_scores.push_back(d);
    all_labels.push_back(t.label);
  }

  ThresholdTable table;
  ThresholdFit global = fit_threshold(all_scores, all_labels, /*balanced=*/false);
  table.global = global.threshold;
  table.global_accuracy = global.accuracy;
  for (const auto& [rel, scores] : scores_by_rel) {
    const auto& labels = labels_by_rel[rel];
    bool has_pos = false, has_neg = false;
    for (int8_t l : labels) (l > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) continue;  // falls back to the global threshold
    ThresholdFit fit = fit_threshold(scores, labels, /*balanced=*/false);
    table.sigma_r[rel] = fit.threshold;
    table.fit_accuracy[rel] = fit.accuracy;
  }
  return table;
}

ClassificationReport triple_classification_eval(const Model& model, const ThresholdTable& table,
                                                const std::vector<Triple>& test,
                                                const std::string& dataset) {
  EvalContext ctx(model);
  ClassificationReport report;
  report.dataset = dataset;
  report.thresholds = table;
  size_t correct = 0;
  std::map<int, size_t> rel_correct;
  for (const auto& t : test) {
    if (!t.has_label())
      throw ToolkitError(ErrClass::LabelsRequired,
                         "test triples must carry 1/-1 labels for classification");
    auto it = table.sigma_r.find(t.relation);
    double sigma = it != table.sigma_r.end() ? it->second : table.global;
    bool predicted_true = ctx.score(t) <= sigma;
    bool is_true = t.label > 0;
    report.per_relation_count[t.relation]++;
    if (predicted_true == is_true) {
      correct++;
      rel_correct[t.relation]++;
    }
  }
  report.test_count = test.size();
  report.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
  for (const auto& [rel, count] : report.per_relation_count)
    report.per_relation_accuracy[rel] =
        static_cast<double>(rel_correct[rel]) / static_cast<double>(count);
  return report;
}

ThresholdFit fit_global_threshold(const Model& model, const std::vector<Triple>& train,
                                  const Vocab& entities, const TripleIndex& index, Rng& rng) {
  if (train.empty())
    throw ToolkitError(ErrClass::ConfigInvalid, "global threshold fit needs training triples");
  EvalContext ctx(model);
  std::vector<double> scores;
  std::vector<int8_t> labels;
  scores.reserve(train.size() * 2);
  labels.reserve(train.size() * 2);
  for (const auto& t : train) {
    if (!t.positive()) continue;
    scores.push_back(ctx.score(t));
    labels.push_back(1);
    Triple neg = sample_negative(t, entities, index, rng);
    scores.push_back(ctx.score(neg));
    labels.push_back(-1);
  }
  return fit_threshold(scores, labels, /*balanced=*/true);
}

namespace {

struct FoldEvalSets {
  std::vector<Triple> positives;  // capped per relation
  std::vector<Triple> negatives;  // equal count, corrupted
};

FoldEvalSets build_fold_eval_set(const std::vector<Triple>& held_out, const Vocab& entities,
                                 const TripleIndex& full_index, int per_relation_cap, Rng& rng) {
  // Group positives by relation, subsample each group to the cap.
  std::map<int, std::vector<uint32_t>> by_rel;
  for (uint32_t i = 0; i < held_out.size(); i++) by_rel[held_out[i].relation].push_back(i);

  FoldEvalSets sets;
  for (auto& [rel, idxs] : by_rel) {
    if (static_cast<int>(idxs.size()) > per_relation_cap) {
      shuffle(idxs, rng);
      idxs.resize(static_cast<size_t>(per_relation_cap));
      std::sort(idxs.begin(), idxs.end());
    }
    for (uint32_t i : idxs) sets.positives.push_back(held_out[i]);
  }
  // One corrupted negative per positive; known true triples anywhere in the
  // dataset are not acceptable negatives.
  for (const auto& t : sets.positives)
    sets.negatives.push_back(sample_negative(t, entities, full_index, rng));
  return sets;
}

}  // namespace

UnknownFactReport unknown_fact_eval(const std::vector<std::vector<int>>& holdout_sets,
                                    const TripleDataset& dataset, const WordEmbeddingTable& words,
                                    const TrainConfig& cfg, const UnknownFactOptions& opts) {
  if (cfg.kind != ModelKind::TransW)
    throw ToolkitError(ErrClass::CapabilityMismatch,
                       "unknown-fact detection requires the transw model: the baseline has no "
                       "embedding for a relation outside its training vocabulary");
  if (holdout_sets.empty())
    throw ToolkitError(ErrClass::ConfigInvalid, "unknown-fact evaluation needs at least one fold");

  const std::vector<Triple> all = dataset.all_positives();
  const TripleIndex full_index = dataset.positive_index();

  UnknownFactReport report;
  report.dataset = dataset.name;

  for (size_t f = 0; f < holdout_sets.size(); f++) {
    std::set<int> held(holdout_sets[f].begin(), holdout_sets[f].end());
    std::vector<Triple> fold_train, fold_test;
    std::set<int> train_rels, test_rels;
    for (const auto& t : all) {
      if (held.count(t.relation)) {
        fold_test.push_back(t);
        test_rels.insert(t.relation);
      } else {
        fold_train.push_back(t);
        train_rels.insert(t.relation);
      }
    }
    if (fold_test.empty())
      throw ToolkitError(ErrClass::ConfigInvalid,
                         "fold " + std::to_string(f + 1) + " has no held-out facts");
    if (fold_train.empty())
      throw ToolkitError(ErrClass::ConfigInvalid,
                         "fold " + std::to_string(f + 1) + " has no training facts");

    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(opts.seed, "fold", static_cast<uint64_t>(f));
    if (opts.epochs_override > 0) fold_cfg.epochs = opts.epochs_override;
    fold_cfg.fit_sigma = false;  // fitted below on the fold's training partition
    fold_cfg.checkpoint_interval = 0;

    TripleDataset fold_ds;
    fold_ds.name = dataset.name;
    fold_ds.entities = dataset.entities;
    fold_ds.relations = dataset.relations;
    fold_ds.names = dataset.names;
    fold_ds.train = fold_train;
    TrainResult trained = train(fold_cfg, fold_ds, &words);

    TripleIndex fold_index;
    fold_index.insert_all(fold_train);
    Rng sigma_rng(derive_seed(fold_cfg.seed, "sigma"));
    ThresholdFit sigma =
        fit_global_threshold(*trained.model, fold_train, dataset.entities, fold_index, sigma_rng);

    EvalContext ctx(*trained.model);
    UnknownFactFold fold;
    fold.fold = static_cast<int>(f + 1);
    fold.train_facts = fold_train.size();
    fold.test_facts = fold_test.size();
    fold.train_relations = train_rels.size();
    fold.test_relations = test_rels.size();
    fold.sigma = sigma.threshold;

    for (int rep = 0; rep < opts.repeats; rep++) {
      Rng rep_rng(derive_seed(fold_cfg.seed, "subsample", static_cast<uint64_t>(rep)));
      FoldEvalSets sets =
          build_fold_eval_set(fold_test, dataset.entities, full_index, opts.per_relation_cap, rep_rng);
      size_t correct = 0, total = 0;
      for (const auto& t : sets.positives) {
        if (ctx.score(t) <= sigma.threshold) correct++;
        total++;
      }
      for (const auto& t : sets.negatives) {
        if (ctx.score(t) > sigma.threshold) correct++;
        total++;
      }
      fold.repeat_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(total));
    }
    double sum = 0.0, lo = fold.repeat_accuracies[0], hi = fold.repeat_accuracies[0];
    for (double a : fold.repeat_accuracies) {
      sum += a;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
    fold.mean_accuracy = sum / static_cast<double>(fold.repeat_accuracies.size());
    fold.bias_lo = lo - fold.mean_accuracy;
    fold.bias_hi = hi - fold.mean_accuracy;
    report.folds.push_back(std::move(fold));
  }

  double acc = 0.0, blo = 0.0, bhi = 0.0;
  for (const auto& f : report.folds) {
    acc += f.mean_accuracy;
    blo += f.bias_lo;
    bhi += f.bias_hi;
  }
  const double nf = static_cast<double>(report.folds.size());
  report.mean_accuracy = acc / nf;
  report.mean_bias_lo = blo / nf;
  report.mean_bias_hi = bhi / nf;
  return report;
}

namespace {

void record(std::ostream& out, const std::string& protocol, const std::string& dataset,
            const std::string& metric, const std::string& setting, double value) {
  out << protocol << '\t' << dataset << '\t' << metric << '\t' << setting << '\t'
      << std::setprecision(17) << value << '\n';
}

}  // namespace

void write_lp_report(const LinkPredictionReport& r, std::ostream& table, std::ostream& records) {
  table << "link prediction: " << r.dataset << " (" << r.query_count << " ranking queries)\n";
  table << std::left << std::setw(10) << "metric" << std::right << std::setw(10) << "raw"
        << std::setw(10) << "filtered" << '\n';
  for (int n : r.ns) {
    table << std::left << std::setw(10) << ("hits@" + std::to_string(n)) << std::right
          << std::fixed << std::setprecision(4) << std::setw(10) << r.hits_raw.at(n)
          << std::setw(10) << r.hits_filtered.at(n) << '\n';
  }
  table.unsetf(std::ios::fixed);
  for (int n : r.ns) {
    record(records, "lp", r.dataset, "hits@" + std::to_string(n), "raw", r.hits_raw.at(n));
    record(records, "lp", r.dataset, "hits@" + std::to_string(n), "filtered",
           r.hits_filtered.at(n));
  }
  record(records, "lp", r.dataset, "queries", "all", static_cast<double>(r.query_count));
}

void write_tc_report(const ClassificationReport& r, const Vocab& relations, std::ostream& table,
                     std::ostream& records) {
  table << "triple classification: " << r.dataset << " (" << r.test_count << " labeled triples)\n";
  table << "overall accuracy: " << std::fixed << std::setprecision(4) << r.accuracy << '\n';
  table << std::left << std::setw(40) << "relation" << std::right << std::setw(10) << "sigma"
        << std::setw(10) << "accuracy" << std::setw(8) << "n" << '\n';
  for (const auto& [rel, acc] : r.per_relation_accuracy) {
    auto it = r.thresholds.sigma_r.find(rel);
    double sigma = it != r.thresholds.sigma_r.end() ? it->second : r.thresholds.global;
    table << std::left << std::setw(40) << relations.lookup(rel) << std::right << std::setw(10)
          << std::setprecision(4) << sigma << std::setw(10) << acc << std::setw(8)
          << r.per_relation_count.at(rel) << '\n';
  }
  table.unsetf(std::ios::fixed);
  record(records, "tc", r.dataset, "accuracy", "overall", r.accuracy);
  record(records, "tc", r.dataset, "sigma", "global", r.thresholds.global);
  for (const auto& [rel, acc] : r.per_relation_accuracy) {
    record(records, "tc", r.dataset, "accuracy", "rel:" + relations.lookup(rel), acc);
    auto it = r.thresholds.sigma_r.find(rel);
    if (it != r.thresholds.sigma_r.end())
      record(records, "tc", r.dataset, "sigma", "rel:" + relations.lookup(rel), it->second);
  }
}

void write_unknown_report(const UnknownFactReport& r, std::ostream& table, std::ostream& records) {
  table << "unknown-fact detection: " << r.dataset << " (" << r.folds.size() << " folds)\n";
  table << std::left << std::setw(6) << "fold" << std::right << std::setw(22) << "train(facts/rels)"
        << std::setw(22) << "test(facts/rels)" << std::setw(12) << "accuracy" << std::setw(20)
        << "bias(lo,hi)" << std::setw(10) << "sigma" << '\n';
  for (const auto& f : r.folds) {
    std::string train_s = std::to_string(f.train_facts) + "/" + std::to_string(f.train_relations);
    std::string test_s = std::to_string(f.test_facts) + "/" + std::to_string(f.test_relations);
    std::ostringstream bias;
    bias << std::fixed << std::setprecision(4) << "(" << f.bias_lo << "," << f.bias_hi << ")";
    table << std::left << std::setw(6) << f.fold << std::right << std::setw(22) << train_s
          << std::setw(22) << test_s << std::fixed << std::setprecision(4) << std::setw(12)
          << f.mean_accuracy << std::setw(20) << bias.str() << std::setw(10) << f.sigma << '\n';
  }
  table << "average accuracy: " << std::fixed << std::setprecision(4) << r.mean_accuracy << '\n';
  table.unsetf(std::ios::fixed);
  for (const auto& f : r.folds) {
    std::string setting = "fold:" + std::to_string(f.fold);
    record(records, "unknown", r.dataset, "accuracy", setting, f.mean_accuracy);
    record(records, "unknown", r.dataset, "bias_lo", setting, f.bias_lo);
    record(records, "unknown", r.dataset, "bias_hi", setting, f.bias_hi);
    record(records, "unknown", r.dataset, "sigma", setting, f.sigma);
    record(records, "unknown", r.dataset, "train_facts", setting, static_cast<double>(f.train_facts));
    record(records, "unknown", r.dataset, "test_facts", setting, static_cast<double>(f.test_facts));
  }
  record(records, "unknown", r.dataset, "accuracy", "mean", r.mean_accuracy);
  record(records, "unknown", r.dataset, "bias_lo", "mean", r.mean_bias_lo);
  record(records, "unknown", r.dataset, "bias_hi", "mean", r.mean_bias_hi);
}

}  // namespace transw
