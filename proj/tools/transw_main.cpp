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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "transw/config.hpp"
#include "transw/evaluator.hpp"
#include "transw/serialize.hpp"
#include "transw/trainer.hpp"
#include "transw/transe_model.hpp"
#include "transw/transw_model.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace transw;

namespace {

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  return buf;
}

// All artifacts go through temp-file-plus-rename so failures never leave a
// partial file behind.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw ToolkitError(ErrClass::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out)
      throw ToolkitError(ErrClass::IoError, "write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

struct LoadedInputs {
  TripleDataset dataset;
  std::optional<WordEmbeddingTable> words;
};

LoadedInputs load_inputs(const RunConfig& cfg, bool need_words) {
  LoadedInputs in;
  if (need_words) {
    if (cfg.words_path.empty())
      throw ToolkitError(ErrClass::ConfigInvalid, "words.path is required for the transw model");
    in.words = WordEmbeddingTable::load(cfg.words_path, cfg.words_dim, cfg.oov_policy,
                                        cfg.oov_scale);
  }
  in.dataset = load_dataset(cfg.data);
  return in;
}

json manifest_json(const RunConfig& cfg, const TripleDataset& ds,
                   const WordEmbeddingTable* words) {
  json j;
  j["toolkit_version"] = kToolkitVersion;
  j["started_at"] = iso_timestamp();
  j["seed"] = cfg.train.seed;
  j["config"] = cfg.resolved;
  j["dataset"] = {
      {"name", ds.name},
      {"entities", ds.entities.size()},
      {"relations", ds.relations.size()},
      {"train", ds.train.size()},
      {"valid", ds.valid.size()},
      {"test", ds.test.size()},
      {"fingerprint", ds.fingerprint()},
      {"entity_fingerprint", ds.entities.fingerprint()},
      {"relation_fingerprint", ds.relations.fingerprint()},
  };
  if (words) {
    j["words"] = {
        {"count", words->size()},
        {"dim", words->dim()},
        {"oov_policy", oov_policy_name(words->policy())},
        {"oov_scale", words->oov_scale()},
        {"fingerprint", words->fingerprint()},
    };
  }
  return j;
}

void check_model_pairing(const Model& model, const TripleDataset& ds) {
  if (model.entity_fingerprint != ds.entities.fingerprint() ||
      model.relation_fingerprint != ds.relations.fingerprint())
    throw ToolkitError(ErrClass::FingerprintMismatch,
                       "model was trained against different vocabularies than '" + ds.name +
                           "' (entity/relation fingerprint mismatch)");
}

std::string stats_tsv(const TrainStats& stats) {
  std::ostringstream out;
  out << "epoch\tmean_loss\tactive_fraction\twall_ms\tcheckpoint\n";
  for (const auto& e : stats.epochs) {
    out << e.epoch << '\t' << std::setprecision(17) << e.mean_loss << '\t' << e.active_fraction
        << '\t' << e.wall_ms << '\t' << (e.checkpoint_path.empty() ? "-" : e.checkpoint_path)
        << '\n';
  }
  return out.str();
}

int cmd_train(const std::string& config_path, const std::vector<std::string>& overrides,
              const std::string& out_dir, const std::string& resume_path) {
  RunConfig cfg = load_run_config(config_path, overrides);
  cfg.train.validate();
  LoadedInputs in = load_inputs(cfg, cfg.train.kind == ModelKind::TransW);
  const WordEmbeddingTable* words = in.words ? &*in.words : nullptr;

  fs::create_directories(out_dir);
  write_file_atomic(fs::path(out_dir) / "manifest.json",
                    manifest_json(cfg, in.dataset, words).dump(2) + "\n");

  CheckpointSink sink = [&](const Model& model, int epoch, double best_valid,
                            int since) -> std::string {
    fs::path path = fs::path(out_dir) / ("checkpoint-" + std::to_string(epoch) + ".bin");
    CheckpointMeta meta{epoch, best_valid, since};
    save_model(model, path.string(), meta);
    return path.string();
  };

  TrainResult result;
  if (resume_path.empty()) {
    result = train(cfg.train, in.dataset, words, sink);
  } else {
    CheckpointMeta meta;
    std::unique_ptr<Model> model = load_model(resume_path, 0, &meta);
    if (model->kind() != cfg.train.kind)
      throw ToolkitError(ErrClass::CapabilityMismatch,
                         "checkpoint model kind does not match model.kind");
    check_model_pairing(*model, in.dataset);
    std::vector<Triple> train_pos;
    for (const auto& t : in.dataset.train)
      if (t.positive()) train_pos.push_back(t);
    TripleIndex train_index;
    train_index.insert_all(in.dataset.train);
    result.stats =
        run_training(*model, train_pos, &in.dataset.valid, in.dataset.entities, train_index,
                     cfg.train, meta.epoch, sink, meta.best_valid_loss,
                     meta.epochs_since_improvement);
    if (cfg.train.fit_sigma) {
      Rng sigma_rng(derive_seed(cfg.train.seed, "sigma"));
      model->sigma = fit_global_threshold(*model, train_pos, in.dataset.entities, train_index,
                                          sigma_rng)
                         .threshold;
    }
    result.model = std::move(model);
  }

  save_model(*result.model, (fs::path(out_dir) / "model.bin").string());
  write_file_atomic(fs::path(out_dir) / "stats.tsv", stats_tsv(result.stats));

  json done;
  done["finished_at"] = iso_timestamp();
  done["epochs_run"] = result.stats.epochs.size();
  if (result.model->sigma) done["sigma"] = *result.model->sigma;
  done["model"] = (fs::path(out_dir) / "model.bin").string();
  write_file_atomic(fs::path(out_dir) / "result.json", done.dump(2) + "\n");

  std::cout << "trained " << model_kind_name(result.model->kind()) << " model: "
            << (fs::path(out_dir) / "model.bin").string() << " (" << result.stats.epochs.size()
            << " epochs)\n";
  return 0;
}

void write_report_pair(const fs::path& dir, const std::string& stem, const std::string& table,
                       const std::string& records) {
  fs::create_directories(dir);
  write_file_atomic(dir / (stem + "_report.txt"), table);
  write_file_atomic(dir / (stem + "_records.tsv"), records);
  std::cout << (dir / (stem + "_report.txt")).string() << "\n"
            << (dir / (stem + "_records.tsv")).string() << "\n";
}

int cmd_eval(const std::string& protocol, const std::string& model_path,
             const std::string& config_path, const std::vector<std::string>& overrides,
             const std::string& out_dir) {
  RunConfig cfg = load_run_config(config_path, overrides);

  if (protocol == "lp" || protocol == "tc") {
    if (model_path.empty())
      throw ToolkitError(ErrClass::ConfigInvalid, "eval " + protocol + " requires --model");
    TripleDataset ds = load_dataset(cfg.data);
    std::unique_ptr<Model> model = load_model(model_path);
    check_model_pairing(*model, ds);

    if (protocol == "lp") {
      if (ds.test.empty())
        throw ToolkitError(ErrClass::ConfigInvalid, "link prediction needs data.test");
      TripleIndex index = ds.positive_index();
      LinkPredictionReport report =
          link_prediction_eval(*model, ds.test, index, ds.name, cfg.eval_threads);
      std::ostringstream table, records;
      write_lp_report(report, table, records);
      write_report_pair(out_dir, "lp", table.str(), records.str());
      return 0;
    }

    // Triple classification needs labeled validation and test splits.
    auto require_labels = [](const std::vector<Triple>& ts, const char* which) {
      if (ts.empty())
        throw ToolkitError(ErrClass::LabelsRequired,
                           std::string("triple classification needs a labeled ") + which +
                               " split");
      for (const auto& t : ts)
        if (!t.has_label())
          throw ToolkitError(ErrClass::LabelsRequired,
                             std::string("triple classification needs 1/-1 labels in the ") +
                                 which + " split");
    };
    require_labels(ds.valid, "valid");
    require_labels(ds.test, "test");
    ThresholdTable thresholds = fit_relation_thresholds(*model, ds.valid);
    ClassificationReport report =
        triple_classification_eval(*model, thresholds, ds.test, ds.name);
    std::ostringstream table, records;
    write_tc_report(report, ds.relations, table, records);
    write_report_pair(out_dir, "tc", table.str(), records.str());
    return 0;
  }

  if (protocol == "unknown") {
    if (cfg.train.kind != ModelKind::TransW)
      throw ToolkitError(ErrClass::CapabilityMismatch,
                         "eval unknown requires model.kind=transw: unseen relations have no "
                         "baseline embedding to score, only a word composition");
    LoadedInputs in = load_inputs(cfg, /*need_words=*/true);
    std::vector<int> relation_ids(static_cast<size_t>(in.dataset.relations.size()));
    for (size_t i = 0; i < relation_ids.size(); i++) relation_ids[i] = static_cast<int>(i);
    RelationFoldPlan plan =
        split_relations_kfold(relation_ids, cfg.unknown_folds, cfg.train.seed);
    UnknownFactOptions opts;
    opts.per_relation_cap = cfg.unknown_cap;
    opts.repeats = cfg.unknown_repeats;
    opts.seed = cfg.train.seed;
    opts.epochs_override = cfg.unknown_epochs;
    UnknownFactReport report =
        unknown_fact_eval(plan.folds, in.dataset, *in.words, cfg.train, opts);
    std::ostringstream table, records;
    write_unknown_report(report, table, records);
    write_report_pair(out_dir, "unknown", table.str(), records.str());
    return 0;
  }

  throw ToolkitError(ErrClass::ConfigInvalid,
                     "unknown protocol '" + protocol + "' (expected lp, tc or unknown)");
}

int cmd_score(const std::string& model_path, const std::string& head, const std::string& rel,
              const std::string& tail, const std::string& words_path) {
  std::unique_ptr<Model> model = load_model(model_path);

  double d = 0.0;
  if (model->kind() == ModelKind::TransW) {
    auto* tw = dynamic_cast<TransWModel*>(model.get());
    std::optional<WordEmbeddingTable> words;
    if (!words_path.empty())
      words = WordEmbeddingTable::load(words_path, 0, tw->oov_policy, tw->oov_scale);
    const WordEmbeddingTable* ext = words ? &*words : nullptr;
    ComposedEmbedding h = tw->compose_surface(head, Role::Entity, ext);
    ComposedEmbedding r = tw->compose_surface(rel, Role::Relation, ext);
    ComposedEmbedding t = tw->compose_surface(tail, Role::Entity, ext);
    if (tw->project_entities) {
      for (auto* v : {&h.vec, &t.vec}) {
        double n = 0.0;
        for (double x : *v) n += x * x;
        n = std::sqrt(n);
        if (n > 1.0)
          for (double& x : *v) x /= n;
      }
    }
    d = distance(h.vec, r.vec, t.vec, model->norm());
  } else {
    auto* te = dynamic_cast<TransEModel*>(model.get());
    auto find = [](const std::vector<std::string>& surfaces, const std::string& s,
                   const char* what) {
      for (size_t i = 0; i < surfaces.size(); i++)
        if (surfaces[i] == s) return static_cast<int>(i);
      throw ToolkitError(ErrClass::CapabilityMismatch,
                         std::string(what) + " '" + s +
                             "' was not seen in training and transe cannot compose unseen "
                             "surfaces (use a transw model)");
    };
    Triple t;
    t.head = find(te->entity_surfaces, head, "entity");
    t.relation = find(te->relation_surfaces, rel, "relation");
    t.tail = find(te->entity_surfaces, tail, "entity");
    d = te->score(t);
  }

  std::cout << "distance\t" << std::setprecision(17) << d << "\n";
  if (model->sigma) {
    std::cout << "sigma\t" << *model->sigma << "\n";
    std::cout << "verdict\t" << (d <= *model->sigma ? "valid" : "invalid") << "\n";
  }
  return 0;
}

int cmd_inspect(const std::string& model_path) {
  ModelHeader h = read_model_header(model_path);
  std::cout << "format_version\t" << h.version << "\n";
  std::cout << "kind\t" << model_kind_name(h.kind) << "\n";
  std::cout << "norm\t" << norm_name(h.norm) << "\n";
  std::cout << "dim\t" << h.k << "\n";
  std::cout << "entities\t" << h.entity_count << "\n";
  std::cout << "relations\t" << h.relation_count << "\n";
  if (h.kind == ModelKind::TransW) {
    std::cout << "words\t" << h.word_count << "\n";
    std::cout << "fine_tune_words\t" << (h.fine_tune_words ? "true" : "false") << "\n";
    std::cout << "project_entities\t" << (h.project_entities ? "true" : "false") << "\n";
    std::cout << "oov_policy\t" << oov_policy_name(h.oov_policy) << "\n";
    std::cout << "oov_scale\t" << h.oov_scale << "\n";
  }
  std::cout << std::hex;
  std::cout << "entity_fingerprint\t" << h.entity_fingerprint << "\n";
  std::cout << "relation_fingerprint\t" << h.relation_fingerprint << "\n";
  if (h.kind == ModelKind::TransW) std::cout << "word_fingerprint\t" << h.word_fingerprint << "\n";
  std::cout << std::dec;
  if (h.sigma) std::cout << "sigma\t" << *h.sigma << "\n";
  if (h.checkpoint) {
    std::cout << "checkpoint_epoch\t" << h.checkpoint->epoch << "\n";
    std::cout << "checkpoint_best_valid\t" << h.checkpoint->best_valid_loss << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transw: knowledge-graph embeddings composed from word vectors"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "run", model_path, resume_path, words_path;
  std::vector<std::string> overrides;
  std::string protocol, head, rel, tail;
  int threads = 0;

  auto* train_cmd = app.add_subcommand("train", "Train a model and write model/manifest/stats");
  train_cmd->add_option("--config", config_path, "flat key=value config file")->required();
  train_cmd->add_option("--set", overrides, "override a config key, e.g. --set train.lr=0.01");
  train_cmd->add_option("--out", out_dir, "output directory (default: run)");
  train_cmd->add_option("--resume", resume_path, "checkpoint file to continue from");

  auto* eval_cmd = app.add_subcommand("eval", "Run an evaluation protocol (lp | tc | unknown)");
  eval_cmd->add_option("protocol", protocol, "lp, tc or unknown")->required();
  eval_cmd->add_option("--config", config_path, "flat key=value config file")->required();
  eval_cmd->add_option("--model", model_path, "trained model file (lp and tc)");
  eval_cmd->add_option("--set", overrides, "override a config key");
  eval_cmd->add_option("--out", out_dir, "output directory (default: run)");
  eval_cmd->add_option("--threads", threads, "ranking threads (results are order-independent)");

  auto* score_cmd = app.add_subcommand("score", "Score one (head, relation, tail) by surface");
  score_cmd->add_option("--model", model_path)->required();
  score_cmd->add_option("--head", head)->required();
  score_cmd->add_option("--rel", rel)->required();
  score_cmd->add_option("--tail", tail)->required();
  score_cmd->add_option("--words", words_path, "word vector file for words outside the model");

  auto* inspect_cmd = app.add_subcommand("inspect", "Print a model file header");
  inspect_cmd->add_option("--model", model_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: class=usage message=\"" << e.what() << "\"\n";
    return 2;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, overrides, out_dir, resume_path);
    if (eval_cmd->parsed()) {
      if (threads > 0) overrides.push_back("eval.threads=" + std::to_string(threads));
      return cmd_eval(protocol, model_path, config_path, overrides, out_dir);
    }
    if (score_cmd->parsed()) return cmd_score(model_path, head, rel, tail, words_path);
    if (inspect_cmd->parsed()) return cmd_inspect(model_path);
  } catch (const ToolkitError& e) {
    std::cerr << "error: class=" << err_class_name(e.cls()) << " message=\"" << e.what()
              << "\"\n";
    return err_class_exit_code(e.cls());
  } catch (const std::exception& e) {
    std::cerr << "error: class=internal-error message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}
