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

#include "transw/config.hpp"

#include <fstream>
#include <set>

namespace transw {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "data.name", "data.train", "data.valid", "data.test", "data.name_map", "data.manifest",
      "words.path", "words.dim", "words.oov", "words.oov_scale",
      "model.kind", "model.norm", "model.dim",
      "train.lr", "train.margin", "train.epochs", "train.batch", "train.negatives",
      "train.seed", "train.fine_tune_words", "train.projection", "train.checkpoint_interval",
      "train.early_stop_patience", "train.fit_sigma",
      "eval.threads",
      "unknown.folds", "unknown.cap", "unknown.repeats", "unknown.epochs",
  };
  return keys;
}

long to_long(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (...) {
    throw ToolkitError(ErrClass::ConfigInvalid, key + ": expected an integer, got '" + value + "'");
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (...) {
    throw ToolkitError(ErrClass::ConfigInvalid, key + ": expected a number, got '" + value + "'");
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ToolkitError(ErrClass::ConfigInvalid, key + ": expected a boolean, got '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw ToolkitError(ErrClass::InputMissing, "cannot open config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ToolkitError(ErrClass::ConfigInvalid,
                         path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ToolkitError(ErrClass::ConfigInvalid,
                         path + ":" + std::to_string(lineno) + ": empty key");
    values[key] = value;
  }
  return values;
}

RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> merged = file_values;
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw ToolkitError(ErrClass::ConfigInvalid, "--set expects key=value, got '" + ov + "'");
    merged[trim(ov.substr(0, eq))] = trim(ov.substr(eq + 1));
  }
  for (const auto& [key, value] : merged) {
    (void)value;
    if (!known_keys().count(key))
      throw ToolkitError(ErrClass::ConfigInvalid, "unknown config key '" + key + "'");
  }

  RunConfig cfg;
  auto get = [&](const char* key) -> const std::string* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };
  if (auto* v = get("data.name")) cfg.data.name = *v;
  if (auto* v = get("data.train")) cfg.data.train = *v;
  if (auto* v = get("data.valid")) cfg.data.valid = *v;
  if (auto* v = get("data.test")) cfg.data.test = *v;
  if (auto* v = get("data.name_map")) cfg.data.name_map = *v;
  if (auto* v = get("data.manifest")) cfg.data.manifest = *v;
  if (auto* v = get("words.path")) cfg.words_path = *v;
  if (auto* v = get("words.dim")) cfg.words_dim = static_cast<int>(to_long("words.dim", *v));
  if (auto* v = get("words.oov")) cfg.oov_policy = parse_oov_policy(*v);
  if (auto* v = get("words.oov_scale")) cfg.oov_scale = to_double("words.oov_scale", *v);
  if (auto* v = get("model.kind")) cfg.train.kind = parse_model_kind(*v);
  if (auto* v = get("model.norm")) cfg.train.norm = parse_norm(*v);
  if (auto* v = get("model.dim")) cfg.train.transe_dim = static_cast<int>(to_long("model.dim", *v));
  if (auto* v = get("train.lr")) cfg.train.lr = to_double("train.lr", *v);
  if (auto* v = get("train.margin")) cfg.train.margin = to_double("train.margin", *v);
  if (auto* v = get("train.epochs")) cfg.train.epochs = static_cast<int>(to_long("train.epochs", *v));
  if (auto* v = get("train.batch")) cfg.train.batch_size = static_cast<int>(to_long("train.batch", *v));
  if (auto* v = get("train.negatives"))
    cfg.train.negatives = static_cast<int>(to_long("train.negatives", *v));
  if (auto* v = get("train.seed"))
    cfg.train.seed = static_cast<uint64_t>(to_long("train.seed", *v));
  if (auto* v = get("train.fine_tune_words"))
    cfg.train.fine_tune_words = to_bool("train.fine_tune_words", *v);
  if (auto* v = get("train.projection")) cfg.train.project_entities = to_bool("train.projection", *v);
  if (auto* v = get("train.checkpoint_interval"))
    cfg.train.checkpoint_interval = static_cast<int>(to_long("train.checkpoint_interval", *v));
  if (auto* v = get("train.early_stop_patience"))
    cfg.train.early_stop_patience = static_cast<int>(to_long("train.early_stop_patience", *v));
  if (auto* v = get("train.fit_sigma")) cfg.train.fit_sigma = to_bool("train.fit_sigma", *v);
  if (auto* v = get("eval.threads")) cfg.eval_threads = static_cast<int>(to_long("eval.threads", *v));
  if (auto* v = get("unknown.folds")) cfg.unknown_folds = static_cast<int>(to_long("unknown.folds", *v));
  if (auto* v = get("unknown.cap")) cfg.unknown_cap = static_cast<int>(to_long("unknown.cap", *v));
  if (auto* v = get("unknown.repeats"))
    cfg.unknown_repeats = static_cast<int>(to_long("unknown.repeats", *v));
  if (auto* v = get("unknown.epochs"))
    cfg.unknown_epochs = static_cast<int>(to_long("unknown.epochs", *v));

  cfg.resolved = merged;
  return cfg;
}

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  return resolve_config(parse_config_file(path), overrides);
}

}  // namespace transw
