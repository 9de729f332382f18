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

#ifndef TRANSW_CONFIG_HPP
#define TRANSW_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "transw/common.hpp"
#include "transw/dataset.hpp"
#include "transw/trainer.hpp"
#include "transw/word_table.hpp"

namespace transw {

// Resolved run configuration. Precedence: command-line --set override >
// config file > built-in default. Unknown keys are rejected.
struct RunConfig {
  DatasetPaths data;

  std::string words_path;
  int words_dim = 0;  // 0 = infer from file
  OovPolicy oov_policy = OovPolicy::HashSeeded;
  double oov_scale = 0.0;  // 0 = 6/sqrt(k)

  TrainConfig train;

  int eval_threads = 1;

  int unknown_folds = 10;
  int unknown_cap = 5000;
  int unknown_repeats = 10;
  int unknown_epochs = 0;  // 0 = train.epochs

  // Every key=value after resolution, for the run manifest.
  std::map<std::string, std::string> resolved;
};

// Flat "key = value" text, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// overrides are raw "key=value" strings from the command line.
RunConfig resolve_config(const std::map<std::string, std::string>& file_values,
                         const std::vector<std::string>& overrides);

RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides);

}  // namespace transw

#endif
