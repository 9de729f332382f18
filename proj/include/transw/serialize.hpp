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

#ifndef TRANSW_SERIALIZE_HPP
#define TRANSW_SERIALIZE_HPP

#include <memory>
#include <optional>
#include <string>

#include "transw/model.hpp"
#include "transw/word_table.hpp"

namespace transw {

// Epoch metadata carried by checkpoint files on top of the model payload.
struct CheckpointMeta {
  int epoch = 0;
  double best_valid_loss = 0.0;
  int epochs_since_improvement = 0;
};

struct ModelHeader {
  uint32_t version = 0;
  ModelKind kind = ModelKind::TransW;
  Norm norm = Norm::L2Squared;
  uint32_t k = 0;
  bool fine_tune_words = false;
  bool project_entities = false;
  OovPolicy oov_policy = OovPolicy::HashSeeded;
  double oov_scale = 0.0;
  std::optional<double> sigma;
  std::optional<CheckpointMeta> checkpoint;
  uint64_t entity_fingerprint = 0;
  uint64_t relation_fingerprint = 0;
  uint64_t word_fingerprint = 0;
  uint32_t entity_count = 0;
  uint32_t relation_count = 0;
  uint32_t word_count = 0;  // TransW only
};

// Versioned little-endian binary format (layout documented in the README).
// Writing goes through a temp file plus atomic rename; the same inputs
// always produce byte-identical files.
void save_model(const Model& model, const std::string& path,
                const std::optional<CheckpointMeta>& checkpoint = std::nullopt);

// expected_k > 0 enforces the dimension. Truncated or corrupt files fail
// with the section name; version mismatches fail with VersionMismatch.
std::unique_ptr<Model> load_model(const std::string& path, int expected_k = 0,
                                  CheckpointMeta* checkpoint_out = nullptr);

// Header only (for `inspect` and cheap validation).
ModelHeader read_model_header(const std::string& path);

}  // namespace transw

#endif
