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

#ifndef TRANSW_COMMON_HPP
#define TRANSW_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace transw {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class Norm : uint8_t { L1 = 1, L2Squared = 2 };

enum class ModelKind : uint8_t { TransW = 1, TransE = 2 };

enum class Role : uint8_t { Entity = 1, Relation = 2 };

// Error classes map one-to-one onto CLI exit codes; keep them coarse.
enum class ErrClass {
  InputMissing,
  ParseError,
  ManifestMismatch,
  LabelsRequired,
  CapabilityMismatch,
  VersionMismatch,
  FingerprintMismatch,
  ConfigInvalid,
  IoError,
  Internal,
};

class ToolkitError : public std::runtime_error {
 public:
  ToolkitError(ErrClass cls, const std::string& msg)
      : std::runtime_error(msg), cls_(cls) {}
  ErrClass cls() const { return cls_; }

 private:
  ErrClass cls_;
};

const char* err_class_name(ErrClass cls);
int err_class_exit_code(ErrClass cls);

std::string norm_name(Norm n);
Norm parse_norm(const std::string& s);
std::string model_kind_name(ModelKind k);
ModelKind parse_model_kind(const std::string& s);

}  // namespace transw

#endif
