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

#include "transw/common.hpp"

namespace transw {

const char* err_class_name(ErrClass cls) {
  switch (cls) {
    case ErrClass::InputMissing: return "input-missing";
    case ErrClass::ParseError: return "parse-error";
    case ErrClass::ManifestMismatch: return "manifest-mismatch";
    case ErrClass::LabelsRequired: return "labels-required";
    case ErrClass::CapabilityMismatch: return "capability-mismatch";
    case ErrClass::VersionMismatch: return "version-mismatch";
    case ErrClass::FingerprintMismatch: return "fingerprint-mismatch";
    case ErrClass::ConfigInvalid: return "config-invalid";
    case ErrClass::IoError: return "io-error";
    case ErrClass::Internal: return "internal-error";
  }
  return "internal-error";
}

int err_class_exit_code(ErrClass cls) {
  switch (cls) {
    case ErrClass::InputMissing: return 3;
    case ErrClass::ParseError: return 4;
    case ErrClass::ManifestMismatch: return 4;
    case ErrClass::LabelsRequired: return 5;
    case ErrClass::CapabilityMismatch: return 6;
    case ErrClass::VersionMismatch: return 7;
    case ErrClass::FingerprintMismatch: return 8;
    case ErrClass::ConfigInvalid: return 9;
    case ErrClass::IoError: return 10;
    case ErrClass::Internal: return 1;
  }
  return 1;
}

std::string norm_name(Norm n) { return n == Norm::L1 ? "l1" : "l2sq"; }

Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::L1;
  if (s == "l2" || s == "l2sq") return Norm::L2Squared;
  throw ToolkitError(ErrClass::ConfigInvalid, "unknown norm '" + s + "' (expected l1 or l2)");
}

std::string model_kind_name(ModelKind k) {
  return k == ModelKind::TransW ? "transw" : "transe";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "transw") return ModelKind::TransW;
  if (s == "transe") return ModelKind::TransE;
  throw ToolkitError(ErrClass::ConfigInvalid,
                     "unknown model kind '" + s + "' (expected transw or transe)");
}

}  // namespace transw
