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

#include "transw/model.hpp"

#include <cmath>

namespace transw {

double distance(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, Norm norm) {
  if (h.size() != r.size() || h.size() != t.size())
    throw ToolkitError(ErrClass::Internal, "distance: dimension mismatch");
  double sum = 0.0;
  if (norm == Norm::L1) {
    for (size_t i = 0; i < h.size(); i++) sum += std::fabs(h[i] + r[i] - t[i]);
  } else {
    for (size_t i = 0; i < h.size(); i++) {
      double x = h[i] + r[i] - t[i];
      sum += x * x;
    }
  }
  return sum;
}

}  // namespace transw
