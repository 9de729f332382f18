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

#ifndef TRANSW_RNG_HPP
#define TRANSW_RNG_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace transw {

// FNV-1a, 64 bit. Stable across platforms and processes; used for vocab
// fingerprints and for hash-seeded out-of-vocabulary vectors.
inline uint64_t fnv1a64(const void* data, size_t len, uint64_t h = 0xcbf29ce484222325ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < len; i++) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t fnv1a64(std::string_view s, uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

// Deterministic splitmix64 generator. The standard <random> distributions are
// implementation-defined, so every random draw in the toolkit goes through
// this type to keep runs bit-reproducible across compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, n). Modulo bias is negligible for the sizes used here.
  size_t index(size_t n) { return static_cast<size_t>(next_u64() % n); }

  bool coin() { return (next_u64() & 1ull) != 0; }

 private:
  uint64_t state_;
};

// All randomness flows from one master seed; every component derives its own
// stream with a tag so interrupted runs can be resumed bit-exactly.
inline uint64_t derive_seed(uint64_t seed, std::string_view tag, uint64_t n = 0) {
  uint64_t h = fnv1a64(&seed, sizeof(seed));
  h = fnv1a64(tag, h);
  h = fnv1a64(&n, sizeof(n), h);
  // One splitmix scramble so nearby inputs do not give nearby streams.
  return Rng(h).next_u64();
}

// Seeded Fisher-Yates shuffle (std::shuffle is implementation-defined).
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; i--) {
    size_t j = rng.index(i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace transw

#endif
