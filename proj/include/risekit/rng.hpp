// Copyright 2026 The Risekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISEKIT_RNG_HPP_
#define RISEKIT_RNG_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>

namespace risekit {

// Standard splitmix64 mixing step, used to derive substream seeds.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded random stream with platform-independent output.
//
// The raw generator is std::mt19937_64, whose sequence is pinned by the
// C++ standard. All derived draws (unit doubles, bounded indices,
// Bernoulli) are defined here rather than with std:: distributions,
// because the standard leaves distribution algorithms
// implementation-defined. Identical seed implies an identical stream on
// every platform.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) using the top 53 bits of one draw.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // True with probability p. Consumes exactly one draw.
  bool next_bool(double p) { return next_double() < p; }

  // Uniform in [0, n) by bitmask rejection. Unbiased; consumes at least
  // one draw.
  size_t next_index(size_t n) {
    if (n == 0) throw std::invalid_argument("next_index: n must be positive");
    if (n == 1) {
      gen_();
      return 0;
    }
    uint64_t range = static_cast<uint64_t>(n);
    uint64_t mask = ~uint64_t{0} >> __builtin_clzll(range - 1);
    while (true) {
      uint64_t v = gen_() & mask;
      if (v < range) return static_cast<size_t>(v);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Independent substream for item `index` under a run-level seed. Used so
// per-example work can run in any order (or in parallel) with the same
// result.
inline SeededRng derive_stream(uint64_t seed, uint64_t index) {
  return SeededRng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

}  // namespace risekit

#endif  // RISEKIT_RNG_HPP_
