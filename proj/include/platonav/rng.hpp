// Copyright 2026 The platonav Authors
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

#ifndef PLATONAV_RNG_HPP_
#define PLATONAV_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace platonav {

// Deterministic random stream. Variates are derived from the raw mt19937_64
// output by hand (53-bit uniforms, Box-Muller normals) instead of the
// standard distributions, whose algorithms are implementation-defined; a
// given seed therefore produces the same stream on every platform.
class Rng {
 public:
  Rng() : engine_(0) {}
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream: same master seed + different id gives an
  // unrelated stream.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    Rng rng;
    rng.engine_.seed(seq);
    return rng;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return n == 0 ? 0 : engine_() % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller. One variate per call; the pair's second
  // value is discarded so the stream advances by a fixed two draws per call.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double stddev) {
    return mean + stddev * normal();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace platonav

#endif  // PLATONAV_RNG_HPP_
