// SPDX-License-Identifier: Apache-2.0
//
// beamsense - sensing-aided mmWave beam prediction simulator and learning pipeline
// Copyright (C) 2026 beamsense contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMSENSE_RNG_HPP
#define BEAMSENSE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace beamsense {

// splitmix64 finalizer, used both to derive stream seeds and to hash
// (seed, index) tuples into independent values.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives the seed of a named sub-stream. Streams with distinct tags or
// indices are decorrelated, so per-sample generation can run in any order
// (or in parallel) and still reproduce the sequential output.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(master ^ (tag * 0x9e3779b97f4a7c15ULL)) + index);
}

// Seeded generator with its own distribution code. The std:: distributions
// are implementation-defined, so rolling uniform/normal/poisson here keeps
// every byte of output identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; draws two uniforms per variate.
  double normal(double mean = 0.0, double std = 1.0) {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    return mean + std * z;
  }

  // Uniform integer in [0, n). n must be >= 1.
  int uniform_int(int n) {
    int v = static_cast<int>(uniform01() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }

  // Knuth's product method; fine for the small rates used here.
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  // Fisher-Yates permutation of 0..n-1.
  std::vector<std::size_t> shuffled_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(static_cast<int>(i)));
      std::swap(idx[i - 1], idx[j]);
    }
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace beamsense

#endif  // BEAMSENSE_RNG_HPP
