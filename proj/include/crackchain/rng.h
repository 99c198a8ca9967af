// Copyright 2026 The crackchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRACKCHAIN_RNG_H_
#define CRACKCHAIN_RNG_H_

#include <cmath>
#include <cstdint>
#include <random>

namespace crackchain {

// Derives the seed of stream `stream` from a master seed. Two rounds of the
// splitmix64 finalizer keep nearby stream indices decorrelated.
uint64_t SplitSeed(uint64_t master_seed, uint64_t stream);

// Mersenne twister with variate transforms written out explicitly, so that a
// seed reproduces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t NextBits() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on (0, 1].
  double UniformPositive() { return 1.0 - Uniform(); }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n).
  uint64_t Below(uint64_t n);
  // Exponential with the given rate.
  double Exponential(double rate) { return -std::log(UniformPositive()) / rate; }
  // Standard normal by the Box-Muller transform, caching the second variate.
  double Normal();

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace crackchain

#endif  // CRACKCHAIN_RNG_H_
