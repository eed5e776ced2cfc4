/* Copyright 2026 The RLD Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef RLD_RANDOM_HPP_
#define RLD_RANDOM_HPP_

#include <cstdint>

namespace rld {

// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t Mix64(std::uint64_t x);

// Keyed hash of (key, counter); the basis of every random stream in the
// toolkit. Output depends only on integer arithmetic, so it is identical on
// every platform.
std::uint64_t CounterHash(std::uint64_t key, std::uint64_t counter);

// Combines two seeds, e.g. a master seed with an image id.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t salt);

// Counter-based generator: the n-th draw is CounterHash(seed, n). Draws can
// be reproduced out of order by constructing with an explicit counter.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t NextU64() { return CounterHash(seed_, counter_++); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double NextUniform();

  // Uniform on [lo, hi).
  double NextUniform(double lo, double hi) {
    return lo + (hi - lo) * NextUniform();
  }

  // Uniform integer on [0, n). n must be positive.
  std::uint64_t NextBelow(std::uint64_t n);

  // Standard normal via Box-Muller; consumes two draws.
  double NextGaussian();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace rld

#endif  // RLD_RANDOM_HPP_
