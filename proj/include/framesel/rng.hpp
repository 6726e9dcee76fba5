/* Copyright 2026 The Framesel Authors. All Rights Reserved.

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

#ifndef FRAMESEL_RNG_HPP
#define FRAMESEL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "framesel/errors.hpp"

namespace framesel {

/// Deterministic random number generator used everywhere replays must be
/// byte-identical across platforms and implementations.
///
/// Algorithm: PCG-XSH-RR 64/32 (O'Neill's pcg32). 64-bit LCG state advanced
/// by `state * 6364136223846793005 + inc`, 32-bit output by xorshift-high
/// then a random rotation of the pre-advance state. A stream id selects the
/// LCG increment (`inc = (stream << 1) | 1`), which is how callers split one
/// experiment seed into independent per-round streams: stream id = round
/// number. Seeding follows the reference pcg32_srandom_r: state = 0, advance,
/// state += seed, advance.
///
/// Derived draws are fixed too, so transcripts can be reproduced by hand:
///   - next_u32(): one generator step.
///   - bounded(n): rejection sampling; draw r until r >= (2^32 - n) % n,
///     return r % n.
///   - next_double(): ((hi << 32) | lo) >> 11, scaled by 2^-53, where hi is
///     drawn before lo. Uniform in [0, 1).
///   - next_gaussian(): Box-Muller on two next_double() draws; the sine mate
///     is cached and returned by the following call.
class Pcg32 {
 public:
  Pcg32(std::uint64_t seed, std::uint64_t stream)
      : state_(0), inc_((stream << 1u) | 1u) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    const auto xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  /// Uniform integer in [0, n). n must be positive.
  std::uint32_t bounded(std::uint32_t n) {
    if (n == 0) throw EmptyInput("bounded draw from empty range");
    const std::uint32_t threshold = (-n) % n;
    for (;;) {
      const std::uint32_t r = next_u32();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    const std::uint64_t hi = next_u32();
    const std::uint64_t lo = next_u32();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller).
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    const double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard; one-in-2^53 draw
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Stream ids reserved for fixed pipeline stages. Selection rounds use the
/// round number itself, which stays far below these by construction.
namespace rng_stream {
inline constexpr std::uint64_t kInitialSplit = 0x53504C4954ULL;  // "SPLIT"
inline constexpr std::uint64_t kTestVideo = 0x54455354ULL;       // "TEST"
}  // namespace rng_stream

/// Draws `count` distinct indices from [0, n) by partial Fisher-Yates over
/// the identity permutation: for i in [0, count), swap position i with
/// position i + bounded(n - i). Result order is the draw order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t count,
                                               Pcg32& rng) {
  if (count > n)
    throw BudgetExceedsPool("sample of " + std::to_string(count) +
                            " from population of " + std::to_string(n));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j =
        i + rng.bounded(static_cast<std::uint32_t>(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

/// Fisher-Yates shuffle, same draw convention as sample_indices.
template <typename T>
void shuffle(std::vector<T>& items, Pcg32& rng) {
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    const std::size_t j =
        i + rng.bounded(static_cast<std::uint32_t>(items.size() - i));
    std::swap(items[i], items[j]);
  }
}

}  // namespace framesel

#endif  // FRAMESEL_RNG_HPP
