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

#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "framesel/rng.hpp"
#include "oracles.hpp"

using framesel::Pcg32;

TEST_CASE("pcg32 matches the published reference outputs") {
  Pcg32 rng(42, 54);
  // First outputs of pcg32 seeded with (42, 54), as printed by the upstream
  // demo program.
  const std::uint32_t expected[] = {0xa15c02b7u, 0x7b47f409u, 0xba1d3330u,
                                    0x83d2f293u, 0xbfa4784bu, 0xcbed606eu};
  for (const auto want : expected) CHECK(rng.next_u32() == want);
}

TEST_CASE("pcg32 tracks the reference implementation across seeds and streams") {
  for (const std::uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull}) {
    for (const std::uint64_t stream : {0ull, 1ull, 7ull, 54ull}) {
      Pcg32 rng(seed, stream);
      auto ref = oracles::pcg32_ref_seed(seed, stream);
      for (int i = 0; i < 1000; ++i)
        REQUIRE(rng.next_u32() == oracles::pcg32_ref_next(ref));
    }
  }
}

TEST_CASE("streams with the same seed are distinct") {
  Pcg32 a(7, 0), b(7, 1);
  int differs = 0;
  for (int i = 0; i < 16; ++i) differs += a.next_u32() != b.next_u32();
  CHECK(differs > 0);
}

TEST_CASE("bounded draws stay in range and replay deterministically") {
  Pcg32 rng(11, 3);
  for (std::uint32_t n : {1u, 2u, 7u, 100u, 1000u}) {
    for (int i = 0; i < 200; ++i) CHECK(rng.bounded(n) < n);
  }
  Pcg32 x(5, 9), y(5, 9);
  for (int i = 0; i < 100; ++i) CHECK(x.bounded(17) == y.bounded(17));
  CHECK_THROWS_AS(rng.bounded(0), framesel::EmptyInput);
}

TEST_CASE("bounded matches the documented rejection transcript") {
  Pcg32 rng(21, 2);
  auto ref = oracles::pcg32_ref_seed(21, 2);
  for (std::uint32_t n : {3u, 10u, 255u, 1u << 20}) {
    for (int i = 0; i < 100; ++i)
      REQUIRE(rng.bounded(n) == oracles::pcg32_ref_bounded(ref, n));
  }
}

TEST_CASE("next_double lies in [0,1)") {
  Pcg32 rng(1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("gaussian draws have roughly standard moments") {
  Pcg32 rng(123, 0);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("sample_indices draws distinct in-range indices") {
  Pcg32 rng(77, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.bounded(200);
    const std::size_t k = rng.bounded(static_cast<std::uint32_t>(n + 1));
    Pcg32 draw(trial, 0);
    const auto picks = framesel::sample_indices(n, k, draw);
    REQUIRE(picks.size() == k);
    std::set<std::size_t> uniq(picks.begin(), picks.end());
    REQUIRE(uniq.size() == k);
    for (const auto i : picks) REQUIRE(i < n);
  }
}

TEST_CASE("sample_indices with k = n is a permutation") {
  Pcg32 rng(3, 3);
  const auto picks = framesel::sample_indices(10, 10, rng);
  std::set<std::size_t> uniq(picks.begin(), picks.end());
  CHECK(uniq.size() == 10);
}

TEST_CASE("sample_indices follows the documented partial Fisher-Yates transcript") {
  Pcg32 rng(9, 6);
  auto ref = oracles::pcg32_ref_seed(9, 6);
  const auto mine = framesel::sample_indices(25, 10, rng);
  const auto want = oracles::ref_sample(25, 10, ref);
  CHECK(mine == want);
}

TEST_CASE("oversampling throws") {
  Pcg32 rng(0, 0);
  CHECK_THROWS_AS(framesel::sample_indices(3, 4, rng),
                  framesel::BudgetExceedsPool);
}

TEST_CASE("shuffle yields a permutation, deterministically") {
  std::vector<int> items = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> again = items;
  Pcg32 a(13, 1), b(13, 1);
  framesel::shuffle(items, a);
  framesel::shuffle(again, b);
  CHECK(items == again);
  std::multiset<int> sorted(items.begin(), items.end());
  CHECK(sorted == std::multiset<int>({1, 2, 3, 4, 5, 6, 7, 8}));
}
