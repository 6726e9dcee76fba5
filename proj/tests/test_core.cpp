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

#include "framesel/core.hpp"

using namespace framesel;

namespace {
std::vector<FrameId> frames_of(std::uint32_t video, std::uint32_t count) {
  std::vector<FrameId> out;
  for (std::uint32_t i = 0; i < count; ++i) out.push_back({video, i});
  return out;
}
}  // namespace

TEST_CASE("frame ids order lexicographically by (video, index)") {
  CHECK(FrameId{0, 5} < FrameId{1, 0});
  CHECK(FrameId{1, 0} < FrameId{1, 1});
  CHECK(FrameId{2, 3} == FrameId{2, 3});
  CHECK(to_string(FrameId{3, 17}) == "3:17");
}

TEST_CASE("frame id text round trip") {
  CHECK(parse_frame_id("3:17") == FrameId{3, 17});
  CHECK(parse_frame_id(to_string(FrameId{0, 0})) == FrameId{0, 0});
  CHECK_THROWS_AS(parse_frame_id("317"), ParseError);
  CHECK_THROWS_AS(parse_frame_id(":17"), ParseError);
  CHECK_THROWS_AS(parse_frame_id("3:"), ParseError);
  CHECK_THROWS_AS(parse_frame_id("a:b"), ParseError);
}

TEST_CASE("apply_selection moves a single frame and advances the round") {
  PoolState state;
  state.unlabeled = {FrameId{1, 0}};
  const PoolState next = apply_selection(state, {FrameId{1, 0}});
  CHECK(next.labeled == std::set<FrameId>{FrameId{1, 0}});
  CHECK(next.unlabeled.empty());
  CHECK(next.round == 1);
  CHECK(next.test == state.test);
  CHECK(next.seed == state.seed);
}

TEST_CASE("empty selection still advances the round") {
  PoolState state;
  state.labeled = {FrameId{0, 1}};
  state.unlabeled = {FrameId{1, 0}};
  const PoolState next = apply_selection(state, {});
  CHECK(next.labeled == state.labeled);
  CHECK(next.unlabeled == state.unlabeled);
  CHECK(next.round == 1);
}

TEST_CASE("selection preserves disjointness") {
  PoolState state;
  state.labeled = {FrameId{0, 0}};
  state.unlabeled = {FrameId{1, 0}, FrameId{1, 1}};
  const PoolState next = apply_selection(state, {FrameId{1, 0}});
  CHECK(next.labeled == std::set<FrameId>{FrameId{0, 0}, FrameId{1, 0}});
  CHECK(next.unlabeled == std::set<FrameId>{FrameId{1, 1}});
}

TEST_CASE("selecting outside the pool or twice fails") {
  PoolState state;
  state.unlabeled = {FrameId{1, 0}, FrameId{1, 1}};
  CHECK_THROWS_AS(apply_selection(state, {FrameId{2, 0}}), SelectionNotInPool);
  CHECK_THROWS_AS(apply_selection(state, {FrameId{1, 0}, FrameId{1, 0}}),
                  DuplicateSelection);
  state.labeled = {FrameId{0, 0}};
  CHECK_THROWS_AS(apply_selection(state, {FrameId{0, 0}}), SelectionNotInPool);
}

TEST_CASE("pool partition invariant holds across selection sequences") {
  PoolState state;
  state.test = {FrameId{9, 0}, FrameId{9, 1}};
  std::set<FrameId> all = state.test;
  for (std::uint32_t v = 0; v < 3; ++v)
    for (std::uint32_t i = 0; i < 20; ++i) {
      state.unlabeled.insert({v, i});
      all.insert({v, i});
    }

  Pcg32 rng(5, 0);
  for (int round = 0; round < 10; ++round) {
    std::vector<FrameId> pool(state.unlabeled.begin(), state.unlabeled.end());
    std::vector<FrameId> selected;
    for (const auto i : sample_indices(pool.size(), 5, rng))
      selected.push_back(pool[i]);
    const std::size_t labeled_before = state.labeled.size();
    state = apply_selection(state, selected);
    REQUIRE(state.labeled.size() == labeled_before + 5);

    std::set<FrameId> reunion = state.labeled;
    reunion.insert(state.unlabeled.begin(), state.unlabeled.end());
    reunion.insert(state.test.begin(), state.test.end());
    REQUIRE(reunion == all);
    REQUIRE(state.labeled.size() + state.unlabeled.size() +
                state.test.size() == all.size());
  }
  CHECK(state.round == 10);
}

TEST_CASE("initial_split honors the 80/20 example") {
  const auto [train, val] = initial_split(frames_of(0, 10), 0.8, 7);
  CHECK(train.size() == 8);
  CHECK(val.size() == 2);
}

TEST_CASE("initial_split of one frame rounds up") {
  const auto [train, val] = initial_split(frames_of(0, 1), 0.8, 7);
  CHECK(train.size() == 1);
  CHECK(val.empty());
}

TEST_CASE("initial_split is a pure function of the seed") {
  const auto a = initial_split(frames_of(2, 50), 0.8, 1234);
  const auto b = initial_split(frames_of(2, 50), 0.8, 1234);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
  const auto c = initial_split(frames_of(2, 50), 0.8, 1235);
  CHECK(a.first != c.first);  // overwhelmingly likely for these sizes
}

TEST_CASE("initial_split partitions the input") {
  Pcg32 rng(99, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::uint32_t n = 1 + rng.bounded(200);
    const auto frames = frames_of(trial, n);
    const auto [train, val] = initial_split(frames, 0.8, trial);
    std::set<FrameId> reunion = train;
    reunion.insert(val.begin(), val.end());
    REQUIRE(reunion == std::set<FrameId>(frames.begin(), frames.end()));
    REQUIRE(train.size() ==
            static_cast<std::size_t>(std::lround(0.8 * n)));
    for (const auto& id : train) REQUIRE(!val.count(id));
  }
}

TEST_CASE("initial_split rejects bad input") {
  CHECK_THROWS_AS(initial_split({}, 0.8, 0), EmptyInput);
  CHECK_THROWS_AS(initial_split(frames_of(0, 5), 0.0, 0), InvalidConfig);
  CHECK_THROWS_AS(initial_split(frames_of(0, 5), 1.0, 0), InvalidConfig);
}

TEST_CASE("pick_test_video returns a member deterministically") {
  const std::vector<std::uint32_t> videos = {3, 1, 4, 1, 5};
  const auto a = pick_test_video(videos, 42);
  const auto b = pick_test_video(videos, 42);
  CHECK(a == b);
  CHECK((a == 1 || a == 3 || a == 4 || a == 5));
  CHECK_THROWS_AS(pick_test_video({}, 0), EmptyInput);
}

TEST_CASE("strategy names round trip") {
  for (const Strategy s : {Strategy::random, Strategy::entropy,
                           Strategy::euclidean, Strategy::cosine,
                           Strategy::all_data})
    CHECK(parse_strategy(to_string(s)) == s);
  CHECK_THROWS_AS(parse_strategy("bogus"), InvalidConfig);
}
