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

#include "framesel/report.hpp"

using namespace framesel;

namespace {

RoundLog make_log(Strategy strategy, std::uint32_t round,
                  std::uint64_t n_labeled, double miou,
                  std::vector<double> per_class) {
  RoundLog log;
  log.strategy = strategy;
  log.seed = 0;
  log.round = round;
  log.n_labeled = n_labeled;
  log.miou = miou;
  log.per_class_iou = std::move(per_class);
  return log;
}

/// Round-3 class-wise fixture: six tracked structures, four strategies, plus
/// the full-training-set anchor row.
std::vector<RoundLog> round3_fixture() {
  return {
      make_log(Strategy::random, 3, 222, 0.40,
               {0.2094, 0.7497, 0.7065, 0.8501, 0.5131, 0.0994}),
      make_log(Strategy::entropy, 3, 222, 0.42,
               {0.2407, 0.7500, 0.7578, 0.8617, 0.5224, 0.2671}),
      make_log(Strategy::euclidean, 3, 222, 0.43,
               {0.2609, 0.7497, 0.7452, 0.8544, 0.5452, 0.3529}),
      make_log(Strategy::cosine, 3, 222, 0.435,
               {0.2616, 0.7501, 0.7425, 0.8569, 0.5449, 0.3391}),
      make_log(Strategy::all_data, 3, 440, 0.4374,
               {0.2523, 0.7749, 0.7413, 0.8694, 0.5386, 0.1417}),
  };
}

}  // namespace

TEST_CASE("per-class table marks euclidean best on the rare-class column") {
  const auto tables = render_report(round3_fixture(), {0, 1, 2, 3, 4, 5});
  // the rarest structure: euclidean's 0.3529 wins round 3
  CHECK(tables.per_class_table.find("0.3529*") != std::string::npos);
  CHECK(tables.per_class_table.find("0.0994*") == std::string::npos);
  // column winners elsewhere, per the fixture
  CHECK(tables.per_class_table.find("0.2616*") != std::string::npos);
  CHECK(tables.per_class_table.find("0.7578*") != std::string::npos);
  CHECK(tables.per_class_table.find("0.5452*") != std::string::npos);
  // the anchor row never competes for the marking
  CHECK(tables.per_class_table.find("0.7749*") == std::string::npos);
  CHECK(tables.per_class_table.find("0.7749") != std::string::npos);
}

TEST_CASE("strategy table marks the best mIoU per round") {
  const auto tables = render_report(round3_fixture());
  CHECK(tables.strategy_table.find("0.435*") != std::string::npos);
  CHECK(tables.strategy_table.find("0.4374*") == std::string::npos);
  CHECK(tables.strategy_table.find("euclidean") != std::string::npos);
}

TEST_CASE("a single strategy and round renders one data row") {
  const auto tables =
      render_report({make_log(Strategy::random, 1, 50, 0.5, {0.5, 0.5})});
  std::size_t newlines = 0;
  for (const char c : tables.strategy_table) newlines += c == '\n';
  CHECK(newlines == 2);  // header + one row
  CHECK(tables.strategy_table.find("0.5*") != std::string::npos);
}

TEST_CASE("class subsets select columns") {
  const auto tables = render_report(round3_fixture(), {5});
  CHECK(tables.per_class_table.find("class_5") != std::string::npos);
  CHECK(tables.per_class_table.find("class_0") == std::string::npos);
  CHECK_THROWS_AS(render_report(round3_fixture(), {9}), InvalidConfig);
}

TEST_CASE("ties mark every maximal entry") {
  const auto tables = render_report({
      make_log(Strategy::random, 1, 10, 0.5, {0.25}),
      make_log(Strategy::entropy, 1, 10, 0.5, {0.25}),
  });
  std::size_t stars = 0;
  for (const char c : tables.strategy_table) stars += c == '*';
  CHECK(stars == 2);
}

TEST_CASE("excluded classes render as dashes, zeros as zeros") {
  const auto tables = render_report({
      make_log(Strategy::random, 1, 10, 0.3, {0.0, std::nan("")}),
  });
  CHECK(tables.per_class_table.find("-") != std::string::npos);
  CHECK(tables.per_class_table.find("0*") != std::string::npos);
}

TEST_CASE("seed means aggregate before marking") {
  const auto tables = render_report({
      make_log(Strategy::random, 1, 10, 0.25, {0.25}),
      make_log(Strategy::random, 1, 10, 0.75, {0.75}),
      make_log(Strategy::cosine, 1, 10, 0.45, {0.45}),
  });
  // random averages to 0.5 and beats cosine's 0.45
  CHECK(tables.strategy_table.find("0.5*") != std::string::npos);
  CHECK(tables.strategy_table.find("0.45*") == std::string::npos);
}

TEST_CASE("inconsistent class counts are rejected") {
  CHECK_THROWS_AS(render_report({
                      make_log(Strategy::random, 1, 10, 0.5, {0.5}),
                      make_log(Strategy::cosine, 1, 10, 0.5, {0.5, 0.5}),
                  }),
                  InconsistentDims);
  CHECK_THROWS_AS(render_report({}), EmptyInput);
}
