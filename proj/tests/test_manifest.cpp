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

#include <filesystem>
#include <fstream>

#include "framesel/manifest.hpp"
#include "framesel/pool_state_io.hpp"
#include "framesel/tensor_io.hpp"

using namespace framesel;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "framesel_manifest" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_text(const fs::path& dir, const std::string& name,
                    const std::string& content) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

constexpr ManifestOptions kNoChecks{.check_artifacts = false};

}  // namespace

TEST_CASE("a two-row manifest loads") {
  const auto dir = temp_dir("two_row");
  const auto path = write_text(dir, "m.csv",
                               "video,index,feature_path,probmap_path,"
                               "label_path,pixel_path,split\n"
                               "0,0,,,,,pool\n"
                               "0,1,,,,,labeled\n");
  const Manifest m = load_manifest(path, kNoChecks);
  REQUIRE(m.rows.size() == 2);
  CHECK(m.rows[0].record.id == FrameId{0, 0});
  CHECK(m.rows[0].split == Split::pool);
  CHECK(m.rows[1].split == Split::labeled);
  CHECK_FALSE(m.rows[0].record.feature_ref.has_value());
}

TEST_CASE("duplicate frame ids are rejected with the line number") {
  const auto dir = temp_dir("dup");
  const auto path = write_text(dir, "m.csv",
                               std::string(kManifestHeader) + "\n" +
                                   "1,5,,,,,pool\n"
                                   "1,5,,,,,pool\n");
  CHECK_THROWS_WITH(load_manifest(path, kNoChecks),
                    Catch::Matchers::ContainsSubstring("line 3"));
  CHECK_THROWS_AS(load_manifest(path, kNoChecks), DuplicateFrameId);
}

TEST_CASE("header and field-count violations raise MissingColumn") {
  const auto dir = temp_dir("cols");
  const auto bad_header =
      write_text(dir, "h.csv", "video,index,feature_path,split\n0,0,,pool\n");
  CHECK_THROWS_AS(load_manifest(bad_header, kNoChecks), MissingColumn);
  const auto bad_row = write_text(
      dir, "r.csv", std::string(kManifestHeader) + "\n0,0,,,pool\n");
  CHECK_THROWS_AS(load_manifest(bad_row, kNoChecks), MissingColumn);
}

TEST_CASE("unknown split tags are rejected") {
  const auto dir = temp_dir("split");
  const auto path = write_text(
      dir, "m.csv", std::string(kManifestHeader) + "\n0,0,,,,,training\n");
  CHECK_THROWS_AS(load_manifest(path, kNoChecks), BadSplitTag);
  CHECK_THROWS_WITH(load_manifest(path, kNoChecks),
                    Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("a manifest shaped like a five-video dataset keeps the test video isolated") {
  // 440 train/pool rows over videos 0-3 plus 167 test rows on video 4.
  std::string csv = kManifestHeader;
  csv += '\n';
  for (int v = 0; v < 4; ++v)
    for (int i = 0; i < 110; ++i)
      csv += std::to_string(v) + "," + std::to_string(i) + ",,,,," +
             (v == 0 ? "labeled" : "pool") + "\n";
  for (int i = 0; i < 167; ++i) csv += "4," + std::to_string(i) + ",,,,,test\n";

  const auto dir = temp_dir("paper_shape");
  const auto path = write_text(dir, "m.csv", csv);
  const Manifest m = load_manifest(path, kNoChecks);
  REQUIRE(m.rows.size() == 607);

  const PoolState state = m.initial_state(11);
  CHECK(state.test.size() == 167);
  CHECK(state.labeled.size() == 110);
  CHECK(state.unlabeled.size() == 330);
  for (const auto& id : state.test) CHECK(id.video == 4);

  const auto groups = m.by_video();
  REQUIRE(groups.size() == 5);
  CHECK(groups.at(4).size() == 167);
  CHECK(m.videos() == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("artifact probing resolves paths and collects dims") {
  const auto dir = temp_dir("probe");
  write_tensor(dir / "f0.tnsr", Tensor<double>({4}, {1, 2, 3, 4}));
  write_tensor(dir / "p0.tnsr",
               Tensor<double>({2, 3, 3}, std::vector<double>(18, 0.5)));
  write_tensor(dir / "l0.tnsr",
               Tensor<std::uint16_t>({3, 3}, std::vector<std::uint16_t>(9, 0)));
  const auto path = write_text(dir, "m.csv",
                               std::string(kManifestHeader) + "\n" +
                                   "0,0,f0.tnsr,p0.tnsr,l0.tnsr,,pool\n");
  const Manifest m = load_manifest(path);
  CHECK(m.dims.feature_dim == 4);
  CHECK(m.dims.num_classes == 2);
  REQUIRE(m.dims.frame_size.has_value());
  CHECK(m.dims.frame_size->first == 3);
  CHECK(m.dims.frame_size->second == 3);
}

TEST_CASE("unresolvable artifact paths are rejected with the line number") {
  const auto dir = temp_dir("unresolved");
  const auto path = write_text(dir, "m.csv",
                               std::string(kManifestHeader) + "\n" +
                                   "0,0,missing.tnsr,,,,pool\n");
  CHECK_THROWS_AS(load_manifest(path), UnresolvedPath);
  CHECK_THROWS_WITH(load_manifest(path),
                    Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("features of differing dimension are rejected") {
  const auto dir = temp_dir("inconsistent");
  write_tensor(dir / "f0.tnsr", Tensor<double>({4}, {1, 2, 3, 4}));
  write_tensor(dir / "f1.tnsr", Tensor<double>({5}, {1, 2, 3, 4, 5}));
  const auto path = write_text(dir, "m.csv",
                               std::string(kManifestHeader) + "\n" +
                                   "0,0,f0.tnsr,,,,pool\n"
                                   "0,1,f1.tnsr,,,,pool\n");
  CHECK_THROWS_AS(load_manifest(path), InconsistentDims);
}

TEST_CASE("manifest save/load round trip") {
  const auto dir = temp_dir("roundtrip");
  Manifest m;
  m.base_dir = dir;
  ManifestRow row;
  row.record.id = {2, 7};
  row.record.feature_ref = "f.tnsr";
  row.split = Split::test;
  m.rows.push_back(row);
  row.record.id = {2, 8};
  row.record.feature_ref.reset();
  row.record.pixel_ref = "p.tnsr";
  row.split = Split::pool;
  m.rows.push_back(row);

  save_manifest(dir / "m.csv", m);
  const Manifest back = load_manifest(dir / "m.csv", kNoChecks);
  REQUIRE(back.rows.size() == 2);
  CHECK(back.rows[0].record.id == FrameId{2, 7});
  CHECK(back.rows[0].record.feature_ref == "f.tnsr");
  CHECK(back.rows[0].split == Split::test);
  CHECK(back.rows[1].record.pixel_ref == "p.tnsr");
  CHECK(manifest_to_csv(back) == manifest_to_csv(m));
}

TEST_CASE("pool state JSON round trip is canonical") {
  PoolState state;
  state.labeled = {FrameId{0, 1}, FrameId{0, 2}};
  state.unlabeled = {FrameId{1, 0}};
  state.test = {FrameId{4, 9}};
  state.round = 3;
  state.seed = 0xFFFFFFFFFFFFFFFFull;

  const std::string text = pool_state_to_json(state);
  const PoolState back = pool_state_from_json(text);
  CHECK(back == state);
  CHECK(pool_state_to_json(back) == text);
}

TEST_CASE("pool state JSON validation") {
  CHECK_THROWS_AS(pool_state_from_json("not json"), ParseError);
  CHECK_THROWS_AS(pool_state_from_json("{}"), ParseError);
  CHECK_THROWS_AS(
      pool_state_from_json(R"({"version":9,"round":0,"seed":0,
        "labeled":[],"unlabeled":[],"test":[]})"),
      VersionUnsupported);
  CHECK_THROWS_AS(
      pool_state_from_json(R"({"version":1,"round":0,"seed":0,
        "labeled":["0:0"],"unlabeled":["0:0"],"test":[]})"),
      DuplicateFrameId);
}
