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

#ifndef FRAMESEL_MANIFEST_HPP
#define FRAMESEL_MANIFEST_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "framesel/core.hpp"
#include "framesel/csv.hpp"
#include "framesel/errors.hpp"
#include "framesel/tensor_io.hpp"

namespace framesel {

enum class Split { pool, labeled, test };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::pool: return "pool";
    case Split::labeled: return "labeled";
    case Split::test: return "test";
  }
  throw InvalidConfig("unknown split enum value");
}

inline constexpr const char* kManifestHeader =
    "video,index,feature_path,probmap_path,label_path,pixel_path,split";

/// Tensor shapes declared by the artifacts a manifest references. Fields stay
/// unset until a referenced artifact of that kind is probed.
struct DatasetDims {
  std::optional<std::uint32_t> feature_dim;  // d
  std::optional<std::uint32_t> num_classes;  // K
  std::optional<std::pair<std::uint32_t, std::uint32_t>> frame_size;  // (H,W)
};

struct ManifestRow {
  FrameRecord record;
  Split split = Split::pool;
};

struct Manifest {
  std::vector<ManifestRow> rows;  // file order
  DatasetDims dims;
  std::filesystem::path base_dir;  // artifact paths resolve against this

  /// Records grouped by video, ascending frame index within each group.
  std::map<std::uint32_t, std::vector<FrameRecord>> by_video() const {
    std::map<std::uint32_t, std::vector<FrameRecord>> groups;
    for (const auto& row : rows) groups[row.record.id.video].push_back(row.record);
    for (auto& [video, records] : groups)
      std::sort(records.begin(), records.end(),
                [](const FrameRecord& a, const FrameRecord& b) {
                  return a.id < b.id;
                });
    return groups;
  }

  std::vector<std::uint32_t> videos() const {
    std::set<std::uint32_t> seen;
    for (const auto& row : rows) seen.insert(row.record.id.video);
    return {seen.begin(), seen.end()};
  }

  /// Fresh pool state taken from the split column, round 0.
  PoolState initial_state(std::uint64_t seed) const {
    PoolState state;
    state.round = 0;
    state.seed = seed;
    for (const auto& row : rows) {
      switch (row.split) {
        case Split::pool: state.unlabeled.insert(row.record.id); break;
        case Split::labeled: state.labeled.insert(row.record.id); break;
        case Split::test: state.test.insert(row.record.id); break;
      }
    }
    return state;
  }
};

struct ManifestOptions {
  /// Verify every referenced artifact exists and carries consistent shapes.
  bool check_artifacts = true;
};

namespace detail {

inline std::optional<std::string> opt_field(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return field;
}

inline void probe_artifact(const std::filesystem::path& base_dir,
                           const std::string& ref, const char* kind,
                           std::size_t line_no, DatasetDims& dims) {
  const std::filesystem::path path = base_dir / ref;
  if (!std::filesystem::exists(path))
    throw UnresolvedPath("line " + std::to_string(line_no) + ": " + kind +
                         " path '" + ref + "' does not resolve");
  const TensorHeader header = read_tensor_header(path);
  const std::string where =
      "line " + std::to_string(line_no) + ": " + kind + " '" + ref + "'";

  const auto check_hw = [&](std::uint32_t h, std::uint32_t w) {
    if (!dims.frame_size) {
      dims.frame_size = {h, w};
    } else if (dims.frame_size->first != h || dims.frame_size->second != w) {
      throw InconsistentDims(where + " has size " + std::to_string(h) + "x" +
                             std::to_string(w) + ", dataset declared " +
                             std::to_string(dims.frame_size->first) + "x" +
                             std::to_string(dims.frame_size->second));
    }
  };

  const std::string k = kind;
  if (k == "feature") {
    if (header.dims.size() != 1)
      throw InconsistentDims(where + " is not a rank-1 tensor");
    if (!dims.feature_dim) dims.feature_dim = header.dims[0];
    else if (*dims.feature_dim != header.dims[0])
      throw InconsistentDims(where + " has dimension " +
                             std::to_string(header.dims[0]) +
                             ", dataset declared " +
                             std::to_string(*dims.feature_dim));
  } else if (k == "probmap") {
    if (header.dims.size() != 3)
      throw InconsistentDims(where + " is not a rank-3 tensor");
    if (!dims.num_classes) dims.num_classes = header.dims[0];
    else if (*dims.num_classes != header.dims[0])
      throw InconsistentDims(where + " has " + std::to_string(header.dims[0]) +
                             " classes, dataset declared " +
                             std::to_string(*dims.num_classes));
    check_hw(header.dims[1], header.dims[2]);
  } else if (k == "label") {
    if (header.dims.size() != 2 || header.dtype != Dtype::u16)
      throw InconsistentDims(where + " is not a rank-2 uint16 tensor");
    check_hw(header.dims[0], header.dims[1]);
  } else {  // pixels, rank 3 (C,H,W)
    if (header.dims.size() != 3)
      throw InconsistentDims(where + " is not a rank-3 tensor");
    check_hw(header.dims[1], header.dims[2]);
  }
}

}  // namespace detail

inline Manifest load_manifest(const std::filesystem::path& path,
                              const ManifestOptions& options = {}) {
  const std::string content = read_file(path);
  const auto lines = split_lines(content);
  if (lines.empty())
    throw MissingColumn("line 1: empty manifest, expected header '" +
                        std::string(kManifestHeader) + "'");
  if (lines[0] != kManifestHeader)
    throw MissingColumn("line 1: header is '" + lines[0] + "', expected '" +
                        kManifestHeader + "'");

  Manifest manifest;
  manifest.base_dir = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
  std::set<FrameId> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = csv_split(lines[i], line_no);
    if (fields.size() != 7)
      throw MissingColumn("line " + std::to_string(line_no) + ": expected 7 "
                          "fields, got " + std::to_string(fields.size()));

    ManifestRow row;
    row.record.id.video =
        static_cast<std::uint32_t>(parse_uint(fields[0], line_no));
    row.record.id.index =
        static_cast<std::uint32_t>(parse_uint(fields[1], line_no));
    if (!seen.insert(row.record.id).second)
      throw DuplicateFrameId("line " + std::to_string(line_no) + ": frame " +
                             to_string(row.record.id) + " already declared");
    row.record.feature_ref = detail::opt_field(fields[2]);
    row.record.probmap_ref = detail::opt_field(fields[3]);
    row.record.label_ref = detail::opt_field(fields[4]);
    row.record.pixel_ref = detail::opt_field(fields[5]);

    if (fields[6] == "pool") row.split = Split::pool;
    else if (fields[6] == "labeled") row.split = Split::labeled;
    else if (fields[6] == "test") row.split = Split::test;
    else
      throw BadSplitTag("line " + std::to_string(line_no) + ": split '" +
                        fields[6] + "' (expected pool|labeled|test)");

    if (options.check_artifacts) {
      if (row.record.feature_ref)
        detail::probe_artifact(manifest.base_dir, *row.record.feature_ref,
                               "feature", line_no, manifest.dims);
      if (row.record.probmap_ref)
        detail::probe_artifact(manifest.base_dir, *row.record.probmap_ref,
                               "probmap", line_no, manifest.dims);
      if (row.record.label_ref)
        detail::probe_artifact(manifest.base_dir, *row.record.label_ref,
                               "label", line_no, manifest.dims);
      if (row.record.pixel_ref)
        detail::probe_artifact(manifest.base_dir, *row.record.pixel_ref,
                               "pixels", line_no, manifest.dims);
    }
    manifest.rows.push_back(std::move(row));
  }
  return manifest;
}

inline std::string manifest_to_csv(const Manifest& manifest) {
  std::string out = kManifestHeader;
  out += '\n';
  for (const auto& row : manifest.rows) {
    out += csv_join({std::to_string(row.record.id.video),
                     std::to_string(row.record.id.index),
                     row.record.feature_ref.value_or(""),
                     row.record.probmap_ref.value_or(""),
                     row.record.label_ref.value_or(""),
                     row.record.pixel_ref.value_or(""),
                     to_string(row.split)});
    out += '\n';
  }
  return out;
}

inline void save_manifest(const std::filesystem::path& path,
                          const Manifest& manifest) {
  write_file_synced(path, manifest_to_csv(manifest));
}

}  // namespace framesel

#endif  // FRAMESEL_MANIFEST_HPP
