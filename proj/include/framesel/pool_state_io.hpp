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

#ifndef FRAMESEL_POOL_STATE_IO_HPP
#define FRAMESEL_POOL_STATE_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "framesel/core.hpp"
#include "framesel/errors.hpp"
#include "framesel/tensor_io.hpp"

namespace framesel {

// Pool state document: UTF-8 JSON with six fields,
//   version   integer, currently 1
//   round     nonnegative integer
//   seed      nonnegative integer (64-bit)
//   labeled   array of "video:index" strings, ascending
//   unlabeled array of "video:index" strings, ascending
//   test      array of "video:index" strings, ascending
// Serialization is canonical (sets iterate in ascending id order), so equal
// states produce byte-identical documents.

inline constexpr int kPoolStateVersion = 1;

inline std::string pool_state_to_json(const PoolState& state) {
  nlohmann::ordered_json doc;
  doc["version"] = kPoolStateVersion;
  doc["round"] = state.round;
  doc["seed"] = state.seed;
  const auto ids = [](const std::set<FrameId>& set) {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (const FrameId& id : set) out.push_back(to_string(id));
    return out;
  };
  doc["labeled"] = ids(state.labeled);
  doc["unlabeled"] = ids(state.unlabeled);
  doc["test"] = ids(state.test);
  return doc.dump(2) + "\n";
}

inline PoolState pool_state_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pool state is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("pool state root is not an object");
  for (const char* key :
       {"version", "round", "seed", "labeled", "unlabeled", "test"})
    if (!doc.contains(key))
      throw ParseError(std::string("pool state is missing field '") + key +
                       "'");
  if (doc["version"].get<int>() != kPoolStateVersion)
    throw VersionUnsupported("pool state version " +
                             doc["version"].dump() + " (supported: 1)");

  PoolState state;
  try {
    state.round = doc["round"].get<std::uint32_t>();
    state.seed = doc["seed"].get<std::uint64_t>();
    const auto read_set = [&doc](const char* key) {
      std::set<FrameId> out;
      for (const auto& entry : doc[key]) {
        const FrameId id = parse_frame_id(entry.get<std::string>());
        if (!out.insert(id).second)
          throw DuplicateFrameId("pool state lists frame " + to_string(id) +
                                 " twice in '" + key + "'");
      }
      return out;
    };
    state.labeled = read_set("labeled");
    state.unlabeled = read_set("unlabeled");
    state.test = read_set("test");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pool state field has wrong type: ") +
                     e.what());
  }

  for (const FrameId& id : state.labeled)
    if (state.unlabeled.count(id) || state.test.count(id))
      throw DuplicateFrameId("frame " + to_string(id) +
                             " appears in more than one split");
  for (const FrameId& id : state.unlabeled)
    if (state.test.count(id))
      throw DuplicateFrameId("frame " + to_string(id) +
                             " appears in more than one split");
  return state;
}

inline void save_pool_state(const std::filesystem::path& path,
                            const PoolState& state) {
  write_file_synced(path, pool_state_to_json(state));
}

inline PoolState load_pool_state(const std::filesystem::path& path) {
  return pool_state_from_json(read_file(path));
}

}  // namespace framesel

#endif  // FRAMESEL_POOL_STATE_IO_HPP
