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

#ifndef FRAMESEL_EXPERIMENT_IO_HPP
#define FRAMESEL_EXPERIMENT_IO_HPP

#include <cmath>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "framesel/csv.hpp"
#include "framesel/errors.hpp"
#include "framesel/manifest.hpp"
#include "framesel/round_log_io.hpp"
#include "framesel/simulator.hpp"
#include "framesel/tensor_io.hpp"

namespace framesel {

/// Everything one `simulate` invocation needs: the synthetic task plus the
/// experiment protocol.
struct ExperimentSpec {
  SyntheticTaskConfig task;
  ExperimentConfig experiment;
};

/// Parses the simulate configuration document (JSON, UTF-8). Every key is
/// optional and falls back to the documented default task; unknown keys are
/// rejected.
///
///   {
///     "task": {
///       "n_videos": 5, "frames_per_video": 120, "classes": 8,
///       "height": 16, "width": 16, "feature_dim": 16,
///       "cluster_spread": 1.5, "cluster_separation": 10.0,
///       "label_noise": 0.05, "seed": 2024
///     },
///     "strategies": ["random", "entropy", "euclidean", "cosine"],
///     "budget": 50, "n_batches": 5, "rounds": 3,
///     "seeds": [0, 1, ...],        // or "n_seeds": 20 for 0..19
///     "test_video": 4,             // omit for a seeded pick per seed
///     "train_fraction": 0.8, "temperature": 3.0,
///     "all_data_anchor": true
///   }
inline ExperimentSpec experiment_spec_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("experiment config is not valid JSON: ") +
                     e.what());
  }
  if (!doc.is_object())
    throw ParseError("experiment config root is not an object");

  ExperimentSpec spec;
  spec.experiment.test_video = spec.task.n_videos - 1;

  const std::set<std::string> top_keys = {
      "task",   "strategies",   "budget",      "n_batches",
      "rounds", "seeds",        "n_seeds",     "test_video",
      "train_fraction", "temperature", "all_data_anchor"};
  const std::set<std::string> task_keys = {
      "n_videos", "frames_per_video", "classes",       "height",
      "width",    "feature_dim",      "cluster_spread", "cluster_separation",
      "label_noise", "seed"};
  for (const auto& [key, value] : doc.items())
    if (!top_keys.count(key))
      throw ParseError("unknown experiment config key '" + key + "'");

  try {
    if (doc.contains("task")) {
      const auto& task = doc["task"];
      for (const auto& [key, value] : task.items())
        if (!task_keys.count(key))
          throw ParseError("unknown task config key '" + key + "'");
      auto& t = spec.task;
      if (task.contains("n_videos")) t.n_videos = task["n_videos"];
      if (task.contains("frames_per_video"))
        t.frames_per_video = task["frames_per_video"];
      if (task.contains("classes")) t.num_classes = task["classes"];
      if (task.contains("height")) t.height = task["height"];
      if (task.contains("width")) t.width = task["width"];
      if (task.contains("feature_dim")) t.feature_dim = task["feature_dim"];
      if (task.contains("cluster_spread"))
        t.cluster_spread = task["cluster_spread"];
      if (task.contains("cluster_separation"))
        t.cluster_separation = task["cluster_separation"];
      if (task.contains("label_noise")) t.label_noise = task["label_noise"];
      if (task.contains("seed")) t.seed = task["seed"];
      if (!doc.contains("test_video") && t.n_videos >= 1)
        spec.experiment.test_video = t.n_videos - 1;
    }
    auto& e = spec.experiment;
    if (doc.contains("strategies")) {
      e.strategies.clear();
      for (const auto& name : doc["strategies"])
        e.strategies.push_back(parse_strategy(name.get<std::string>()));
    }
    if (doc.contains("budget")) e.budget = doc["budget"];
    if (doc.contains("n_batches")) e.n_batches = doc["n_batches"];
    if (doc.contains("rounds")) e.rounds = doc["rounds"];
    if (doc.contains("seeds") && doc.contains("n_seeds"))
      throw ParseError("give either 'seeds' or 'n_seeds', not both");
    if (doc.contains("seeds")) {
      e.seeds.clear();
      for (const auto& s : doc["seeds"]) e.seeds.push_back(s.get<std::uint64_t>());
      if (e.seeds.empty()) throw InvalidConfig("'seeds' must not be empty");
    }
    if (doc.contains("n_seeds")) {
      const auto n = doc["n_seeds"].get<std::uint64_t>();
      if (n == 0) throw InvalidConfig("'n_seeds' must be positive");
      e.seeds.clear();
      for (std::uint64_t s = 0; s < n; ++s) e.seeds.push_back(s);
    }
    if (doc.contains("test_video"))
      e.test_video = doc["test_video"].get<std::uint32_t>();
    if (doc.contains("train_fraction")) e.train_fraction = doc["train_fraction"];
    if (doc.contains("temperature")) e.temperature = doc["temperature"];
    if (doc.contains("all_data_anchor"))
      e.include_all_data_anchor = doc["all_data_anchor"];
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("experiment config field has wrong type: ") +
                     ex.what());
  }
  spec.task.validate();
  spec.experiment.validate();
  return spec;
}

/// Per-round curves CSV for external plotting:
///   strategy,seed,round,n_labeled,miou,iou_class_0,...
inline std::string curves_to_csv(const std::vector<RoundLog>& logs) {
  const std::size_t num_classes =
      logs.empty() ? 0 : logs.front().per_class_iou.size();
  std::string out = "strategy,seed,round,n_labeled,miou";
  for (std::size_t k = 0; k < num_classes; ++k)
    out += ",iou_class_" + std::to_string(k);
  out += '\n';
  for (const auto& log : logs) {
    if (log.per_class_iou.size() != num_classes)
      throw LengthMismatch("curve rows disagree on class count");
    std::vector<std::string> fields = {to_string(log.strategy),
                                       std::to_string(log.seed),
                                       std::to_string(log.round),
                                       std::to_string(log.n_labeled),
                                       format_double(log.miou)};
    for (const double iou : log.per_class_iou)
      fields.push_back(format_double(iou));
    out += csv_join(fields);
    out += '\n';
  }
  return out;
}

struct StrategySummary {
  Strategy strategy = Strategy::random;
  std::size_t n_seeds = 0;
  double mean_miou = 0.0;
  double std_miou = 0.0;  // sample standard deviation
};

/// Final-round mean and sample standard deviation of the test mIoU per
/// strategy (the anchor rows summarize under "all").
inline std::vector<StrategySummary> summarize_final_round(
    const std::vector<RoundLog>& logs, std::uint32_t final_round) {
  const Strategy order[] = {Strategy::random, Strategy::entropy,
                            Strategy::euclidean, Strategy::cosine,
                            Strategy::all_data};
  std::vector<StrategySummary> out;
  for (const Strategy s : order) {
    std::vector<double> values;
    for (const auto& log : logs)
      if (log.strategy == s && log.round == final_round)
        values.push_back(log.miou);
    if (values.empty()) continue;
    StrategySummary summary;
    summary.strategy = s;
    summary.n_seeds = values.size();
    for (const double v : values) summary.mean_miou += v;
    summary.mean_miou /= static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (const double v : values) {
        const double d = v - summary.mean_miou;
        ss += d * d;
      }
      summary.std_miou = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    out.push_back(summary);
  }
  return out;
}

/// Writes the dataset as TNSR artifacts plus a manifest under `dir`. Split
/// tags come from `state` when given (frames default to the pool otherwise);
/// probability maps are emitted when a model is given.
inline Manifest export_dataset(const SyntheticDataset& data,
                               const std::filesystem::path& dir,
                               const PoolState* state = nullptr,
                               const CentroidModel* model = nullptr) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create directory " + dir.string());

  Manifest manifest;
  manifest.base_dir = dir;
  for (const auto& frame : data.frames) {
    const std::string stem =
        "v" + std::to_string(frame.id.video) + "_f" +
        std::to_string(frame.id.index);
    ManifestRow row;
    row.record.id = frame.id;
    row.record.feature_ref = stem + ".feat.tnsr";
    row.record.label_ref = stem + ".label.tnsr";
    row.record.pixel_ref = stem + ".pix.tnsr";
    write_tensor(dir / *row.record.feature_ref,
                 Tensor<double>({data.cfg.feature_dim}, frame.feature));
    write_tensor(dir / *row.record.label_ref, frame.gt.classes);
    write_tensor(dir / *row.record.pixel_ref, frame.pixel_features);
    if (model) {
      row.record.probmap_ref = stem + ".prob.tnsr";
      write_tensor(dir / *row.record.probmap_ref,
                   predict_probmap(*model, frame.pixel_features).probs);
    }
    if (state) {
      if (state->labeled.count(frame.id)) row.split = Split::labeled;
      else if (state->test.count(frame.id)) row.split = Split::test;
      else row.split = Split::pool;
    }
    manifest.rows.push_back(std::move(row));
  }
  save_manifest(dir / "manifest.csv", manifest);
  return manifest;
}

}  // namespace framesel

#endif  // FRAMESEL_EXPERIMENT_IO_HPP
