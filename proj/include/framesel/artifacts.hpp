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

#ifndef FRAMESEL_ARTIFACTS_HPP
#define FRAMESEL_ARTIFACTS_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "framesel/core.hpp"
#include "framesel/errors.hpp"
#include "framesel/manifest.hpp"
#include "framesel/tensor_io.hpp"

namespace framesel {

/// Resolves frame ids to their stored tensors. Scoring and filtering code
/// depends only on this interface; implementations read files, serve from
/// memory, or compute on demand.
class FrameArtifacts {
 public:
  virtual ~FrameArtifacts() = default;

  /// Deep feature vector of the frame. Throws MissingFeature.
  virtual FeatureVector feature(const FrameId& id) const = 0;

  /// Per-pixel class probabilities of the frame. Throws MissingProbMap.
  virtual ProbMap probmap(const FrameId& id) const = 0;

  /// Raw pixel tensor (C,H,W), values in [0,1]. Throws MissingPixels.
  virtual Tensor<double> pixels(const FrameId& id) const = 0;
};

/// Reads TNSR files referenced by a manifest, resolving storage keys against
/// the manifest's directory. Integer pixel payloads are scaled by 1/255.
class ManifestArtifacts final : public FrameArtifacts {
 public:
  explicit ManifestArtifacts(const Manifest& manifest)
      : base_dir_(manifest.base_dir) {
    for (const auto& row : manifest.rows) records_[row.record.id] = row.record;
  }

  FeatureVector feature(const FrameId& id) const override {
    const auto& record = find(id);
    if (!record.feature_ref)
      throw MissingFeature("frame " + to_string(id) + " has no feature");
    const Tensor<double> t = to_double(read_tensor(base_dir_ / *record.feature_ref));
    if (t.rank() != 1)
      throw MissingFeature("frame " + to_string(id) +
                           ": feature tensor is not rank 1");
    return t.data();
  }

  ProbMap probmap(const FrameId& id) const override {
    const auto& record = find(id);
    if (!record.probmap_ref)
      throw MissingProbMap("frame " + to_string(id) +
                           " has no probability map");
    return ProbMap(to_double(read_tensor(base_dir_ / *record.probmap_ref)));
  }

  Tensor<double> pixels(const FrameId& id) const override {
    const auto& record = find(id);
    if (!record.pixel_ref)
      throw MissingPixels("frame " + to_string(id) + " has no pixel tensor");
    return to_double(read_tensor(base_dir_ / *record.pixel_ref));
  }

 private:
  const FrameRecord& find(const FrameId& id) const {
    const auto it = records_.find(id);
    if (it == records_.end())
      throw UnknownVideo("frame " + to_string(id) + " is not in the manifest");
    return it->second;
  }

  std::filesystem::path base_dir_;
  std::map<FrameId, FrameRecord> records_;
};

/// In-memory accessor; simulators and tests populate it directly. An
/// optional probmap provider serves maps computed on demand (the simulator
/// binds the current round's model here).
class MemoryArtifacts final : public FrameArtifacts {
 public:
  void put_feature(const FrameId& id, FeatureVector f) {
    features_[id] = std::move(f);
  }
  void put_probmap(const FrameId& id, ProbMap pm) {
    probmaps_[id] = std::move(pm);
  }
  void put_pixels(const FrameId& id, Tensor<double> px) {
    pixels_[id] = std::move(px);
  }
  void set_probmap_provider(std::function<ProbMap(const FrameId&)> provider) {
    probmap_provider_ = std::move(provider);
  }

  FeatureVector feature(const FrameId& id) const override {
    const auto it = features_.find(id);
    if (it == features_.end())
      throw MissingFeature("frame " + to_string(id) + " has no feature");
    return it->second;
  }

  ProbMap probmap(const FrameId& id) const override {
    const auto it = probmaps_.find(id);
    if (it != probmaps_.end()) return it->second;
    if (probmap_provider_) return probmap_provider_(id);
    throw MissingProbMap("frame " + to_string(id) + " has no probability map");
  }

  Tensor<double> pixels(const FrameId& id) const override {
    const auto it = pixels_.find(id);
    if (it == pixels_.end())
      throw MissingPixels("frame " + to_string(id) + " has no pixel tensor");
    return it->second;
  }

 private:
  std::map<FrameId, FeatureVector> features_;
  std::map<FrameId, ProbMap> probmaps_;
  std::map<FrameId, Tensor<double>> pixels_;
  std::function<ProbMap(const FrameId&)> probmap_provider_;
};

}  // namespace framesel

#endif  // FRAMESEL_ARTIFACTS_HPP
