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

#ifndef FRAMESEL_CORE_HPP
#define FRAMESEL_CORE_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "framesel/errors.hpp"
#include "framesel/rng.hpp"
#include "framesel/tensor.hpp"

namespace framesel {

/// Identity of one video frame. The lexicographic (video, index) order is the
/// global tie-breaker wherever scores tie, so rankings replay identically on
/// every platform.
struct FrameId {
  std::uint32_t video = 0;
  std::uint32_t index = 0;

  auto operator<=>(const FrameId&) const = default;
};

/// Canonical text form "video:index", used in CLI output and round logs.
inline std::string to_string(const FrameId& id) {
  return std::to_string(id.video) + ":" + std::to_string(id.index);
}

inline FrameId parse_frame_id(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == text.size())
    throw ParseError("frame id '" + text + "' is not of the form video:index");
  try {
    const unsigned long video = std::stoul(text.substr(0, colon));
    const unsigned long index = std::stoul(text.substr(colon + 1));
    return FrameId{static_cast<std::uint32_t>(video),
                   static_cast<std::uint32_t>(index)};
  } catch (const std::exception&) {
    throw ParseError("frame id '" + text + "' is not of the form video:index");
  }
}

/// Unitless embedding coordinates of one frame; dimension is constant across
/// a dataset.
using FeatureVector = std::vector<double>;

/// One frame plus storage keys of its tensors. Keys are resolved by an
/// artifact accessor; absent keys are empty. Which keys must be present
/// depends on the operation (selection strategies need features or
/// probability maps, preprocessing needs pixels).
struct FrameRecord {
  FrameId id;
  std::optional<std::string> feature_ref;
  std::optional<std::string> probmap_ref;
  std::optional<std::string> label_ref;
  std::optional<std::string> pixel_ref;
};

/// Per-pixel class probabilities, K x H x W. Every pixel's K values are
/// nonnegative and sum to 1 within 1e-6.
struct ProbMap {
  Tensor<double> probs;

  ProbMap() = default;
  explicit ProbMap(Tensor<double> t) : probs(std::move(t)) {
    if (probs.rank() != 3)
      throw ShapeMismatch("probability map must be rank 3 (K,H,W), got rank " +
                          std::to_string(probs.rank()));
  }

  std::uint32_t num_classes() const { return probs.dim(0); }
  std::uint32_t height() const { return probs.dim(1); }
  std::uint32_t width() const { return probs.dim(2); }

  double at(std::size_t k, std::size_t h, std::size_t w) const {
    return probs.at3(k, h, w);
  }

  /// Full invariant check: entries in [0,1], per-pixel sums within 1e-6 of 1.
  void validate() const {
    for (std::uint32_t h = 0; h < height(); ++h) {
      for (std::uint32_t w = 0; w < width(); ++w) {
        double sum = 0.0;
        for (std::uint32_t k = 0; k < num_classes(); ++k) {
          const double p = at(k, h, w);
          if (!(p >= 0.0 && p <= 1.0))
            throw NotNormalized("probability " + std::to_string(p) +
                                " outside [0,1] at pixel (" +
                                std::to_string(h) + "," + std::to_string(w) +
                                ")");
          sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-6)
          throw NotNormalized("pixel (" + std::to_string(h) + "," +
                              std::to_string(w) + ") probabilities sum to " +
                              std::to_string(sum));
      }
    }
  }
};

/// Ground-truth or predicted class indices, H x W.
struct LabelMask {
  Tensor<std::uint16_t> classes;

  LabelMask() = default;
  explicit LabelMask(Tensor<std::uint16_t> t) : classes(std::move(t)) {
    if (classes.rank() != 2)
      throw ShapeMismatch("label mask must be rank 2 (H,W), got rank " +
                          std::to_string(classes.rank()));
  }

  std::uint32_t height() const { return classes.dim(0); }
  std::uint32_t width() const { return classes.dim(1); }
  std::uint16_t at(std::size_t h, std::size_t w) const {
    return classes.at2(h, w);
  }
};

enum class Strategy { random, entropy, euclidean, cosine, all_data };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::random: return "random";
    case Strategy::entropy: return "entropy";
    case Strategy::euclidean: return "euclidean";
    case Strategy::cosine: return "cosine";
    case Strategy::all_data: return "all";
  }
  throw InvalidConfig("unknown strategy enum value");
}

inline Strategy parse_strategy(const std::string& name) {
  if (name == "random") return Strategy::random;
  if (name == "entropy") return Strategy::entropy;
  if (name == "euclidean") return Strategy::euclidean;
  if (name == "cosine") return Strategy::cosine;
  if (name == "all") return Strategy::all_data;
  throw InvalidConfig("unknown strategy '" + name +
                      "' (expected random|entropy|euclidean|cosine|all)");
}

/// Partition of every frame in a dataset into the labeled set, the unlabeled
/// pool, and the held-out test set, plus the round counter and the seed of
/// the most recent transition. Immutable value; transitions return new
/// states.
struct PoolState {
  std::set<FrameId> labeled;
  std::set<FrameId> unlabeled;
  std::set<FrameId> test;
  std::uint32_t round = 0;
  std::uint64_t seed = 0;

  bool operator==(const PoolState&) const = default;
};

/// Record of one selection round. per_class_iou entries for classes whose
/// accumulated union was empty are NaN (excluded from the mean).
struct RoundLog {
  Strategy strategy = Strategy::random;
  std::uint64_t seed = 0;
  std::uint32_t round = 0;
  std::uint64_t n_labeled = 0;
  std::vector<FrameId> selected;
  double miou = 0.0;
  std::vector<double> per_class_iou;
};

/// Moves `selected` from the unlabeled pool to the labeled set and advances
/// the round counter by one. The ids must be distinct members of the pool.
inline PoolState apply_selection(const PoolState& state,
                                 const std::vector<FrameId>& selected) {
  std::set<FrameId> seen;
  for (const FrameId& id : selected) {
    if (!seen.insert(id).second)
      throw DuplicateSelection("frame " + to_string(id) +
                               " selected more than once");
    if (!state.unlabeled.count(id))
      throw SelectionNotInPool("frame " + to_string(id) +
                               " is not in the unlabeled pool");
  }
  PoolState next = state;
  for (const FrameId& id : selected) {
    next.unlabeled.erase(id);
    next.labeled.insert(id);
  }
  next.round = state.round + 1;
  return next;
}

/// Splits frames into train and validation parts. |train| is train_fraction
/// of the input rounded to the nearest integer; membership is a partial
/// Fisher-Yates draw from the ascending-id order, so the partition is a pure
/// function of the seed (stream rng_stream::kInitialSplit).
inline std::pair<std::set<FrameId>, std::set<FrameId>> initial_split(
    const std::vector<FrameId>& video_frames, double train_fraction,
    std::uint64_t seed) {
  if (video_frames.empty()) throw EmptyInput("initial_split of zero frames");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw InvalidConfig("train_fraction must lie in (0,1), got " +
                        std::to_string(train_fraction));

  std::vector<FrameId> ordered = video_frames;
  std::sort(ordered.begin(), ordered.end());

  const auto n_train = static_cast<std::size_t>(
      std::lround(train_fraction * static_cast<double>(ordered.size())));

  Pcg32 rng(seed, rng_stream::kInitialSplit);
  const auto picks = sample_indices(ordered.size(), n_train, rng);

  std::set<FrameId> train;
  for (const auto i : picks) train.insert(ordered[i]);
  std::set<FrameId> val;
  for (const FrameId& id : ordered)
    if (!train.count(id)) val.insert(id);
  return {std::move(train), std::move(val)};
}

/// Picks the held-out test video when the experiment configuration leaves it
/// unset: a uniform seeded draw over the distinct video ids (stream
/// rng_stream::kTestVideo).
inline std::uint32_t pick_test_video(const std::vector<std::uint32_t>& videos,
                                     std::uint64_t seed) {
  if (videos.empty()) throw EmptyInput("no videos to pick a test video from");
  std::vector<std::uint32_t> ordered = videos;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  Pcg32 rng(seed, rng_stream::kTestVideo);
  return ordered[rng.bounded(static_cast<std::uint32_t>(ordered.size()))];
}

}  // namespace framesel

#endif  // FRAMESEL_CORE_HPP
