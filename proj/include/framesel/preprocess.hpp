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

#ifndef FRAMESEL_PREPROCESS_HPP
#define FRAMESEL_PREPROCESS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "framesel/artifacts.hpp"
#include "framesel/core.hpp"
#include "framesel/errors.hpp"
#include "framesel/tensor.hpp"

namespace framesel {

/// Frame-filtering configuration. Exactly one of dedup_threshold and
/// dedup_percentile drives deduplication: an absolute pixel-space distance,
/// or a per-video percentile of consecutive-frame distances from which the
/// threshold is derived.
struct PreprocessConfig {
  std::optional<double> dedup_threshold;
  std::optional<double> dedup_percentile;  // in (0, 100]
  double blur_threshold = 0.0;

  void validate() const {
    if (dedup_threshold.has_value() == dedup_percentile.has_value())
      throw InvalidConfig(
          "exactly one of dedup_threshold and dedup_percentile must be set");
    if (dedup_threshold && *dedup_threshold < 0.0)
      throw InvalidConfig("dedup_threshold must be nonnegative");
    if (dedup_percentile &&
        !(*dedup_percentile > 0.0 && *dedup_percentile <= 100.0))
      throw InvalidConfig("dedup_percentile must lie in (0, 100]");
    if (blur_threshold < 0.0)
      throw InvalidConfig("blur_threshold must be nonnegative");
  }
};

/// Euclidean distance between two equally shaped pixel tensors, summed over
/// every channel and pixel position.
inline double pixel_euclidean(const Tensor<double>& a,
                              const Tensor<double>& b) {
  if (a.dims() != b.dims())
    throw ShapeMismatch("pixel tensors differ in shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// Sharpness proxy: population variance of the 3x3 Laplacian response
/// (kernel center -4, cross neighbors 1) of the luminance channel, where
/// luminance is the mean over channels. The response is taken on the valid
/// (H-2)x(W-2) interior. Higher means sharper.
inline double blur_score(const Tensor<double>& frame) {
  if (frame.rank() != 3)
    throw ShapeMismatch("pixel tensor must be rank 3 (C,H,W)");
  const std::size_t channels = frame.dim(0);
  const std::size_t height = frame.dim(1);
  const std::size_t width = frame.dim(2);
  if (height < 3 || width < 3)
    throw TooSmall("blur_score needs H,W >= 3, got " + std::to_string(height) +
                   "x" + std::to_string(width));

  std::vector<double> lum(height * width, 0.0);
  for (std::size_t c = 0; c < channels; ++c)
    for (std::size_t i = 0; i < height * width; ++i)
      lum[i] += frame[c * height * width + i];
  for (auto& v : lum) v /= static_cast<double>(channels);

  const std::size_t rh = height - 2, rw = width - 2;
  std::vector<double> response(rh * rw);
  for (std::size_t y = 1; y + 1 < height; ++y) {
    for (std::size_t x = 1; x + 1 < width; ++x) {
      const double center = lum[y * width + x];
      response[(y - 1) * rw + (x - 1)] =
          lum[(y - 1) * width + x] + lum[(y + 1) * width + x] +
          lum[y * width + x - 1] + lum[y * width + x + 1] - 4.0 * center;
    }
  }
  double mean = 0.0;
  for (const double v : response) mean += v;
  mean /= static_cast<double>(response.size());
  double var = 0.0;
  for (const double v : response) var += (v - mean) * (v - mean);
  return var / static_cast<double>(response.size());
}

/// Percentile with linear interpolation between closest ranks: for sorted
/// values v[0..n-1] the p-th percentile sits at rank (p/100)*(n-1).
inline double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw EmptyInput("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double rank = (p / 100.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

struct AuditRow {
  FrameId id;
  double blur_score = 0.0;
  std::optional<double> distance_to_last_kept;  // empty for blur drops and
                                                // the first kept per video
  bool kept = false;
};

struct FilterResult {
  std::vector<FrameRecord> kept;  // subsequence of the input
  std::vector<AuditRow> audit;    // one row per input frame, input order
  std::map<std::uint32_t, double> effective_threshold;  // per video
};

/// Two-stage filter: frames with blur_score below blur_threshold are dropped,
/// then each video is scanned in order keeping a frame iff its pixel distance
/// to the last kept frame of that video reaches the effective threshold. The
/// first sharp frame of each video is always kept.
///
/// When the threshold is percentile-derived, it is computed per video from
/// the consecutive distances of that video's sharp frames; a video with
/// fewer than two sharp frames gets threshold 0.
inline FilterResult filter_frames(const std::vector<FrameRecord>& frames,
                                  const PreprocessConfig& cfg,
                                  const FrameArtifacts& artifacts) {
  cfg.validate();

  struct Entry {
    std::size_t input_pos;
    FrameRecord record;
    double blur = 0.0;
    bool sharp = false;
  };
  std::map<std::uint32_t, std::vector<Entry>> videos;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (!frames[i].pixel_ref)
      throw MissingPixels("frame " + to_string(frames[i].id) +
                          " has no pixel tensor");
    videos[frames[i].id.video].push_back({i, frames[i], 0.0, false});
  }

  FilterResult result;
  result.audit.resize(frames.size());
  std::vector<char> keep_flags(frames.size(), 0);

  for (auto& [video, entries] : videos) {
    // Blur pass; also collects consecutive distances of the sharp frames for
    // the percentile threshold.
    std::vector<double> consecutive;
    std::optional<Tensor<double>> prev_sharp;
    for (auto& e : entries) {
      const Tensor<double> px = artifacts.pixels(e.record.id);
      e.blur = blur_score(px);
      e.sharp = e.blur >= cfg.blur_threshold;
      result.audit[e.input_pos] = {e.record.id, e.blur, std::nullopt, false};
      if (e.sharp && cfg.dedup_percentile) {
        if (prev_sharp) consecutive.push_back(pixel_euclidean(px, *prev_sharp));
        prev_sharp = px;
      }
    }

    double threshold = 0.0;
    if (cfg.dedup_threshold) threshold = *cfg.dedup_threshold;
    else if (!consecutive.empty())
      threshold = percentile(consecutive, *cfg.dedup_percentile);
    result.effective_threshold[video] = threshold;

    // Greedy scan against the last kept frame.
    std::optional<Tensor<double>> last_kept;
    for (auto& e : entries) {
      if (!e.sharp) continue;
      const Tensor<double> px = artifacts.pixels(e.record.id);
      bool keep;
      if (!last_kept) {
        keep = true;
      } else {
        const double d = pixel_euclidean(px, *last_kept);
        result.audit[e.input_pos].distance_to_last_kept = d;
        keep = d >= threshold;
      }
      if (keep) {
        last_kept = px;
        keep_flags[e.input_pos] = 1;
        result.audit[e.input_pos].kept = true;
      }
    }
  }

  for (std::size_t i = 0; i < frames.size(); ++i)
    if (keep_flags[i]) result.kept.push_back(frames[i]);
  return result;
}

}  // namespace framesel

#endif  // FRAMESEL_PREPROCESS_HPP
