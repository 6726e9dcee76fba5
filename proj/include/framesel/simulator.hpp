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

#ifndef FRAMESEL_SIMULATOR_HPP
#define FRAMESEL_SIMULATOR_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "framesel/acquisition.hpp"
#include "framesel/artifacts.hpp"
#include "framesel/core.hpp"
#include "framesel/errors.hpp"
#include "framesel/rng.hpp"
#include "framesel/tensor.hpp"

namespace framesel {

// ---------------------------------------------------------------------------
// Synthetic task
// ---------------------------------------------------------------------------

/// Parameters of the synthetic segmentation task used to exercise the
/// selection strategies end to end without a neural network.
struct SyntheticTaskConfig {
  std::uint32_t n_videos = 5;
  std::uint32_t frames_per_video = 120;
  std::uint32_t num_classes = 8;   // K
  std::uint32_t height = 16;       // H
  std::uint32_t width = 16;        // W
  std::uint32_t feature_dim = 16;  // d
  double cluster_spread = 1.5;
  double cluster_separation = 10.0;
  double label_noise = 0.0;
  std::uint64_t seed = 2024;

  void validate() const {
    if (n_videos < 1) throw InvalidConfig("n_videos must be >= 1");
    if (frames_per_video < 1)
      throw InvalidConfig("frames_per_video must be >= 1");
    if (num_classes < 2) throw InvalidConfig("K must be >= 2");
    if (feature_dim < 2) throw InvalidConfig("d must be >= 2");
    if (height < 1 || width < 1) throw InvalidConfig("H and W must be >= 1");
    if (!(cluster_spread > 0.0))
      throw InvalidConfig("cluster_spread must be positive");
    if (!(cluster_separation > 0.0))
      throw InvalidConfig("cluster_separation must be positive");
    if (!(label_noise >= 0.0 && label_noise < 1.0))
      throw InvalidConfig("label_noise must lie in [0,1)");
  }
};

struct SyntheticFrame {
  FrameId id;
  Tensor<double> pixel_features;  // (d, H, W)
  LabelMask gt;
  FeatureVector feature;  // mean of the pixel features
};

struct SyntheticDataset {
  SyntheticTaskConfig cfg;
  std::vector<SyntheticFrame> frames;  // ascending id

  const SyntheticFrame& frame(const FrameId& id) const {
    const auto it =
        std::lower_bound(frames.begin(), frames.end(), id,
                         [](const SyntheticFrame& f, const FrameId& key) {
                           return f.id < key;
                         });
    if (it == frames.end() || !(it->id == id))
      throw UnknownVideo("frame " + to_string(id) + " is not in the dataset");
    return *it;
  }

  std::vector<std::uint32_t> videos() const {
    std::vector<std::uint32_t> out;
    for (const auto& f : frames)
      if (out.empty() || out.back() != f.id.video) out.push_back(f.id.video);
    return out;
  }

  std::vector<FrameId> video_frames(std::uint32_t video) const {
    std::vector<FrameId> out;
    for (const auto& f : frames)
      if (f.id.video == video) out.push_back(f.id);
    return out;
  }

  /// Ground-truth pixel count per class over the whole dataset.
  std::vector<std::uint64_t> class_pixel_counts() const {
    std::vector<std::uint64_t> counts(cfg.num_classes, 0);
    for (const auto& f : frames)
      for (const auto c : f.gt.classes.data()) counts[c]++;
    return counts;
  }
};

namespace sim_detail {

inline constexpr std::uint64_t kCentersStream = 0x43454E54ULL;   // "CENT"
inline constexpr std::uint64_t kVideoStreamBase = 0x5649440000ULL;  // "VID"

/// Class composition derived from the task config. The first few class ids
/// are "common" and appear in every video; the rest are rare, each homed to
/// one middle video, with the last video carrying the full palette so it can
/// serve as the held-out subject. Prevalence decays geometrically, so high
/// class ids are progressively rarer.
struct Composition {
  std::uint32_t n_common;
  std::vector<double> common_weights;  // base mixture over commons
  std::vector<double> highlight_fraction;  // per class, of a frame's pixels

  static Composition derive(const SyntheticTaskConfig& cfg) {
    Composition comp;
    comp.n_common = std::max<std::uint32_t>(1, (3 * cfg.num_classes) / 8);
    comp.common_weights.resize(comp.n_common);
    double total = 0.0;
    for (std::uint32_t j = 0; j < comp.n_common; ++j) {
      comp.common_weights[j] = std::pow(0.55, j);
      total += comp.common_weights[j];
    }
    for (auto& w : comp.common_weights) w /= total;
    comp.highlight_fraction.resize(cfg.num_classes);
    const double span = std::max<std::uint32_t>(1, cfg.num_classes - 1);
    for (std::uint32_t k = 0; k < cfg.num_classes; ++k)
      comp.highlight_fraction[k] = 0.5 * (1.0 - 0.3 * k / span);
    return comp;
  }

  /// True for the class that homes to the initial video: the second-rarest,
  /// whenever at least two rare classes exist. Its few frames can land in
  /// the never-selectable validation split, which only the all-data anchor
  /// gets to label.
  bool homes_to_first_video(const SyntheticTaskConfig& cfg,
                            std::uint32_t rare_class) const {
    return cfg.num_classes >= n_common + 2 &&
           rare_class + 2 == cfg.num_classes;
  }

  /// Rare classes present in `video`. Middle videos receive the remaining
  /// rares round-robin; the last video carries the full palette so it can
  /// serve as the held-out subject.
  std::vector<std::uint32_t> rare_palette(const SyntheticTaskConfig& cfg,
                                          std::uint32_t video) const {
    std::vector<std::uint32_t> rares;
    if (cfg.num_classes <= n_common) return rares;
    const std::uint32_t last = cfg.n_videos - 1;
    std::uint32_t middle_idx = 0;
    for (std::uint32_t r = n_common; r < cfg.num_classes; ++r) {
      if (cfg.n_videos == 1) {
        rares.push_back(r);
        continue;
      }
      if (homes_to_first_video(cfg, r)) {
        if (video == 0 || video == last) rares.push_back(r);
        continue;
      }
      if (cfg.n_videos == 2) {
        if (video == 1) rares.push_back(r);
        continue;
      }
      const std::uint32_t home = 1 + middle_idx % (cfg.n_videos - 2);
      middle_idx++;
      if (video == home || video == last) rares.push_back(r);
    }
    return rares;
  }

  /// Frames a rare class occupies in one of its videos. Most rares get a
  /// moderate share; the rarest class is kept extra scarce, the hardest
  /// case for any selection strategy; the class homed to the initial video
  /// appears there exactly once, so it sometimes hides entirely inside the
  /// validation split.
  std::uint32_t rare_count_in_video(const SyntheticTaskConfig& cfg,
                                    std::uint32_t rare_class,
                                    std::uint32_t video) const {
    if (homes_to_first_video(cfg, rare_class) && video == 0)
      return std::max<std::uint32_t>(
          1, static_cast<std::uint32_t>(
                 std::lround(0.01 * cfg.frames_per_video)));
    const bool rarest = rare_class + 1 == cfg.num_classes;
    const double frac =
        rarest ? 0.02
               : std::max(0.03, 0.067 - 0.002 * (rare_class - n_common));
    const auto count = static_cast<std::uint32_t>(
        std::lround(frac * cfg.frames_per_video));
    return std::max<std::uint32_t>(1, count);
  }
};

/// Largest-remainder apportionment of `total` items by `weights`.
inline std::vector<std::uint32_t> apportion(std::uint32_t total,
                                            const std::vector<double>& weights) {
  std::vector<std::uint32_t> counts(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::uint32_t assigned = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double ideal = total * weights[j];
    counts[j] = static_cast<std::uint32_t>(ideal);
    assigned += counts[j];
    remainders.push_back({ideal - counts[j], j});
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned)
    counts[remainders[i % remainders.size()].second]++;
  return counts;
}

}  // namespace sim_detail

/// Builds the synthetic dataset: K class centers at mutual distance about
/// cluster_separation, each frame an H x W grid of per-pixel feature points
/// drawn around the centers of the classes present in that frame, labels
/// optionally corrupted by uniform noise, and the frame-level feature set to
/// the mean of its pixel features. Deterministic given cfg.seed.
inline SyntheticDataset generate_task(const SyntheticTaskConfig& cfg) {
  cfg.validate();
  const auto comp = sim_detail::Composition::derive(cfg);
  const std::uint32_t num_classes = cfg.num_classes;
  const std::size_t plane = static_cast<std::size_t>(cfg.height) * cfg.width;

  // Class centers: an orthogonal scaled basis when the feature space is wide
  // enough (mutual distance exactly cluster_separation), otherwise random
  // directions at the equivalent radius.
  std::vector<FeatureVector> centers(num_classes,
                                     FeatureVector(cfg.feature_dim, 0.0));
  const double radius = cfg.cluster_separation / std::sqrt(2.0);
  if (cfg.feature_dim >= num_classes) {
    for (std::uint32_t k = 0; k < num_classes; ++k) centers[k][k] = radius;
  } else {
    Pcg32 rng(cfg.seed, sim_detail::kCentersStream);
    for (std::uint32_t k = 0; k < num_classes; ++k) {
      double norm = 0.0;
      for (auto& v : centers[k]) {
        v = rng.next_gaussian();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (auto& v : centers[k]) v = v / norm * radius;
    }
  }

  SyntheticDataset data;
  data.cfg = cfg;
  data.frames.reserve(static_cast<std::size_t>(cfg.n_videos) *
                      cfg.frames_per_video);

  for (std::uint32_t video = 0; video < cfg.n_videos; ++video) {
    Pcg32 rng(cfg.seed, sim_detail::kVideoStreamBase + video);

    // Frame highlights: homed rare classes get their small fixed counts, the
    // remaining frames go to the common classes by geometric weight.
    const auto rares = comp.rare_palette(cfg, video);
    std::vector<std::uint32_t> rare_counts;
    std::uint32_t rare_total = 0;
    for (const auto r : rares) {
      rare_counts.push_back(comp.rare_count_in_video(cfg, r, video));
      rare_total += rare_counts.back();
    }
    // Tiny configs: shed rare frames, rarest classes first, until at least
    // one common frame remains.
    for (std::size_t i = rares.size(); rare_total >= cfg.frames_per_video;) {
      if (i == 0) break;
      --i;
      while (rare_counts[i] > 0 && rare_total >= cfg.frames_per_video) {
        rare_counts[i]--;
        rare_total--;
      }
    }
    const auto common_counts =
        sim_detail::apportion(cfg.frames_per_video - rare_total,
                              comp.common_weights);

    std::vector<std::uint16_t> highlights;
    highlights.reserve(cfg.frames_per_video);
    for (std::uint32_t j = 0; j < comp.n_common; ++j)
      highlights.insert(highlights.end(), common_counts[j],
                        static_cast<std::uint16_t>(j));
    for (std::size_t i = 0; i < rares.size(); ++i)
      highlights.insert(highlights.end(), rare_counts[i],
                        static_cast<std::uint16_t>(rares[i]));
    shuffle(highlights, rng);

    std::vector<double> common_cdf(comp.n_common);
    double acc = 0.0;
    for (std::uint32_t j = 0; j < comp.n_common; ++j) {
      acc += comp.common_weights[j];
      common_cdf[j] = acc;
    }

    for (std::uint32_t index = 0; index < cfg.frames_per_video; ++index) {
      const std::uint16_t highlight = highlights[index];
      const auto block = static_cast<std::size_t>(
          std::lround(comp.highlight_fraction[highlight] * plane));

      SyntheticFrame frame;
      frame.id = {video, index};
      frame.pixel_features = Tensor<double>(
          {cfg.feature_dim, cfg.height, cfg.width});
      frame.gt =
          LabelMask(Tensor<std::uint16_t>({cfg.height, cfg.width}));
      frame.feature.assign(cfg.feature_dim, 0.0);

      for (std::size_t px = 0; px < plane; ++px) {
        std::uint16_t cls = highlight;
        if (px >= block) {
          const double u = rng.next_double();
          std::uint32_t j = 0;
          while (j + 1 < comp.n_common && u > common_cdf[j]) ++j;
          cls = static_cast<std::uint16_t>(j);
        }
        for (std::uint32_t dim = 0; dim < cfg.feature_dim; ++dim) {
          const double v =
              centers[cls][dim] + cfg.cluster_spread * rng.next_gaussian();
          frame.pixel_features[dim * plane + px] = v;
          frame.feature[dim] += v;
        }
        std::uint16_t label = cls;
        if (cfg.label_noise > 0.0 && rng.next_double() < cfg.label_noise)
          label = static_cast<std::uint16_t>(rng.bounded(num_classes));
        frame.gt.classes[px] = label;
      }
      for (auto& v : frame.feature) v /= static_cast<double>(plane);
      data.frames.push_back(std::move(frame));
    }
  }
  return data;
}

// ---------------------------------------------------------------------------
// Nearest-centroid probabilistic segmenter
// ---------------------------------------------------------------------------

/// Per-class prototypes in feature space plus a softmax temperature. Classes
/// with no labeled pixels are flagged absent and receive probability 0.
struct CentroidModel {
  std::vector<FeatureVector> centroids;  // size K
  std::vector<bool> present;             // size K
  double temperature = 1.0;

  std::uint32_t num_classes() const {
    return static_cast<std::uint32_t>(centroids.size());
  }
};

/// Refits from scratch: centroid_k is the mean of every labeled pixel
/// feature annotated as class k.
inline CentroidModel fit_model(const SyntheticDataset& data,
                               const std::set<FrameId>& labeled,
                               double temperature) {
  if (!(temperature > 0.0))
    throw InvalidConfig("temperature must be positive");
  if (labeled.empty()) throw NoLabeledData("no labeled frames to fit on");

  const std::uint32_t num_classes = data.cfg.num_classes;
  const std::uint32_t dim = data.cfg.feature_dim;
  CentroidModel model;
  model.temperature = temperature;
  model.centroids.assign(num_classes, FeatureVector(dim, 0.0));
  model.present.assign(num_classes, false);
  std::vector<std::uint64_t> counts(num_classes, 0);

  for (const FrameId& id : labeled) {
    const SyntheticFrame& frame = data.frame(id);
    const std::size_t plane =
        static_cast<std::size_t>(frame.gt.height()) * frame.gt.width();
    for (std::size_t px = 0; px < plane; ++px) {
      const std::uint16_t cls = frame.gt.classes[px];
      counts[cls]++;
      for (std::uint32_t d = 0; d < dim; ++d)
        model.centroids[cls][d] += frame.pixel_features[d * plane + px];
    }
  }
  std::uint64_t total = 0;
  for (std::uint32_t k = 0; k < num_classes; ++k) {
    total += counts[k];
    if (counts[k] > 0) {
      model.present[k] = true;
      for (auto& v : model.centroids[k]) v /= static_cast<double>(counts[k]);
    }
  }
  if (total == 0) throw NoLabeledData("labeled frames carry no pixels");
  return model;
}

/// Per pixel, p_k is proportional to exp(-distance(x, centroid_k) /
/// temperature) over present classes; absent classes get 0. The shared
/// minimum distance is subtracted before exponentiation, which cancels in
/// the normalization.
inline ProbMap predict_probmap(const CentroidModel& model,
                               const Tensor<double>& pixel_features) {
  if (pixel_features.rank() != 3)
    throw ShapeMismatch("pixel features must be rank 3 (d,H,W)");
  const std::uint32_t num_classes = model.num_classes();
  const std::uint32_t dim = pixel_features.dim(0);
  const std::uint32_t height = pixel_features.dim(1);
  const std::uint32_t width = pixel_features.dim(2);
  const std::size_t plane = static_cast<std::size_t>(height) * width;

  bool any_present = false;
  for (const bool p : model.present) any_present |= p;
  if (!any_present) throw NoPresentClasses("model has no present classes");

  ProbMap pm(Tensor<double>({num_classes, height, width}));
  std::vector<double> dist(num_classes, 0.0);
  for (std::size_t px = 0; px < plane; ++px) {
    double min_dist = 0.0;
    bool first = true;
    for (std::uint32_t k = 0; k < num_classes; ++k) {
      if (!model.present[k]) continue;
      double sum = 0.0;
      for (std::uint32_t d = 0; d < dim; ++d) {
        const double diff =
            pixel_features[d * plane + px] - model.centroids[k][d];
        sum += diff * diff;
      }
      dist[k] = std::sqrt(sum);
      if (first || dist[k] < min_dist) min_dist = dist[k];
      first = false;
    }
    double norm = 0.0;
    for (std::uint32_t k = 0; k < num_classes; ++k) {
      if (!model.present[k]) {
        pm.probs[k * plane + px] = 0.0;
        continue;
      }
      const double w = std::exp(-(dist[k] - min_dist) / model.temperature);
      pm.probs[k * plane + px] = w;
      norm += w;
    }
    for (std::uint32_t k = 0; k < num_classes; ++k)
      if (model.present[k]) pm.probs[k * plane + px] /= norm;
  }
  return pm;
}

/// Argmax prediction over the probability map; ties break toward the lowest
/// class index.
inline LabelMask predict_mask(const CentroidModel& model,
                              const Tensor<double>& pixel_features) {
  const ProbMap pm = predict_probmap(model, pixel_features);
  const std::size_t plane =
      static_cast<std::size_t>(pm.height()) * pm.width();
  LabelMask mask(Tensor<std::uint16_t>({pm.height(), pm.width()}));
  for (std::size_t px = 0; px < plane; ++px) {
    std::uint16_t best = 0;
    double best_p = -1.0;
    for (std::uint32_t k = 0; k < pm.num_classes(); ++k) {
      const double p = pm.probs[k * plane + px];
      if (p > best_p) {
        best_p = p;
        best = static_cast<std::uint16_t>(k);
      }
    }
    mask.classes[px] = best;
  }
  return mask;
}

// ---------------------------------------------------------------------------
// IoU evaluation
// ---------------------------------------------------------------------------

/// Intersection over union of one class; empty when the union is empty
/// (class absent from both masks).
inline std::optional<double> compute_iou(const LabelMask& pred,
                                         const LabelMask& gt,
                                         std::uint32_t cls) {
  if (pred.classes.dims() != gt.classes.dims())
    throw ShapeMismatch("prediction and ground truth differ in shape");
  std::uint64_t intersection = 0, unions = 0;
  for (std::size_t i = 0; i < pred.classes.size(); ++i) {
    const bool in_pred = pred.classes[i] == cls;
    const bool in_gt = gt.classes[i] == cls;
    intersection += in_pred && in_gt;
    unions += in_pred || in_gt;
  }
  if (unions == 0) return std::nullopt;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

struct MiouResult {
  double miou = 0.0;
  std::vector<double> per_class;  // NaN marks classes with empty union
};

/// Accumulates intersections and unions per class over all frames before
/// dividing; classes whose accumulated union stays empty are excluded from
/// the mean and flagged NaN.
inline MiouResult compute_miou(const std::vector<LabelMask>& preds,
                               const std::vector<LabelMask>& gts,
                               std::uint32_t num_classes) {
  if (preds.size() != gts.size())
    throw LengthMismatch("prediction list holds " +
                         std::to_string(preds.size()) + " masks, ground truth " +
                         std::to_string(gts.size()));
  if (preds.empty()) throw EmptyInput("no masks to evaluate");

  std::vector<std::uint64_t> inter(num_classes, 0), uni(num_classes, 0);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].classes.dims() != gts[i].classes.dims())
      throw ShapeMismatch("mask pair " + std::to_string(i) +
                          " differs in shape");
    for (std::size_t px = 0; px < preds[i].classes.size(); ++px) {
      const std::uint16_t p = preds[i].classes[px];
      const std::uint16_t g = gts[i].classes[px];
      if (p == g) {
        inter[p]++;
        uni[p]++;
      } else {
        uni[p]++;
        uni[g]++;
      }
    }
  }

  MiouResult result;
  result.per_class.assign(num_classes, std::nan(""));
  double sum = 0.0;
  std::uint32_t evaluated = 0;
  for (std::uint32_t k = 0; k < num_classes; ++k) {
    if (uni[k] == 0) continue;
    result.per_class[k] =
        static_cast<double>(inter[k]) / static_cast<double>(uni[k]);
    sum += result.per_class[k];
    evaluated++;
  }
  result.miou = evaluated ? sum / evaluated : std::nan("");
  return result;
}

// ---------------------------------------------------------------------------
// Experiment driver
// ---------------------------------------------------------------------------

/// Serves the synthetic dataset to the acquisition code: stored frame
/// features, and probability maps predicted on demand by the current round's
/// model.
class SimArtifacts final : public FrameArtifacts {
 public:
  SimArtifacts(const SyntheticDataset& data, const CentroidModel* model)
      : data_(data), model_(model) {}

  void set_model(const CentroidModel* model) { model_ = model; }

  FeatureVector feature(const FrameId& id) const override {
    return data_.frame(id).feature;
  }
  ProbMap probmap(const FrameId& id) const override {
    if (!model_)
      throw MissingProbMap("frame " + to_string(id) + ": no model fitted yet");
    return predict_probmap(*model_, data_.frame(id).pixel_features);
  }
  Tensor<double> pixels(const FrameId& id) const override {
    return data_.frame(id).pixel_features;
  }

 private:
  const SyntheticDataset& data_;
  const CentroidModel* model_;
};

struct ExperimentConfig {
  std::vector<Strategy> strategies = {Strategy::random, Strategy::entropy,
                                      Strategy::euclidean, Strategy::cosine};
  std::size_t budget = 50;
  std::size_t n_batches = 5;
  double metric_epsilon = kDefaultMetricEpsilon;
  std::uint32_t rounds = 3;
  std::vector<std::uint64_t> seeds = {0, 1, 2,  3,  4,  5,  6,  7,  8,  9,
                                      10, 11, 12, 13, 14, 15, 16, 17, 18, 19};
  std::optional<std::uint32_t> test_video;  // unset: seeded pick per seed
  double train_fraction = 0.8;
  double temperature = 3.0;
  bool include_all_data_anchor = true;

  void validate() const {
    if (strategies.empty()) throw InvalidConfig("no strategies configured");
    for (const Strategy s : strategies)
      if (s == Strategy::all_data)
        throw InvalidConfig("'all' is emitted as the anchor, not configured");
    if (seeds.empty()) throw InvalidConfig("no seeds configured");
    if (budget == 0) throw InvalidConfig("budget must be positive");
    if (n_batches == 0 || n_batches > budget)
      throw InvalidConfig("n_batches must lie in [1, budget]");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
      throw InvalidConfig("train_fraction must lie in (0,1)");
    if (!(temperature > 0.0))
      throw InvalidConfig("temperature must be positive");
  }
};

namespace sim_detail {

inline RoundLog evaluate_round(const SyntheticDataset& data,
                               const CentroidModel& model,
                               const std::vector<FrameId>& test_frames,
                               Strategy strategy, std::uint64_t seed,
                               std::uint32_t round, std::uint64_t n_labeled,
                               std::vector<FrameId> selected) {
  std::vector<LabelMask> preds, gts;
  preds.reserve(test_frames.size());
  gts.reserve(test_frames.size());
  for (const FrameId& id : test_frames) {
    const SyntheticFrame& frame = data.frame(id);
    preds.push_back(predict_mask(model, frame.pixel_features));
    gts.push_back(frame.gt);
  }
  const MiouResult miou = compute_miou(preds, gts, data.cfg.num_classes);
  RoundLog log;
  log.strategy = strategy;
  log.seed = seed;
  log.round = round;
  log.n_labeled = n_labeled;
  log.selected = std::move(selected);
  log.miou = miou.miou;
  log.per_class_iou = miou.per_class;
  return log;
}

}  // namespace sim_detail

/// Runs the full selection loop for every (seed, strategy) cell: initial
/// 80/20-style split on the first non-test video, then per round fit, score
/// the next video, select, annotate, refit, and evaluate on the held-out
/// video. One "all" anchor row per seed evaluates the model trained on every
/// non-test frame. Logs are ordered seed-major, strategy, round; the anchor
/// closes each seed block.
inline std::vector<RoundLog> run_experiment(const SyntheticDataset& data,
                                            const ExperimentConfig& cfg) {
  cfg.validate();
  const auto videos = data.videos();

  std::vector<RoundLog> logs;
  for (const std::uint64_t seed : cfg.seeds) {
    const std::uint32_t test_video =
        cfg.test_video ? *cfg.test_video : pick_test_video(videos, seed);
    if (std::find(videos.begin(), videos.end(), test_video) == videos.end())
      throw InvalidConfig("test video " + std::to_string(test_video) +
                          " is not in the dataset");

    std::vector<std::uint32_t> order;
    for (const auto v : videos)
      if (v != test_video) order.push_back(v);
    if (order.empty() || cfg.rounds > order.size() - 1)
      throw InsufficientVideos(
          "need " + std::to_string(cfg.rounds + 2) + " videos (init + " +
          std::to_string(cfg.rounds) + " rounds + test), have " +
          std::to_string(videos.size()));

    const auto test_frames = data.video_frames(test_video);

    // Initial pool: the first non-test video is split into train/val; the
    // val part stays unlabeled but is never a selection candidate.
    const auto [train, val] =
        initial_split(data.video_frames(order[0]), cfg.train_fraction, seed);
    PoolState init_state;
    init_state.seed = seed;
    init_state.labeled = train;
    init_state.test = {test_frames.begin(), test_frames.end()};
    init_state.unlabeled = val;
    for (std::size_t i = 1; i < order.size(); ++i)
      for (const FrameId& id : data.video_frames(order[i]))
        init_state.unlabeled.insert(id);

    for (const Strategy strategy : cfg.strategies) {
      PoolState state = init_state;
      CentroidModel model = fit_model(data, state.labeled, cfg.temperature);
      SimArtifacts artifacts(data, &model);
      logs.push_back(sim_detail::evaluate_round(
          data, model, test_frames, strategy, seed, 0, state.labeled.size(),
          {}));

      AcquisitionConfig acq;
      acq.strategy = strategy;
      acq.budget = cfg.budget;
      acq.n_batches = cfg.n_batches;
      acq.metric_epsilon = cfg.metric_epsilon;

      for (std::uint32_t round = 1; round <= cfg.rounds; ++round) {
        Pcg32 rng(seed, round);  // per-round stream
        const auto selected =
            select_round(state, order[round], acq, artifacts, rng);
        state = apply_selection(state, selected);
        model = fit_model(data, state.labeled, cfg.temperature);
        logs.push_back(sim_detail::evaluate_round(
            data, model, test_frames, strategy, seed, round,
            state.labeled.size(), selected));
      }
    }

    if (cfg.include_all_data_anchor) {
      std::set<FrameId> all_labeled;
      for (const auto& frame : data.frames)
        if (frame.id.video != test_video) all_labeled.insert(frame.id);
      const CentroidModel model =
          fit_model(data, all_labeled, cfg.temperature);
      logs.push_back(sim_detail::evaluate_round(
          data, model, test_frames, Strategy::all_data, seed, cfg.rounds,
          all_labeled.size(), {}));
    }
  }
  return logs;
}

}  // namespace framesel

#endif  // FRAMESEL_SIMULATOR_HPP
