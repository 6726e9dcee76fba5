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

#ifndef FRAMESEL_ACQUISITION_HPP
#define FRAMESEL_ACQUISITION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "framesel/artifacts.hpp"
#include "framesel/core.hpp"
#include "framesel/errors.hpp"
#include "framesel/rng.hpp"

namespace framesel {

inline constexpr double kDefaultMetricEpsilon = 1e-12;

enum class Metric { euclidean, cosine };

struct AcquisitionConfig {
  Strategy strategy = Strategy::random;
  std::size_t budget = 50;     // frames per round
  std::size_t n_batches = 5;   // entropy batching
  double metric_epsilon = kDefaultMetricEpsilon;
};

/// Strategy-specific informativeness; higher means more informative. The
/// components pair (inter_norm, intra_norm) is recorded by the diversity
/// strategies.
struct ScoredFrame {
  FrameId id;
  double score = 0.0;
  std::optional<std::pair<double, double>> components;
};

/// Shannon entropy -sum p_i ln p_i of one pixel's class distribution, with
/// 0 ln 0 = 0. Natural log, so the value lies in [0, ln K].
inline double pixel_entropy(std::span<const double> p) {
  double sum = 0.0;
  double entropy = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0 && v <= 1.0))
      throw NotNormalized("probability " + std::to_string(v) +
                          " outside [0,1]");
    sum += v;
    if (v > 0.0) entropy -= v * std::log(v);
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw NotNormalized("probabilities sum to " + std::to_string(sum));
  return entropy;
}

/// Mean pixel entropy over the whole map; the frame-level uncertainty score.
inline double frame_mean_entropy(const ProbMap& pm) {
  const std::size_t num_classes = pm.num_classes();
  const std::size_t height = pm.height();
  const std::size_t width = pm.width();
  const std::size_t plane = height * width;
  if (plane == 0) throw EmptyInput("probability map has no pixels");

  double total = 0.0;
  for (std::size_t h = 0; h < height; ++h) {
    for (std::size_t w = 0; w < width; ++w) {
      double sum = 0.0;
      double entropy = 0.0;
      for (std::size_t k = 0; k < num_classes; ++k) {
        const double v = pm.probs[k * plane + h * width + w];
        if (!(v >= 0.0 && v <= 1.0))
          throw NotNormalized("probability " + std::to_string(v) +
                              " outside [0,1] at pixel (" + std::to_string(h) +
                              "," + std::to_string(w) + ")");
        sum += v;
        if (v > 0.0) entropy -= v * std::log(v);
      }
      if (std::abs(sum - 1.0) > 1e-6)
        throw NotNormalized("pixel (" + std::to_string(h) + "," +
                            std::to_string(w) + ") probabilities sum to " +
                            std::to_string(sum));
      total += entropy;
    }
  }
  return total / static_cast<double>(plane);
}

inline double euclidean_distance(const FeatureVector& q,
                                 const FeatureVector& r) {
  if (q.size() != r.size())
    throw DimensionMismatch("feature dimensions " + std::to_string(q.size()) +
                            " vs " + std::to_string(r.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double d = q[i] - r[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

/// 1 - cosine similarity, in [0, 2]; larger means more dissimilar, so all
/// strategies rank most-informative-first.
inline double cosine_distance(const FeatureVector& q, const FeatureVector& r,
                              double metric_epsilon = kDefaultMetricEpsilon) {
  if (q.size() != r.size())
    throw DimensionMismatch("feature dimensions " + std::to_string(q.size()) +
                            " vs " + std::to_string(r.size()));
  double dot = 0.0, qq = 0.0, rr = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    dot += q[i] * r[i];
    qq += q[i] * q[i];
    rr += r[i] * r[i];
  }
  const double qn = std::sqrt(qq), rn = std::sqrt(rr);
  if (qn <= metric_epsilon || rn <= metric_epsilon)
    throw ZeroVector("cosine distance of a (near-)zero vector");
  return 1.0 - dot / (qn * rn);
}

inline double feature_distance(Metric metric, const FeatureVector& q,
                               const FeatureVector& r,
                               double metric_epsilon = kDefaultMetricEpsilon) {
  return metric == Metric::euclidean ? euclidean_distance(q, r)
                                     : cosine_distance(q, r, metric_epsilon);
}

/// Mean distance from a query feature to every labeled reference feature.
inline double inter_distance(const FeatureVector& q,
                             const std::vector<FeatureVector>& labeled,
                             Metric metric,
                             double metric_epsilon = kDefaultMetricEpsilon) {
  if (labeled.empty())
    throw EmptyReferenceSet("inter-distance needs at least one labeled frame");
  double sum = 0.0;
  for (const auto& r : labeled) sum += feature_distance(metric, q, r, metric_epsilon);
  return sum / static_cast<double>(labeled.size());
}

/// Mean distance from a query frame to the other candidate frames of its own
/// video; 0 when the query is the video's only candidate.
inline double intra_distance(
    const FrameId& q_id,
    const std::vector<std::pair<FrameId, FeatureVector>>& candidates,
    Metric metric, double metric_epsilon = kDefaultMetricEpsilon) {
  const FeatureVector* query = nullptr;
  for (const auto& [id, feature] : candidates) {
    if (id.video != q_id.video)
      throw UnknownVideo("intra-distance candidate " + to_string(id) +
                         " is not from video " + std::to_string(q_id.video));
    if (id == q_id) query = &feature;
  }
  if (!query)
    throw QueryNotInCandidates("frame " + to_string(q_id) +
                               " missing from its own candidate set");
  if (candidates.size() == 1) return 0.0;
  double sum = 0.0;
  for (const auto& [id, feature] : candidates)
    if (id != q_id) sum += feature_distance(metric, *query, feature, metric_epsilon);
  return sum / static_cast<double>(candidates.size() - 1);
}

/// (s - min) / (max - min) elementwise; a constant input maps to all zeros.
inline std::vector<double> min_max_normalize(const std::vector<double>& scores) {
  if (scores.empty()) throw EmptyInput("min_max_normalize of an empty list");
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(scores.size(), 0.0);
  if (hi > lo) {
    const double range = hi - lo;
    for (std::size_t i = 0; i < scores.size(); ++i)
      out[i] = (scores[i] - lo) / range;
  }
  return out;
}

/// Diversity score of every candidate of one video: inter- and
/// intra-distances are min-max normalized across the candidate set and
/// summed. Components are recorded per frame.
inline std::vector<ScoredFrame> diversity_scores(
    const std::vector<std::pair<FrameId, FeatureVector>>& candidates,
    const std::vector<FeatureVector>& labeled_features, Metric metric,
    double metric_epsilon = kDefaultMetricEpsilon) {
  if (candidates.empty()) return {};
  std::vector<double> inter(candidates.size());
  std::vector<double> intra(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    inter[i] = inter_distance(candidates[i].second, labeled_features, metric,
                              metric_epsilon);
    intra[i] =
        intra_distance(candidates[i].first, candidates, metric, metric_epsilon);
  }
  const auto inter_norm = min_max_normalize(inter);
  const auto intra_norm = min_max_normalize(intra);
  std::vector<ScoredFrame> scored(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored[i].id = candidates[i].first;
    scored[i].score = inter_norm[i] + intra_norm[i];
    scored[i].components = {inter_norm[i], intra_norm[i]};
  }
  return scored;
}

/// Sorts by score descending; ties break by ascending frame id.
inline std::vector<ScoredFrame> rank_frames(std::vector<ScoredFrame> scored) {
  for (const auto& s : scored)
    if (!std::isfinite(s.score))
      throw ValidationError("non-finite score for frame " + to_string(s.id));
  std::sort(scored.begin(), scored.end(),
            [](const ScoredFrame& a, const ScoredFrame& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.id < b.id;
            });
  return scored;
}

/// Splits the ranked list into n_batches contiguous batches of near-equal
/// size (the first |ranked| mod n_batches batches hold one extra frame) and
/// draws floor(budget / n_batches) frames uniformly without replacement from
/// each; the remaining budget mod n_batches slots go to the highest-ranked
/// batches, one each, in order. Deterministic given the rng stream.
inline std::vector<FrameId> batched_random_select(
    const std::vector<FrameId>& ranked, std::size_t budget,
    std::size_t n_batches, Pcg32& rng) {
  if (budget > ranked.size())
    throw BudgetExceedsPool("budget " + std::to_string(budget) +
                            " exceeds ranked pool of " +
                            std::to_string(ranked.size()));
  if (n_batches == 0 || n_batches > budget)
    throw TooManyBatches("n_batches " + std::to_string(n_batches) +
                         " must lie in [1, budget=" + std::to_string(budget) +
                         "]");
  const std::size_t base_size = ranked.size() / n_batches;
  const std::size_t extra_size = ranked.size() % n_batches;
  const std::size_t base_quota = budget / n_batches;
  const std::size_t extra_quota = budget % n_batches;

  std::vector<FrameId> out;
  out.reserve(budget);
  std::size_t offset = 0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    const std::size_t size = base_size + (b < extra_size ? 1 : 0);
    const std::size_t quota = base_quota + (b < extra_quota ? 1 : 0);
    for (const std::size_t i : sample_indices(size, quota, rng))
      out.push_back(ranked[offset + i]);
    offset += size;
  }
  return out;
}

namespace detail {

inline std::vector<FrameId> video_candidates(const PoolState& pool,
                                             std::uint32_t new_video) {
  std::vector<FrameId> candidates;
  for (const FrameId& id : pool.unlabeled)
    if (id.video == new_video) candidates.push_back(id);
  if (candidates.empty())
    throw UnknownVideo("video " + std::to_string(new_video) +
                       " has no unlabeled frames");
  return candidates;  // std::set iteration is already ascending
}

inline std::vector<ScoredFrame> entropy_scores(
    const std::vector<FrameId>& candidates, const FrameArtifacts& artifacts) {
  std::vector<ScoredFrame> scored(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scored[i].id = candidates[i];
    scored[i].score = frame_mean_entropy(artifacts.probmap(candidates[i]));
  }
  return scored;
}

inline std::vector<ScoredFrame> metric_scores(
    const std::vector<FrameId>& candidates, const PoolState& pool,
    Metric metric, const FrameArtifacts& artifacts, double metric_epsilon) {
  std::vector<std::pair<FrameId, FeatureVector>> cand_features;
  cand_features.reserve(candidates.size());
  for (const FrameId& id : candidates)
    cand_features.emplace_back(id, artifacts.feature(id));
  std::vector<FeatureVector> labeled_features;
  labeled_features.reserve(pool.labeled.size());
  for (const FrameId& id : pool.labeled)
    labeled_features.push_back(artifacts.feature(id));
  return diversity_scores(cand_features, labeled_features, metric,
                          metric_epsilon);
}

}  // namespace detail

/// Ranked informativeness scores for the unlabeled frames of one video,
/// without consuming randomness or mutating anything. The random strategy
/// has no score and is rejected.
inline std::vector<ScoredFrame> score_round(const PoolState& pool,
                                            std::uint32_t new_video,
                                            const AcquisitionConfig& cfg,
                                            const FrameArtifacts& artifacts) {
  const auto candidates = detail::video_candidates(pool, new_video);
  switch (cfg.strategy) {
    case Strategy::entropy:
      return rank_frames(detail::entropy_scores(candidates, artifacts));
    case Strategy::euclidean:
      return rank_frames(detail::metric_scores(
          candidates, pool, Metric::euclidean, artifacts, cfg.metric_epsilon));
    case Strategy::cosine:
      return rank_frames(detail::metric_scores(
          candidates, pool, Metric::cosine, artifacts, cfg.metric_epsilon));
    case Strategy::random:
      throw InvalidConfig("the random baseline has no informativeness score");
    case Strategy::all_data:
      throw InvalidConfig("'all' is an anchor, not a selection strategy");
  }
  throw InvalidConfig("unknown strategy");
}

/// One selection round over the unlabeled frames of `new_video`. Returns
/// min(budget, candidates) distinct frames of that video:
///   random     uniform sample;
///   entropy    mean-entropy ranking, then batched random draws;
///   euclidean / cosine
///              normalized inter+intra diversity ranking, top budget.
inline std::vector<FrameId> select_round(const PoolState& pool,
                                         std::uint32_t new_video,
                                         const AcquisitionConfig& cfg,
                                         const FrameArtifacts& artifacts,
                                         Pcg32& rng) {
  if (cfg.budget == 0) throw InvalidConfig("budget must be positive");
  if (cfg.n_batches == 0) throw InvalidConfig("n_batches must be positive");
  if (cfg.strategy == Strategy::entropy && cfg.budget < cfg.n_batches)
    throw InvalidConfig("entropy strategy needs budget >= n_batches");

  const auto candidates = detail::video_candidates(pool, new_video);
  const std::size_t budget = std::min(cfg.budget, candidates.size());

  switch (cfg.strategy) {
    case Strategy::random: {
      std::vector<FrameId> out;
      out.reserve(budget);
      for (const std::size_t i : sample_indices(candidates.size(), budget, rng))
        out.push_back(candidates[i]);
      return out;
    }
    case Strategy::entropy: {
      const auto ranked =
          rank_frames(detail::entropy_scores(candidates, artifacts));
      std::vector<FrameId> ranked_ids(ranked.size());
      for (std::size_t i = 0; i < ranked.size(); ++i)
        ranked_ids[i] = ranked[i].id;
      // Few candidates can force the effective budget below n_batches.
      const std::size_t n_batches = std::min(cfg.n_batches, budget);
      return batched_random_select(ranked_ids, budget, n_batches, rng);
    }
    case Strategy::euclidean:
    case Strategy::cosine: {
      const Metric metric = cfg.strategy == Strategy::euclidean
                                ? Metric::euclidean
                                : Metric::cosine;
      const auto ranked = rank_frames(detail::metric_scores(
          candidates, pool, metric, artifacts, cfg.metric_epsilon));
      std::vector<FrameId> out(budget);
      for (std::size_t i = 0; i < budget; ++i) out[i] = ranked[i].id;
      return out;
    }
    case Strategy::all_data:
      throw InvalidConfig("'all' is an anchor, not a selection strategy");
  }
  throw InvalidConfig("unknown strategy");
}

}  // namespace framesel

#endif  // FRAMESEL_ACQUISITION_HPP
