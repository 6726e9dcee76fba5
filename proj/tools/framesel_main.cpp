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

// framesel: active-learning frame selection for segmentation datasets.
//
// Subcommands: preprocess, score, select, simulate, report. Exit codes are a
// stable contract: 0 success, 1 I/O failure, 2 validation error. Diagnostics
// go to stderr, data to files; stdout carries human-readable summaries only.

#include <sys/file.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "framesel/framesel.hpp"

namespace fs = std::filesystem;
using namespace framesel;

namespace {

// ---------------------------------------------------------------------------
// Output discipline: stage every file as a synced temp, rename on commit.
// A failing subcommand leaves outputs absent or untouched.
// ---------------------------------------------------------------------------
class StagedWrites {
 public:
  ~StagedWrites() {
    for (const auto& [final_path, temp_path] : staged_) {
      std::error_code ec;
      fs::remove(temp_path, ec);
    }
  }

  void stage(const fs::path& final_path, const std::string& content) {
    const fs::path temp_path = final_path.string() + ".tmp";
    write_file_synced(temp_path, content);
    staged_.push_back({final_path, temp_path});
  }

  void commit() {
    for (auto& [final_path, temp_path] : staged_) {
      std::error_code ec;
      fs::rename(temp_path, final_path, ec);
      if (ec)
        throw IoFailure("cannot rename " + temp_path.string() + " to " +
                        final_path.string() + ": " + ec.message());
    }
    staged_.clear();
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

/// Advisory exclusive lock guarding pool-state mutation; one process at a
/// time per state file.
class StateLock {
 public:
  explicit StateLock(const fs::path& state_path)
      : path_(state_path.string() + ".lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw IoFailure("cannot open lock file " + path_.string());
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      fd_ = -1;
      throw IoFailure("state file is locked by another process (" +
                      path_.string() + ")");
    }
  }

  ~StateLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }

 private:
  fs::path path_;
  int fd_ = -1;
};

/// The video the current round considers: state.round+1 positions into the
/// ascending order of non-test videos (position 0 is the initial video).
std::uint32_t next_video(const Manifest& manifest, const PoolState& state) {
  std::set<std::uint32_t> test_videos;
  for (const FrameId& id : state.test) test_videos.insert(id.video);
  std::vector<std::uint32_t> order;
  for (const auto v : manifest.videos())
    if (!test_videos.count(v)) order.push_back(v);
  const std::size_t pos = static_cast<std::size_t>(state.round) + 1;
  if (pos >= order.size())
    throw InvalidConfig("no unconsidered video remains at round " +
                        std::to_string(state.round));
  return order[pos];
}

struct PreprocessArgs {
  std::string manifest_path;
  std::string output_path;
  std::string audit_path;
  double blur_threshold = 0.0;
  std::optional<double> dedup_threshold;
  std::optional<double> dedup_percentile;
};

int run_preprocess(const PreprocessArgs& args) {
  const Manifest manifest = load_manifest(args.manifest_path);
  PreprocessConfig cfg;
  cfg.blur_threshold = args.blur_threshold;
  cfg.dedup_threshold = args.dedup_threshold;
  cfg.dedup_percentile = args.dedup_percentile;
  cfg.validate();

  std::vector<ManifestRow> rows = manifest.rows;
  std::sort(rows.begin(), rows.end(),
            [](const ManifestRow& a, const ManifestRow& b) {
              return a.record.id < b.record.id;
            });
  std::vector<FrameRecord> frames;
  frames.reserve(rows.size());
  for (const auto& row : rows) frames.push_back(row.record);

  const ManifestArtifacts artifacts(manifest);
  const FilterResult result = filter_frames(frames, cfg, artifacts);

  std::set<FrameId> kept_ids;
  for (const auto& record : result.kept) kept_ids.insert(record.id);
  Manifest filtered;
  filtered.base_dir = manifest.base_dir;
  for (const auto& row : rows)
    if (kept_ids.count(row.record.id)) filtered.rows.push_back(row);

  std::string audit = "video,index,blur_score,distance_to_last_kept,kept\n";
  for (const auto& row : result.audit) {
    audit += csv_join(
        {std::to_string(row.id.video), std::to_string(row.id.index),
         format_double(row.blur_score),
         row.distance_to_last_kept ? format_double(*row.distance_to_last_kept)
                                   : "",
         row.kept ? "1" : "0"});
    audit += '\n';
  }

  StagedWrites writes;
  writes.stage(args.output_path, manifest_to_csv(filtered));
  writes.stage(args.audit_path, audit);
  writes.commit();

  std::cout << "kept " << result.kept.size() << " of " << frames.size()
            << " frames; filtered manifest: " << args.output_path << "\n";
  return 0;
}

struct ScoreArgs {
  std::string manifest_path;
  std::string state_path;
  std::string strategy = "entropy";
  std::string output_path;
  std::optional<std::uint32_t> video;
};

int run_score(const ScoreArgs& args) {
  const Manifest manifest = load_manifest(args.manifest_path);
  const PoolState state = args.state_path.empty()
                              ? manifest.initial_state(0)
                              : load_pool_state(args.state_path);
  AcquisitionConfig cfg;
  cfg.strategy = parse_strategy(args.strategy);
  const std::uint32_t video =
      args.video ? *args.video : next_video(manifest, state);

  const ManifestArtifacts artifacts(manifest);
  const auto scored = score_round(state, video, cfg, artifacts);

  std::string csv = "video,index,strategy,score,inter_norm,intra_norm\n";
  for (const auto& s : scored) {
    csv += csv_join({std::to_string(s.id.video), std::to_string(s.id.index),
                     args.strategy, format_double(s.score),
                     s.components ? format_double(s.components->first) : "",
                     s.components ? format_double(s.components->second) : ""});
    csv += '\n';
  }

  StagedWrites writes;
  writes.stage(args.output_path, csv);
  writes.commit();

  std::cout << "scored " << scored.size() << " frames of video " << video
            << " (" << args.strategy << "); output: " << args.output_path
            << "\n";
  return 0;
}

struct SelectArgs {
  std::string manifest_path;
  std::string state_path;
  std::string strategy = "random";
  std::size_t budget = 50;
  std::size_t n_batches = 5;
  std::uint64_t seed = 0;
  std::string output_path;
  std::string log_path;
  std::optional<std::uint32_t> video;
};

int run_select(const SelectArgs& args) {
  const StateLock lock(args.state_path);
  const Manifest manifest = load_manifest(args.manifest_path);

  PoolState state;
  if (fs::exists(args.state_path)) {
    state = load_pool_state(args.state_path);
  } else {
    // Fresh pool: bootstrap from the manifest's split column.
    state = manifest.initial_state(args.seed);
  }

  AcquisitionConfig cfg;
  cfg.strategy = parse_strategy(args.strategy);
  cfg.budget = args.budget;
  cfg.n_batches = args.n_batches;
  const std::uint32_t video =
      args.video ? *args.video : next_video(manifest, state);

  // The selection that produces round r draws from rng stream r.
  Pcg32 rng(args.seed, state.round + 1);
  const ManifestArtifacts artifacts(manifest);
  const auto selected = select_round(state, video, cfg, artifacts, rng);

  PoolState updated = apply_selection(state, selected);
  updated.seed = args.seed;

  RoundLog log;
  log.strategy = cfg.strategy;
  log.seed = args.seed;
  log.round = updated.round;
  log.n_labeled = updated.labeled.size();
  log.selected = selected;
  log.miou = std::nan("");  // selection does not evaluate a model
  log.per_class_iou.assign(manifest.dims.num_classes.value_or(0),
                           std::nan(""));

  const fs::path log_path = args.log_path.empty()
                                ? fs::path(args.state_path + ".rounds.csv")
                                : fs::path(args.log_path);
  std::vector<RoundLog> logs;
  if (fs::exists(log_path)) logs = load_round_log(log_path);
  if (!logs.empty() && logs.front().per_class_iou.size() !=
                           log.per_class_iou.size())
    log.per_class_iou.assign(logs.front().per_class_iou.size(), std::nan(""));
  logs.push_back(log);

  std::string ids;
  for (const FrameId& id : selected) ids += to_string(id) + "\n";

  StagedWrites writes;
  writes.stage(args.output_path, ids);
  writes.stage(log_path, round_logs_to_csv(logs));
  writes.stage(args.state_path, pool_state_to_json(updated));
  writes.commit();

  std::cout << "round " << updated.round << ": selected " << selected.size()
            << " frames from video " << video << " (" << args.strategy
            << ", seed " << args.seed << ")\n";
  return 0;
}

struct SimulateArgs {
  std::string config_path;
  std::string output_path;
  std::optional<std::uint32_t> rounds;
};

int run_simulate(const SimulateArgs& args) {
  ExperimentSpec spec;
  if (!args.config_path.empty()) {
    spec = experiment_spec_from_json(read_file(args.config_path));
  } else {
    spec.experiment.test_video = spec.task.n_videos - 1;
  }
  if (args.rounds) spec.experiment.rounds = *args.rounds;
  spec.experiment.validate();

  const SyntheticDataset data = generate_task(spec.task);
  const auto logs = run_experiment(data, spec.experiment);

  StagedWrites writes;
  writes.stage(args.output_path, curves_to_csv(logs));
  writes.commit();

  for (const auto& s :
       summarize_final_round(logs, spec.experiment.rounds)) {
    std::printf("%-10s final mIoU %.4f +/- %.4f (%zu seeds)\n",
                to_string(s.strategy).c_str(), s.mean_miou, s.std_miou,
                s.n_seeds);
  }
  std::cout << "curves: " << args.output_path << "\n";
  return 0;
}

struct ReportArgs {
  std::vector<std::string> log_paths;
  std::string classes;
  std::string output_path;
};

int run_report(const ReportArgs& args) {
  std::vector<RoundLog> logs;
  std::optional<std::size_t> num_classes;
  for (const auto& path : args.log_paths) {
    const auto file_logs = load_round_log(path);
    if (file_logs.empty()) continue;
    if (!num_classes) num_classes = file_logs.front().per_class_iou.size();
    for (const auto& log : file_logs) {
      if (log.per_class_iou.size() != *num_classes)
        throw InconsistentDims("log " + path + " declares " +
                               std::to_string(log.per_class_iou.size()) +
                               " classes, earlier logs " +
                               std::to_string(*num_classes));
      logs.push_back(log);
    }
  }
  if (logs.empty()) throw InvalidConfig("no round log rows to report on");

  std::vector<std::uint32_t> class_subset;
  if (!args.classes.empty()) {
    for (const auto& field : csv_split(args.classes, 0))
      class_subset.push_back(
          static_cast<std::uint32_t>(parse_uint(field, 0)));
  }

  const ReportTables tables = render_report(logs, class_subset);
  const std::string text = "Strategy comparison (mean over seeds)\n" +
                           tables.strategy_table +
                           "\nPer-class IoU (mean over seeds)\n" +
                           tables.per_class_table;
  if (args.output_path.empty()) {
    std::cout << text;
  } else {
    StagedWrites writes;
    writes.stage(args.output_path, text);
    writes.commit();
    std::cout << "report: " << args.output_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active-learning frame selection for segmentation datasets"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* cmd_pre = app.add_subcommand(
      "preprocess", "filter blurry and near-duplicate frames");
  cmd_pre->add_option("--manifest", pre.manifest_path, "dataset manifest CSV")
      ->required();
  cmd_pre->add_option("--output", pre.output_path, "filtered manifest path")
      ->required();
  cmd_pre->add_option("--audit", pre.audit_path, "audit CSV path")->required();
  cmd_pre->add_option("--blur-threshold", pre.blur_threshold,
                      "minimum Laplacian-variance sharpness");
  double dedup_threshold = 0.0, dedup_percentile = 0.0;
  auto* opt_thr = cmd_pre->add_option("--dedup-threshold", dedup_threshold,
                                      "absolute pixel-distance threshold");
  auto* opt_pct = cmd_pre->add_option(
      "--dedup-percentile", dedup_percentile,
      "derive the threshold from this percentile of consecutive distances");
  cmd_pre->callback([&] {
    if (opt_thr->count()) pre.dedup_threshold = dedup_threshold;
    if (opt_pct->count()) pre.dedup_percentile = dedup_percentile;
  });

  ScoreArgs score;
  auto* cmd_score = app.add_subcommand(
      "score", "rank a video's unlabeled frames by informativeness");
  cmd_score->add_option("--manifest", score.manifest_path, "dataset manifest")
      ->required();
  cmd_score->add_option("--state", score.state_path,
                        "pool state JSON (defaults to the manifest splits)");
  cmd_score->add_option("--strategy", score.strategy,
                        "entropy|euclidean|cosine")
      ->required();
  cmd_score->add_option("--output", score.output_path, "scores CSV path")
      ->required();
  std::uint32_t score_video = 0;
  auto* opt_score_video = cmd_score->add_option(
      "--video", score_video, "score this video instead of the next one");
  cmd_score->callback([&] {
    if (opt_score_video->count()) score.video = score_video;
  });

  SelectArgs sel;
  auto* cmd_select = app.add_subcommand(
      "select", "select a round's frames and update the pool state");
  cmd_select->add_option("--manifest", sel.manifest_path, "dataset manifest")
      ->required();
  cmd_select->add_option("--state", sel.state_path,
                         "pool state JSON (created from the manifest splits "
                         "when missing)")
      ->required();
  cmd_select->add_option("--strategy", sel.strategy,
                         "random|entropy|euclidean|cosine")
      ->required();
  cmd_select->add_option("--budget", sel.budget, "frames per round");
  cmd_select->add_option("--n-batches", sel.n_batches,
                         "entropy batching count");
  cmd_select->add_option("--seed", sel.seed, "RNG seed for this round")
      ->required();
  cmd_select->add_option("--output", sel.output_path,
                         "selected frame ids, one video:index per line")
      ->required();
  cmd_select->add_option("--log", sel.log_path,
                         "round log CSV (default: <state>.rounds.csv)");
  std::uint32_t sel_video = 0;
  auto* opt_sel_video = cmd_select->add_option(
      "--video", sel_video, "select from this video instead of the next one");
  cmd_select->callback([&] {
    if (opt_sel_video->count()) sel.video = sel_video;
  });

  SimulateArgs sim;
  auto* cmd_sim = app.add_subcommand(
      "simulate", "run the synthetic end-to-end strategy comparison");
  cmd_sim->add_option("--config", sim.config_path,
                      "experiment config JSON (defaults to the built-in task)");
  cmd_sim->add_option("--output", sim.output_path, "curves CSV path")
      ->required();
  std::uint32_t sim_rounds = 0;
  auto* opt_rounds =
      cmd_sim->add_option("--rounds", sim_rounds, "override round count");
  cmd_sim->callback([&] {
    if (opt_rounds->count()) sim.rounds = sim_rounds;
  });

  ReportArgs rep;
  auto* cmd_report =
      app.add_subcommand("report", "render comparison tables from round logs");
  cmd_report->add_option("--log", rep.log_paths, "round log CSV (repeatable)")
      ->required();
  cmd_report->add_option("--classes", rep.classes,
                         "comma-separated class subset for the per-class "
                         "table");
  cmd_report->add_option("--output", rep.output_path,
                         "write tables here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (cmd_pre->parsed()) return run_preprocess(pre);
    if (cmd_score->parsed()) return run_score(score);
    if (cmd_select->parsed()) return run_select(sel);
    if (cmd_sim->parsed()) return run_simulate(sim);
    if (cmd_report->parsed()) return run_report(rep);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoFailure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
