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

#ifndef FRAMESEL_REPORT_HPP
#define FRAMESEL_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "framesel/core.hpp"
#include "framesel/csv.hpp"
#include "framesel/errors.hpp"

namespace framesel {

// Report rendering: values are means across the seeds present in the logs.
// Within each round the strict maximum per column is marked with '*' (ties
// mark every maximal entry); the "all" anchor rows never compete. Classes
// with no evaluated value render as '-', keeping genuine 0.0 scores
// distinguishable from excluded classes.

namespace report_detail {

struct GroupKey {
  std::uint32_t round;
  Strategy strategy;

  bool operator<(const GroupKey& other) const {
    if (round != other.round) return round < other.round;
    // canonical strategy order, anchor last
    return static_cast<int>(strategy) < static_cast<int>(other.strategy);
  }
};

struct GroupStats {
  std::uint64_t n_labeled = 0;
  double miou_sum = 0.0;
  std::size_t miou_n = 0;
  std::vector<double> class_sum;
  std::vector<std::size_t> class_n;
};

inline std::map<GroupKey, GroupStats> aggregate(
    const std::vector<RoundLog>& logs, std::size_t num_classes) {
  std::map<GroupKey, GroupStats> groups;
  for (const auto& log : logs) {
    auto& g = groups[{log.round, log.strategy}];
    if (g.class_sum.empty()) {
      g.class_sum.assign(num_classes, 0.0);
      g.class_n.assign(num_classes, 0);
      g.n_labeled = log.n_labeled;
    }
    if (!std::isnan(log.miou)) {
      g.miou_sum += log.miou;
      g.miou_n++;
    }
    for (std::size_t k = 0; k < num_classes; ++k) {
      if (!std::isnan(log.per_class_iou[k])) {
        g.class_sum[k] += log.per_class_iou[k];
        g.class_n[k]++;
      }
    }
  }
  return groups;
}

inline std::string pad(std::string text, std::size_t width) {
  if (text.size() < width) text.append(width - text.size(), ' ');
  return text;
}

inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  std::string out;
  for (std::size_t c = 0; c < header.size(); ++c) {
    out += pad(header[c], widths[c]);
    out += (c + 1 < header.size()) ? "  " : "";
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += pad(row[c], widths[c]);
      out += (c + 1 < row.size()) ? "  " : "";
    }
    out += '\n';
  }
  return out;
}

}  // namespace report_detail

struct ReportTables {
  std::string strategy_table;
  std::string per_class_table;
};

/// Renders (a) the per-round strategy comparison and (b) the per-class table
/// for `class_subset` (every class when empty). All logs must agree on the
/// class count.
inline ReportTables render_report(const std::vector<RoundLog>& logs,
                                  std::vector<std::uint32_t> class_subset = {}) {
  if (logs.empty()) throw EmptyInput("no round logs to report on");
  const std::size_t num_classes = logs.front().per_class_iou.size();
  for (const auto& log : logs)
    if (log.per_class_iou.size() != num_classes)
      throw InconsistentDims("round logs disagree on class count: " +
                             std::to_string(log.per_class_iou.size()) +
                             " vs " + std::to_string(num_classes));
  if (class_subset.empty())
    for (std::size_t k = 0; k < num_classes; ++k)
      class_subset.push_back(static_cast<std::uint32_t>(k));
  for (const auto k : class_subset)
    if (k >= num_classes)
      throw InvalidConfig("class " + std::to_string(k) +
                          " outside the log's " +
                          std::to_string(num_classes) + " classes");

  const auto groups = report_detail::aggregate(logs, num_classes);

  const auto mean_or_nan = [](double sum, std::size_t n) {
    return n ? sum / static_cast<double>(n) : std::nan("");
  };

  // Best-per-round marking, anchors excluded.
  std::map<std::uint32_t, double> best_miou;
  std::map<std::uint32_t, std::vector<double>> best_class;
  for (const auto& [key, g] : groups) {
    if (key.strategy == Strategy::all_data) continue;
    const double miou = mean_or_nan(g.miou_sum, g.miou_n);
    auto [it, fresh] = best_miou.try_emplace(key.round, miou);
    if (!fresh && !std::isnan(miou) &&
        (std::isnan(it->second) || miou > it->second))
      it->second = miou;
    auto& bc = best_class[key.round];
    if (bc.empty()) bc.assign(num_classes, std::nan(""));
    for (std::size_t k = 0; k < num_classes; ++k) {
      const double v = mean_or_nan(g.class_sum[k], g.class_n[k]);
      if (!std::isnan(v) && (std::isnan(bc[k]) || v > bc[k])) bc[k] = v;
    }
  }

  const auto cell = [](double value, bool starred) {
    if (std::isnan(value)) return std::string("-");
    return format_double(value) + (starred ? "*" : "");
  };

  std::vector<std::vector<std::string>> strategy_rows;
  std::vector<std::vector<std::string>> class_rows;
  for (const auto& [key, g] : groups) {
    const bool anchor = key.strategy == Strategy::all_data;
    const std::string round_text = anchor ? "-" : std::to_string(key.round);
    const double miou = mean_or_nan(g.miou_sum, g.miou_n);
    const bool miou_best = !anchor && !std::isnan(miou) &&
                           miou == best_miou.at(key.round);
    strategy_rows.push_back({round_text, to_string(key.strategy),
                             std::to_string(g.n_labeled),
                             cell(miou, miou_best)});
    std::vector<std::string> row = {round_text, to_string(key.strategy)};
    for (const auto k : class_subset) {
      const double v = mean_or_nan(g.class_sum[k], g.class_n[k]);
      const bool starred = !anchor && !std::isnan(v) &&
                           v == best_class.at(key.round)[k];
      row.push_back(cell(v, starred));
    }
    class_rows.push_back(std::move(row));
  }

  std::vector<std::string> class_header = {"round", "strategy"};
  for (const auto k : class_subset)
    class_header.push_back("class_" + std::to_string(k));

  ReportTables tables;
  tables.strategy_table = report_detail::render_table(
      {"round", "strategy", "n_labeled", "miou"}, strategy_rows);
  tables.per_class_table =
      report_detail::render_table(class_header, class_rows);
  return tables;
}

}  // namespace framesel

#endif  // FRAMESEL_REPORT_HPP
