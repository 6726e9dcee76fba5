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

#ifndef FRAMESEL_ROUND_LOG_IO_HPP
#define FRAMESEL_ROUND_LOG_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "framesel/core.hpp"
#include "framesel/csv.hpp"
#include "framesel/errors.hpp"
#include "framesel/tensor_io.hpp"

namespace framesel {

// Round log CSV:
//   strategy,seed,round,n_labeled,selected_ids,miou,iou_class_0,...,iou_class_{K-1}
// selected_ids is ';'-joined video:index pairs, empty when nothing was
// selected. Floats use shortest round-trip decimals; classes excluded from
// the mIoU mean (empty accumulated union) carry "nan".

inline std::string round_log_header(std::size_t num_classes) {
  std::string header = "strategy,seed,round,n_labeled,selected_ids,miou";
  for (std::size_t k = 0; k < num_classes; ++k)
    header += ",iou_class_" + std::to_string(k);
  return header;
}

inline std::string round_log_row(const RoundLog& log) {
  std::string ids;
  for (std::size_t i = 0; i < log.selected.size(); ++i) {
    if (i) ids += ';';
    ids += to_string(log.selected[i]);
  }
  std::vector<std::string> fields = {to_string(log.strategy),
                                     std::to_string(log.seed),
                                     std::to_string(log.round),
                                     std::to_string(log.n_labeled),
                                     ids,
                                     format_double(log.miou)};
  for (const double iou : log.per_class_iou)
    fields.push_back(format_double(iou));
  return csv_join(fields);
}

inline std::string round_logs_to_csv(const std::vector<RoundLog>& logs) {
  const std::size_t num_classes =
      logs.empty() ? 0 : logs.front().per_class_iou.size();
  for (const auto& log : logs)
    if (log.per_class_iou.size() != num_classes)
      throw LengthMismatch("round logs disagree on class count: " +
                           std::to_string(log.per_class_iou.size()) + " vs " +
                           std::to_string(num_classes));
  std::string out = round_log_header(num_classes);
  out += '\n';
  for (const auto& log : logs) {
    out += round_log_row(log);
    out += '\n';
  }
  return out;
}

inline void save_round_log(const std::filesystem::path& path,
                           const std::vector<RoundLog>& logs) {
  write_file_synced(path, round_logs_to_csv(logs));
}

/// Parses a round log CSV. The curves CSV the simulator emits is the same
/// table minus the selected_ids column, so it loads here too (with empty
/// selections).
inline std::vector<RoundLog> round_logs_from_csv(const std::string& content) {
  const auto lines = split_lines(content);
  if (lines.empty()) throw ParseError("line 1: empty round log");

  const auto header_fields = csv_split(lines[0], 1);
  if (header_fields.size() < 5)
    throw ParseError("line 1: round log header has only " +
                     std::to_string(header_fields.size()) + " columns");
  const bool has_selected = header_fields[4] == "selected_ids";
  const std::size_t n_fixed = has_selected ? 6 : 5;
  const std::vector<std::string> fixed =
      has_selected
          ? std::vector<std::string>{"strategy", "seed", "round", "n_labeled",
                                     "selected_ids", "miou"}
          : std::vector<std::string>{"strategy", "seed", "round", "n_labeled",
                                     "miou"};
  if (header_fields.size() < n_fixed)
    throw ParseError("line 1: round log header has only " +
                     std::to_string(header_fields.size()) + " columns");
  for (std::size_t i = 0; i < n_fixed; ++i)
    if (header_fields[i] != fixed[i])
      throw ParseError("line 1: header column " + std::to_string(i + 1) +
                       " is '" + header_fields[i] + "', expected '" +
                       fixed[i] + "'");
  const std::size_t num_classes = header_fields.size() - n_fixed;
  for (std::size_t k = 0; k < num_classes; ++k)
    if (header_fields[n_fixed + k] != "iou_class_" + std::to_string(k))
      throw ParseError("line 1: header column " +
                       std::to_string(n_fixed + k + 1) + " is '" +
                       header_fields[n_fixed + k] + "', expected '" +
                       "iou_class_" + std::to_string(k) + "'");

  std::vector<RoundLog> logs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = csv_split(lines[i], line_no);
    if (fields.size() != n_fixed + num_classes)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_fixed + num_classes) +
                       " fields, got " + std::to_string(fields.size()));
    RoundLog log;
    try {
      log.strategy = parse_strategy(fields[0]);
    } catch (const InvalidConfig& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
    log.seed = parse_uint(fields[1], line_no);
    log.round = static_cast<std::uint32_t>(parse_uint(fields[2], line_no));
    log.n_labeled = parse_uint(fields[3], line_no);
    if (has_selected && !fields[4].empty()) {
      std::size_t start = 0;
      while (start <= fields[4].size()) {
        const auto sep = fields[4].find(';', start);
        const std::string token =
            fields[4].substr(start, sep == std::string::npos ? std::string::npos
                                                             : sep - start);
        try {
          log.selected.push_back(parse_frame_id(token));
        } catch (const ParseError& e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (sep == std::string::npos) break;
        start = sep + 1;
      }
    }
    log.miou = parse_double(fields[n_fixed - 1], line_no);
    for (std::size_t k = 0; k < num_classes; ++k)
      log.per_class_iou.push_back(parse_double(fields[n_fixed + k], line_no));
    logs.push_back(std::move(log));
  }
  return logs;
}

inline std::vector<RoundLog> load_round_log(const std::filesystem::path& path) {
  return round_logs_from_csv(read_file(path));
}

}  // namespace framesel

#endif  // FRAMESEL_ROUND_LOG_IO_HPP
