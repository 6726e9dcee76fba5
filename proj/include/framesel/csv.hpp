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

#ifndef FRAMESEL_CSV_HPP
#define FRAMESEL_CSV_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include "framesel/errors.hpp"

namespace framesel {

/// Shortest decimal string that parses back to exactly the same double.
/// NaN renders as "nan", infinities as "inf"/"-inf".
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  bool negative = false;
  if (first != last && (*first == '-' || *first == '+')) {
    negative = (*first == '-');
    ++first;
  }
  std::string lowered(first, last);
  for (auto& c : lowered) c = static_cast<char>(std::tolower(c));
  if (lowered == "nan") return std::nan("");
  if (lowered == "inf" || lowered == "infinity")
    return negative ? -INFINITY : INFINITY;
  const auto res = std::from_chars(field.data(), field.data() + field.size(),
                                   value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line_no) + ": '" + field +
                     "' is not a number");
  return value;
}

inline std::uint64_t parse_uint(const std::string& field, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto res =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(line_no) + ": '" + field +
                     "' is not a nonnegative integer");
  return value;
}

/// Minimal RFC-4180 style field quoting: only fields containing a comma,
/// quote, or newline get quoted.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  return line;
}

/// Splits one CSV line into fields, honoring double-quote escapes.
inline std::vector<std::string> csv_split(const std::string& line,
                                          std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted)
    throw ParseError("line " + std::to_string(line_no) +
                     ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

/// Splits file content into lines on LF, dropping a trailing CR per line so
/// CRLF input loads too. A trailing final newline does not create an empty
/// record.
inline std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= content.size()) {
    const auto nl = content.find('\n', start);
    if (nl == std::string::npos) {
      if (start < content.size()) lines.push_back(content.substr(start));
      break;
    }
    std::string line = content.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

}  // namespace framesel

#endif  // FRAMESEL_CSV_HPP
