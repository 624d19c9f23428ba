// Copyright 2026 The SeedForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Comparison tables over campaign output directories.

#ifndef SEEDFORGE_REPORT_HPP_
#define SEEDFORGE_REPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "seedforge/codec.hpp"
#include "seedforge/error.hpp"

namespace seedforge {

struct ComparisonRow {
  std::string label;
  double unique_crashes = 0;
  double unique_paths = 0;
  double executions = 0;
  double max_generation = 0;

  bool operator==(const ComparisonRow &) const = default;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  ComparisonRow total{"total"};
  ComparisonRow average{"average"};
};

inline ComparisonRow ReadSummaryRow(const std::filesystem::path &dir) {
  const auto file = dir / "summary.json";
  if (!std::filesystem::is_regular_file(file)) {
    throw Error(ErrorCode::kMissingSummary, file.string());
  }
  auto j = nlohmann::json::parse(internal::ReadWholeFile(file), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kMissingSummary, file.string() + " is not JSON");
  try {
    ComparisonRow r;
    r.label = j.value("label", std::string());
    if (r.label.empty()) r.label = dir.filename().string();
    if (r.label.empty()) r.label = dir.parent_path().filename().string();
    r.unique_crashes = j.at("unique_crashes").get<double>();
    r.unique_paths = j.at("unique_paths").get<double>();
    r.executions = j.at("executions").get<double>();
    r.max_generation = j.at("max_generation").get<double>();
    return r;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kMissingSummary, file.string() + ": " + e.what());
  }
}

inline ComparisonTable Compare(const std::vector<std::filesystem::path> &dirs) {
  if (dirs.size() < 2) throw Error(ErrorCode::kInvalidCount, "compare needs at least two runs");
  ComparisonTable t;
  for (const auto &d : dirs) t.rows.push_back(ReadSummaryRow(d));
  for (const auto &r : t.rows) {
    t.total.unique_crashes += r.unique_crashes;
    t.total.unique_paths += r.unique_paths;
    t.total.executions += r.executions;
    t.total.max_generation += r.max_generation;
  }
  const double n = static_cast<double>(t.rows.size());
  t.average = {"average", t.total.unique_crashes / n, t.total.unique_paths / n,
               t.total.executions / n, t.total.max_generation / n};
  return t;
}

namespace internal {

inline std::string FormatNumber(double v) {
  char buf[64];
  if (v == static_cast<double>(static_cast<int64_t>(v))) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", v);
  }
  return buf;
}

inline std::vector<std::vector<std::string>> TableCells(const ComparisonTable &t) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"strategy", "unique_crashes", "unique_paths", "executions", "max_generation"});
  auto add = [&](const ComparisonRow &r) {
    cells.push_back({r.label, FormatNumber(r.unique_crashes), FormatNumber(r.unique_paths),
                     FormatNumber(r.executions), FormatNumber(r.max_generation)});
  };
  for (const auto &r : t.rows) add(r);
  add(t.total);
  add(t.average);
  return cells;
}

}  // namespace internal

inline std::string ComparisonCsv(const ComparisonTable &t) {
  std::string out;
  for (const auto &row : internal::TableCells(t)) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

inline std::string ComparisonText(const ComparisonTable &t) {
  const auto cells = internal::TableCells(t);
  std::vector<size_t> width(cells.front().size(), 0);
  for (const auto &row : cells)
    for (size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  std::string out;
  for (size_t r = 0; r < cells.size(); ++r) {
    if (r == cells.size() - 2) {
      for (size_t i = 0; i < width.size(); ++i) out += std::string(width[i] + (i ? 2 : 0), '-');
      out += '\n';
    }
    for (size_t i = 0; i < cells[r].size(); ++i) {
      const auto &c = cells[r][i];
      if (i == 0) {
        out += c + std::string(width[i] - c.size(), ' ');
      } else {
        out += std::string(width[i] - c.size() + 2, ' ') + c;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace seedforge

#endif  // SEEDFORGE_REPORT_HPP_
