/*
 * Copyright 2026 The shapbox Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/error.hpp"

namespace shapbox {
namespace {

[[noreturn]] void Ingestion(const std::string& message) {
  throw Error(ErrorCode::kIngestion, message);
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record. Handles double-quoted fields with "" escapes; fields
// spanning lines are not supported.
std::vector<std::string> SplitRecord(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(Trim(field));
  return fields;
}

double ParseCell(const std::string& cell, std::size_t line_no,
                 const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
    Ingestion("line " + std::to_string(line_no) + ", column '" + column +
              "': '" + cell + "' is not a finite number");
  }
  return value;
}

std::string ReadFile(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, std::string("cannot open ") + what + " " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void ApplyMetadata(const nlohmann::json& meta,
                   std::vector<std::string>& names,
                   std::optional<std::string>& label,
                   std::vector<FeatureInfo>& info) {
  if (!meta.is_object()) {
    throw Error(ErrorCode::kValidation, "metadata: expected a JSON object");
  }
  if (meta.contains("label")) {
    if (!meta["label"].is_string()) {
      throw Error(ErrorCode::kValidation, "metadata.label: expected a string");
    }
    label = meta["label"].get<std::string>();
  }
  info.assign(names.size(), FeatureInfo{});
  for (std::size_t j = 0; j < names.size(); ++j) info[j].display_name = names[j];
  if (!meta.contains("features")) return;
  const auto& features = meta["features"];
  if (!features.is_object()) {
    throw Error(ErrorCode::kValidation, "metadata.features: expected an object");
  }
  for (const auto& [name, spec] : features.items()) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw Error(ErrorCode::kValidation,
                  "metadata.features." + name + ": no such column");
    }
    FeatureInfo& fi = info[static_cast<std::size_t>(it - names.begin())];
    if (spec.contains("display_name")) {
      fi.display_name = spec["display_name"].get<std::string>();
    }
    if (spec.contains("categories")) {
      for (const auto& [code, text] : spec["categories"].items()) {
        std::int64_t value = 0;
        const auto [ptr, ec] =
            std::from_chars(code.data(), code.data() + code.size(), value);
        if (ec != std::errc() || ptr != code.data() + code.size()) {
          throw Error(ErrorCode::kValidation,
                      "metadata.features." + name + ".categories: code '" +
                          code + "' is not an integer");
        }
        fi.categories[value] = text.get<std::string>();
      }
    }
  }
}

double Median(std::vector<double> column) {
  const std::size_t n = column.size();
  const auto mid = column.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(column.begin(), mid, column.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(column.begin(), mid);
  return lower + (upper - lower) / 2.0;
}

}  // namespace

TabularDataset DatasetFromMatrix(Matrix rows,
                                 std::vector<std::string> feature_names) {
  if (rows.rows() == 0) Ingestion("dataset has no rows");
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      feature_names.push_back("f" + std::to_string(j));
    }
  }
  if (feature_names.size() != rows.cols()) {
    throw Error(ErrorCode::kShape, "dataset has " + std::to_string(rows.cols()) +
                                       " columns but " +
                                       std::to_string(feature_names.size()) +
                                       " names");
  }
  for (const double v : rows.data()) {
    if (!std::isfinite(v)) Ingestion("dataset contains a non-finite value");
  }
  TabularDataset ds;
  ds.feature_names = std::move(feature_names);
  ds.rows = std::move(rows);
  for (const auto& name : ds.feature_names) ds.features.push_back({name, {}});
  return ds;
}

TabularDataset ParseCsvDataset(const std::string& csv_text,
                               const std::optional<std::string>& metadata_json) {
  std::istringstream in(csv_text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!Trim(line).empty()) {
      header = SplitRecord(line);
      break;
    }
  }
  if (header.empty()) Ingestion("CSV has no header row");
  std::set<std::string> unique;
  for (const auto& name : header) {
    if (name.empty()) Ingestion("CSV header has an empty column name");
    if (!unique.insert(name).second) {
      Ingestion("CSV header repeats column '" + name + "'");
    }
  }

  std::optional<std::string> label;
  std::vector<FeatureInfo> info;
  std::vector<std::string> all_names = header;
  if (metadata_json.has_value()) {
    nlohmann::json meta;
    try {
      meta = nlohmann::json::parse(*metadata_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kValidation,
                  std::string("metadata is not valid JSON: ") + e.what());
    }
    ApplyMetadata(meta, all_names, label, info);
  } else {
    for (const auto& name : header) info.push_back({name, {}});
  }

  std::optional<std::size_t> label_col;
  if (label.has_value()) {
    const auto it = std::find(header.begin(), header.end(), *label);
    if (it == header.end()) {
      throw Error(ErrorCode::kValidation,
                  "metadata.label: no column named '" + *label + "'");
    }
    label_col = static_cast<std::size_t>(it - header.begin());
  }

  TabularDataset ds;
  ds.label_name = label;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (label_col && c == *label_col) continue;
    ds.feature_names.push_back(header[c]);
    ds.features.push_back(info[c]);
  }
  if (ds.feature_names.empty()) Ingestion("CSV has no feature columns");

  std::vector<double> values;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitRecord(line);
    if (fields.size() != header.size()) {
      Ingestion("line " + std::to_string(line_no) + " has " +
                std::to_string(fields.size()) + " fields, header has " +
                std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = ParseCell(fields[c], line_no, header[c]);
      if (label_col && c == *label_col) {
        ds.labels.push_back(v);
      } else {
        values.push_back(v);
      }
    }
    ++n;
  }
  if (n == 0) Ingestion("dataset has no rows");
  ds.rows = Matrix(n, ds.feature_names.size(), std::move(values));
  return ds;
}

TabularDataset LoadCsvDataset(const std::string& csv_path,
                              const std::optional<std::string>& metadata_path) {
  std::optional<std::string> meta;
  if (metadata_path.has_value()) meta = ReadFile(*metadata_path, "metadata file");
  return ParseCsvDataset(ReadFile(csv_path, "dataset"), meta);
}

Matrix SummarizeBackground(const TabularDataset& data,
                           const BackgroundSpec& spec) {
  const std::size_t n = data.num_rows();
  const std::size_t m = data.num_features();
  if (n == 0) Ingestion("cannot summarize an empty dataset");

  if (spec.mode == BackgroundMode::kMedian) {
    Matrix out(1, m);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) column[i] = data.rows(i, j);
      out(0, j) = Median(column);
    }
    return out;
  }

  if (spec.sample_size < 1 || spec.sample_size > n) {
    throw Error(ErrorCode::kConfig,
                "background sample size must be in [1, " + std::to_string(n) +
                    "], got " + std::to_string(spec.sample_size));
  }
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<std::size_t> chosen;
  chosen.reserve(spec.sample_size);
  std::mt19937_64 rng(spec.seed);
  std::sample(all.begin(), all.end(), std::back_inserter(chosen),
              spec.sample_size, rng);
  Matrix out(spec.sample_size, m);
  for (std::size_t r = 0; r < chosen.size(); ++r) {
    const auto src = data.rows.row(chosen[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace shapbox
