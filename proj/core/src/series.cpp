// Copyright 2026 The mvspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mvspec/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mvspec {

Permutation identity_order(std::size_t d) {
  Permutation order(d);
  for (std::size_t l = 0; l < d; ++l) order[l] = l;
  return order;
}

void validate_order(const Permutation& order, std::size_t d) {
  if (order.size() != d) {
    throw DimensionError("order has " + std::to_string(order.size()) +
                         " entries, series has " + std::to_string(d) +
                         " columns");
  }
  std::vector<bool> seen(d, false);
  for (std::size_t idx : order) {
    if (idx >= d || seen[idx]) {
      throw DimensionError("order is not a permutation of 1.." +
                           std::to_string(d));
    }
    seen[idx] = true;
  }
}

Permutation parse_order(std::string_view text, std::size_t d) {
  Permutation order;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view token = text.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
      throw DimensionError("invalid order entry '" + std::string(token) + "'");
    }
    order.push_back(value - 1);
    pos = comma + 1;
  }
  validate_order(order, d);
  return order;
}

std::string format_order(const Permutation& order) {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(order[i] + 1);
  }
  return out;
}

SeriesMatrix::SeriesMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DimensionError("series must have at least one row and one column");
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("series contains non-finite values");
  }
}

SeriesMatrix SeriesMatrix::tail_from(std::size_t first) const {
  if (first >= rows()) throw DimensionError("tail_from past end of series");
  const auto n = static_cast<Eigen::Index>(rows() - first);
  return SeriesMatrix(values_.bottomRows(n));
}

StackedSeries stack(const SeriesMatrix& series, const Permutation& order) {
  const std::size_t d = series.cols();
  validate_order(order, d);
  StackedSeries out;
  out.d = d;
  out.order = order;
  out.z.resize(series.rows() * d);
  for (std::size_t t = 0; t < series.rows(); ++t) {
    for (std::size_t l = 0; l < d; ++l) out.z[t * d + l] = series(t, order[l]);
  }
  return out;
}

SeriesMatrix unstack(std::span<const double> z, std::size_t d,
                     const Permutation& order) {
  if (d == 0 || z.size() % d != 0 || z.empty()) {
    throw DimensionError("stacked length " + std::to_string(z.size()) +
                         " is not a positive multiple of " + std::to_string(d));
  }
  const Permutation ord = order.empty() ? identity_order(d) : order;
  validate_order(ord, d);
  const std::size_t rows = z.size() / d;
  Eigen::MatrixXd values(rows, d);
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t l = 0; l < d; ++l) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(ord[l])) =
          z[t * d + l];
    }
  }
  return SeriesMatrix(std::move(values));
}

PitSequence::PitSequence(std::vector<double> u) : u_(std::move(u)) {
  for (double& v : u_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite PIT value");
    v = std::clamp(v, 0.0, 1.0);
  }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma == std::string_view::npos
                                          ? std::string_view::npos
                                          : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_number(std::string_view field, double& value) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  return ec == std::errc() && ptr == field.data() + field.size() && std::isfinite(value);
}

}  // namespace

SeriesMatrix read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      numeric = numeric && parse_number(fields[i], values[i]);
    }
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) continue;  // header row
    }
    if (fields.size() != width) {
      throw ParseError("row " + std::to_string(line_no) + " has " +
                           std::to_string(fields.size()) + " fields, expected " +
                           std::to_string(width),
                       line_no);
    }
    if (!numeric) {
      throw ParseError("row " + std::to_string(line_no) +
                           " contains a missing or non-numeric value",
                       line_no);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows", line_no);
  Eigen::MatrixXd values(rows.size(), width);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    for (std::size_t l = 0; l < width; ++l) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l)) = rows[t][l];
    }
  }
  return SeriesMatrix(std::move(values));
}

SeriesMatrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  return read_csv(in);
}

void write_csv(std::ostream& out, const SeriesMatrix& series,
               const std::vector<std::string>& header) {
  if (!header.empty()) {
    for (std::size_t l = 0; l < header.size(); ++l) out << (l ? "," : "") << header[l];
    out << '\n';
  }
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t t = 0; t < series.rows(); ++t) {
    for (std::size_t l = 0; l < series.cols(); ++l) {
      out << (l ? "," : "") << series(t, l);
    }
    out << '\n';
  }
  out.precision(precision);
}

}  // namespace mvspec
