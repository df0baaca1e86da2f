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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mvspec {

/// Raised when array shapes or index sets do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input files; `row()` is the 1-based line number (0 if unknown).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : std::runtime_error(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// Zero-based coordinate permutation used when stacking a row.
using Permutation = std::vector<std::size_t>;

Permutation identity_order(std::size_t d);

/// Throws DimensionError unless `order` is a permutation of 0..d-1.
void validate_order(const Permutation& order, std::size_t d);

/// Parses a one-based, comma separated list such as "2,1".
Permutation parse_order(std::string_view text, std::size_t d);

/// Renders a permutation back in the one-based "2,1" form.
std::string format_order(const Permutation& order);

/// T x d observation matrix; rows are time-ordered, all entries finite.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  explicit SeriesMatrix(Eigen::MatrixXd values);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  double operator()(std::size_t t, std::size_t l) const {
    return values_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(l));
  }
  Eigen::VectorXd row(std::size_t t) const {
    return values_.row(static_cast<Eigen::Index>(t)).transpose();
  }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// Rows [first, rows()).
  SeriesMatrix tail_from(std::size_t first) const;

 private:
  Eigen::MatrixXd values_;
};

/// The univariate sequence obtained by reading each row in `order`.
struct StackedSeries {
  std::vector<double> z;
  Permutation order;
  std::size_t d = 0;
};

/// z[t*d + l] = Y(t, order[l]).
StackedSeries stack(const SeriesMatrix& series, const Permutation& order);

/// Inverse of stack() for the given order (identity when empty).
SeriesMatrix unstack(std::span<const double> z, std::size_t d,
                     const Permutation& order = {});

/// Estimated PITs; construction rejects non-finite input and clamps to [0,1].
class PitSequence {
 public:
  PitSequence() = default;
  explicit PitSequence(std::vector<double> u);

  std::size_t size() const noexcept { return u_.size(); }
  bool empty() const noexcept { return u_.empty(); }
  double operator[](std::size_t k) const { return u_[k]; }
  std::span<const double> values() const noexcept { return u_; }
  operator std::span<const double>() const noexcept { return u_; }

 private:
  std::vector<double> u_;
};

/// Comma separated numeric table. A first row containing any non-numeric
/// field is taken as a header. Empty or non-numeric cells elsewhere are errors.
SeriesMatrix read_csv(std::istream& in);
SeriesMatrix read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const SeriesMatrix& series,
               const std::vector<std::string>& header = {});

}  // namespace mvspec
