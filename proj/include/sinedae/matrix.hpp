// Copyright 2026 The sinedae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SINEDAE_MATRIX_HPP_
#define SINEDAE_MATRIX_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "sinedae/common.hpp"

namespace sinedae {

// Dense row-major matrix of doubles. Signals ride along as 1xN matrices so
// the tape needs a single value type. Internal numerics are double
// precision throughout; audio I/O stays single precision.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  Matrix(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {}

  static Matrix Zeros(int r, int c) { return Matrix(r, c); }

  static Matrix RowVector(std::vector<double> d) {
    const int n = static_cast<int>(d.size());
    return Matrix(1, n, std::move(d));
  }

  double& At(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double At(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  double* Row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* Row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  std::size_t Size() const { return data.size(); }
  bool SameShape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  bool AllFinite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double MaxAbsDiff(const Matrix& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double d = std::fabs(data[i] - o.data[i]);
      if (d > m) m = d;
    }
    return m;
  }
};

inline void CheckSameShape(const Matrix& a, const Matrix& b, const char* what) {
  if (!a.SameShape(b)) throw DimensionError(std::string("shape mismatch in ") + what);
}

}  // namespace sinedae

#endif  // SINEDAE_MATRIX_HPP_
