// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace pk {

// Dense cubic rank-3 array with all extents equal to the chart dimension.
struct Tensor3 {
  int n = 0;
  std::vector<double> data;

  Tensor3() = default;
  explicit Tensor3(int dim)
      : n(dim), data(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  double& operator()(int i, int j, int k) {
    return data[(static_cast<std::size_t>(i) * n + j) * n + k];
  }
  double operator()(int i, int j, int k) const {
    return data[(static_cast<std::size_t>(i) * n + j) * n + k];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

// Dense rank-4 array with all extents equal to the chart dimension.
struct Tensor4 {
  int n = 0;
  std::vector<double> data;

  Tensor4() = default;
  explicit Tensor4(int dim)
      : n(dim), data(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  double& operator()(int i, int j, int k, int l) {
    return data[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return data[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::abs(v));
    return m;
  }
};

}  // namespace pk
