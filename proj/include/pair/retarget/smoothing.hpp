#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/core/matrix.hpp"

namespace pair {

/// Normalized Gaussian taps exp(-k^2 / (2 sigma^2)), k = -(size/2) .. size/2.
inline std::vector<double> gaussian_kernel(int size, double sigma) {
  require(size >= 1 && size % 2 == 1, "gaussian kernel size must be odd and >= 1");
  require(sigma > 0.0, "gaussian sigma must be > 0");
  const int half = size / 2;
  std::vector<double> w(static_cast<std::size_t>(size));
  double sum = 0.0;
  for (int k = -half; k <= half; ++k) {
    const double v = std::exp(-static_cast<double>(k * k) / (2.0 * sigma * sigma));
    w[static_cast<std::size_t>(k + half)] = v;
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

/// Per-column 1-D convolution along rows with edge replication at both ends.
inline Matrix gaussian_smooth(const Matrix& signal, int size = 5, double sigma = 0.75) {
  const auto w = gaussian_kernel(size, sigma);
  const int half = size / 2;
  const auto n = static_cast<long>(signal.rows());
  Matrix out(signal.rows(), signal.cols());
  for (long t = 0; t < n; ++t) {
    for (std::size_t c = 0; c < signal.cols(); ++c) {
      double acc = 0.0;
      for (int k = -half; k <= half; ++k) {
        const long src = std::clamp(t + k, 0L, n - 1);
        acc += w[static_cast<std::size_t>(k + half)] * signal(static_cast<std::size_t>(src), c);
      }
      out(static_cast<std::size_t>(t), c) = acc;
    }
  }
  return out;
}

}  // namespace pair
