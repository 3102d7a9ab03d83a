#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "pair/core/error.hpp"

namespace pair {

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers persist across calls to step();
/// a new instance starts from zero moments.
class Adam {
 public:
  Adam(std::size_t size, AdamParams params) : params_(params), m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> x, std::span<const double> grad) {
    require(x.size() == m_.size() && grad.size() == m_.size(), "adam: size mismatch");
    ++t_;
    const double c1 = 1.0 - std::pow(params_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(params_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < x.size(); ++i) {
      m_[i] = params_.beta1 * m_[i] + (1.0 - params_.beta1) * grad[i];
      v_[i] = params_.beta2 * v_[i] + (1.0 - params_.beta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      x[i] -= params_.lr * m_hat / (std::sqrt(v_hat) + params_.epsilon);
    }
  }

  long steps() const { return t_; }
  const AdamParams& params() const { return params_; }

 private:
  AdamParams params_;
  std::vector<double> m_;
  std::vector<double> v_;
  long t_ = 0;
};

}  // namespace pair
