#pragma once

#include <cmath>
#include <vector>

#include "pair/ad/tape.hpp"
#include "pair/core/error.hpp"
#include "pair/core/math.hpp"
#include "pair/core/matrix.hpp"
#include "pair/kinematics/skeleton.hpp"

namespace pair {

/// Euclidean distance that stays differentiable when both points coincide
/// (the subgradient 0 is used there).
template <typename T>
T point_distance(const Vec3<T>& a, const Vec3<T>& b) {
  using std::sqrt;
  const T s = squared_norm(a - b);
  if (value_of(s) == 0.0) {
    return T(0.0);
  }
  return sqrt(s);
}

/// Kinematic similarity: mean squared L2 distance over frames and joints.
inline double loss_kin(const PositionSequence& robot, const PositionSequence& reshaped) {
  require(robot.frames() == reshaped.frames() && robot.joints() == reshaped.joints(), "loss_kin: shape mismatch");
  require(robot.frames() > 0 && robot.joints() > 0, "loss_kin: empty input");
  double total = 0.0;
  for (std::size_t t = 0; t < robot.frames(); ++t) {
    for (std::size_t j = 0; j < robot.joints(); ++j) total += squared_norm(robot.at(t, j) - reshaped.at(t, j));
  }
  return total / static_cast<double>(robot.frames() * robot.joints());
}

/// Symmetric N x N matrix of pairwise Euclidean distances.
inline Matrix pairwise_distance_matrix(const std::vector<Vec3d>& points) {
  require(points.size() >= 2, "pairwise_distance_matrix: need at least two points");
  const std::size_t n = points.size();
  Matrix d(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = distance(points[i], points[j]);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

/// Contact consistency: time-mean of squared Frobenius norms of the
/// differences between optimized and original distance matrices.
inline double loss_con(const std::vector<Matrix>& opt, const std::vector<Matrix>& orig) {
  require(opt.size() == orig.size() && !opt.empty(), "loss_con: frame count mismatch");
  double total = 0.0;
  for (std::size_t t = 0; t < opt.size(); ++t) {
    require(opt[t].rows() == orig[t].rows() && opt[t].cols() == orig[t].cols(), "loss_con: matrix shape mismatch");
    for (std::size_t k = 0; k < opt[t].data().size(); ++k) total += square(opt[t].data()[k] - orig[t].data()[k]);
  }
  return total / static_cast<double>(opt.size());
}

/// Partner fidelity: time-mean of summed squared deviations of the
/// upper-arm joints.
inline double loss_hum(const PositionSequence& adjusted, const PositionSequence& original) {
  require(adjusted.frames() == original.frames() && adjusted.joints() == original.joints(),
          "loss_hum: shape mismatch");
  require(adjusted.frames() > 0, "loss_hum: empty input");
  double total = 0.0;
  for (std::size_t t = 0; t < adjusted.frames(); ++t) {
    for (std::size_t j = 0; j < adjusted.joints(); ++j) total += squared_norm(adjusted.at(t, j) - original.at(t, j));
  }
  return total / static_cast<double>(adjusted.frames());
}

/// Temporal coherence over a T x D joint trajectory:
/// mean_t ||q_{t+1} - q_t||^2 + w_a * mean_t ||q_{t+1} - 2 q_t + q_{t-1}||^2.
inline double loss_temp(const Matrix& q, double w_a) {
  require(q.rows() >= 3, "loss_temp: need at least 3 frames for the acceleration term");
  const std::size_t n = q.rows();
  double vel = 0.0;
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t d = 0; d < q.cols(); ++d) vel += square(q(t + 1, d) - q(t, d));
  }
  for (std::size_t t = 1; t + 1 < n; ++t) {
    for (std::size_t d = 0; d < q.cols(); ++d) acc += square(q(t + 1, d) - 2.0 * q(t, d) + q(t - 1, d));
  }
  return vel / static_cast<double>(n - 1) + w_a * acc / static_cast<double>(n - 2);
}

/// Adds d loss_temp / dq, scaled by `weight`, into `grad` (same shape as q).
inline void accumulate_loss_temp_gradient(const Matrix& q, double w_a, double weight, Matrix& grad) {
  const std::size_t n = q.rows();
  const double cv = weight * 2.0 / static_cast<double>(n - 1);
  const double ca = weight * w_a * 2.0 / static_cast<double>(n - 2);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t d = 0; d < q.cols(); ++d) {
      const double v = cv * (q(t + 1, d) - q(t, d));
      grad(t + 1, d) += v;
      grad(t, d) -= v;
    }
  }
  for (std::size_t t = 1; t + 1 < n; ++t) {
    for (std::size_t d = 0; d < q.cols(); ++d) {
      const double a = ca * (q(t + 1, d) - 2.0 * q(t, d) + q(t - 1, d));
      grad(t + 1, d) += a;
      grad(t, d) -= 2.0 * a;
      grad(t - 1, d) += a;
    }
  }
}

/// Pose regularization: mean of squared joint angles.
inline double loss_pose(const Matrix& q) {
  require(q.rows() > 0 && q.cols() > 0, "loss_pose: empty input");
  double total = 0.0;
  for (double v : q.data()) total += v * v;
  return total / static_cast<double>(q.data().size());
}

inline void accumulate_loss_pose_gradient(const Matrix& q, double weight, Matrix& grad) {
  const double c = weight * 2.0 / static_cast<double>(q.data().size());
  for (std::size_t k = 0; k < q.data().size(); ++k) grad.data()[k] += c * q.data()[k];
}

}  // namespace pair
