#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "pair/ad/tape.hpp"
#include "pair/core/math.hpp"
#include "pair/kinematics/skeleton.hpp"

namespace pair {

template <typename T>
Mat3<T> skew(const Vec3<T>& k) {
  Mat3<T> r;
  r(0, 0) = T(0.0);
  r(0, 1) = -k.z;
  r(0, 2) = k.y;
  r(1, 0) = k.z;
  r(1, 1) = T(0.0);
  r(1, 2) = -k.x;
  r(2, 0) = -k.y;
  r(2, 1) = k.x;
  r(2, 2) = T(0.0);
  return r;
}

/// Rotation about a constant unit axis.
template <typename T>
Mat3<T> revolute_rotation(const Vec3d& axis, const T& angle) {
  using std::cos;
  using std::sin;
  const T s = sin(angle);
  const T c1 = T(1.0) - cos(angle);
  Mat3<T> r;
  const double a[3] = {axis.x, axis.y, axis.z};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // I + s [a]x + (1 - cos)(a a^T - I)
      const double outer = a[i] * a[j] - (i == j ? 1.0 : 0.0);
      double skew_ij = 0.0;
      if (i != j) {
        const int k = 3 - i - j;
        const double sign = ((i + 1) % 3 == j) ? -1.0 : 1.0;
        skew_ij = sign * a[k];
      }
      r(i, j) = (i == j ? T(1.0) : T(0.0)) + s * skew_ij + c1 * outer;
    }
  }
  return r;
}

/// Exponential map of an axis-angle vector (Rodrigues), smooth through zero.
template <typename T>
Mat3<T> axis_angle_rotation(const Vec3<T>& k) {
  const T s = k.x * k.x + k.y * k.y + k.z * k.z;
  const T a = sinc_of_squared(s);
  const T b = cosc_of_squared(s);
  // I + a [k]x + b (k k^T - s I)
  Mat3<T> r;
  r(0, 0) = T(1.0) + b * (k.x * k.x - s);
  r(1, 1) = T(1.0) + b * (k.y * k.y - s);
  r(2, 2) = T(1.0) + b * (k.z * k.z - s);
  const T bxy = b * (k.x * k.y);
  const T bxz = b * (k.x * k.z);
  const T byz = b * (k.y * k.z);
  const T ax = a * k.x;
  const T ay = a * k.y;
  const T az = a * k.z;
  r(0, 1) = bxy - az;
  r(1, 0) = bxy + az;
  r(0, 2) = bxz + ay;
  r(2, 0) = bxz - ay;
  r(1, 2) = byz - ax;
  r(2, 1) = byz + ax;
  return r;
}

/// Local rotation of joint `j` given the full parameter vector.
template <typename T>
Mat3<T> local_rotation(const Joint& joint, std::span<const T> params, int offset) {
  switch (joint.dof) {
    case DofType::kRevolute:
      return revolute_rotation<T>(joint.axis, params[static_cast<std::size_t>(offset)]);
    case DofType::kSpherical: {
      const auto o = static_cast<std::size_t>(offset);
      return axis_angle_rotation<T>(Vec3<T>(params[o], params[o + 1], params[o + 2]));
    }
    case DofType::kFixed:
      break;
  }
  return Mat3<T>::identity();
}

/// World-frame position and orientation of every joint.
template <typename T>
struct KinematicState {
  std::vector<Vec3<T>> positions;
  std::vector<Mat3<T>> rotations;
};

/// Forward kinematics over an arbitrary scalar. `root_quat` is (w, x, y, z)
/// and is normalized internally. `offset_scale`, when non-empty, multiplies
/// each joint's rest offset (used for morphology-scaled skeletons).
template <typename T>
KinematicState<T> forward_kinematics_state(const Skeleton& skeleton, const Vec3<T>& root_pos,
                                           const std::array<T, 4>& root_quat, std::span<const T> params,
                                           std::span<const T> offset_scale = {}) {
  require(params.size() == static_cast<std::size_t>(skeleton.dof_count()),
          "pose has " + std::to_string(params.size()) + " joint params, skeleton '" + skeleton.name() + "' expects " +
              std::to_string(skeleton.dof_count()));
  require(offset_scale.empty() || offset_scale.size() == static_cast<std::size_t>(skeleton.joint_count()),
          "offset scale size mismatch");
  const auto n = static_cast<std::size_t>(skeleton.joint_count());
  KinematicState<T> state;
  state.positions.resize(n);
  state.rotations.resize(n);
  const Mat3<T> root_rot = rotation_from_quat<T>(root_quat[0], root_quat[1], root_quat[2], root_quat[3]);
  for (std::size_t j = 0; j < n; ++j) {
    const Joint& joint = skeleton.joints()[j];
    const int offset = skeleton.param_offset(static_cast<int>(j));
    const Mat3<T>& parent_rot = joint.parent ? state.rotations[static_cast<std::size_t>(*joint.parent)] : root_rot;
    if (!joint.parent) {
      state.positions[j] = root_pos;
    } else {
      const Vec3d& o = joint.rest_offset;
      Vec3<T> bone(T(o.x), T(o.y), T(o.z));
      if (!offset_scale.empty()) {
        bone = bone * offset_scale[j];
      }
      state.positions[j] = state.positions[static_cast<std::size_t>(*joint.parent)] + parent_rot * bone;
    }
    if (joint.dof == DofType::kFixed) {
      state.rotations[j] = parent_rot;
    } else {
      state.rotations[j] = parent_rot * local_rotation<T>(joint, params, offset);
    }
  }
  return state;
}

template <typename T>
std::vector<Vec3<T>> forward_kinematics(const Skeleton& skeleton, const Vec3<T>& root_pos,
                                        const std::array<T, 4>& root_quat, std::span<const T> params,
                                        std::span<const T> offset_scale = {}) {
  return forward_kinematics_state<T>(skeleton, root_pos, root_quat, params, offset_scale).positions;
}

/// World-frame joint positions for one pose.
inline std::vector<Vec3d> forward_kinematics(const Skeleton& skeleton, const FramePose& pose,
                                             std::span<const double> offset_scale = {}) {
  const std::array<double, 4> q{pose.root_quat.w, pose.root_quat.x, pose.root_quat.y, pose.root_quat.z};
  return forward_kinematics<double>(skeleton, pose.root_pos, q, pose.joint_params, offset_scale);
}

/// Joint positions for every frame of a motion.
inline PositionSequence forward_kinematics(const Skeleton& skeleton, const MotionSequence& motion,
                                           std::span<const double> offset_scale = {}) {
  PositionSequence out(motion.size(), static_cast<std::size_t>(skeleton.joint_count()));
  for (std::size_t t = 0; t < motion.size(); ++t) {
    out.set_frame(t, forward_kinematics(skeleton, motion.frames[t], offset_scale));
  }
  return out;
}

}  // namespace pair
