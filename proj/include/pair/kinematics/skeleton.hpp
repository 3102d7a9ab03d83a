#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/core/math.hpp"

namespace pair {

enum class DofType { kFixed, kRevolute, kSpherical };

inline int dof_count(DofType t) {
  switch (t) {
    case DofType::kFixed:
      return 0;
    case DofType::kRevolute:
      return 1;
    case DofType::kSpherical:
      return 3;
  }
  return 0;
}

inline std::string_view to_string(DofType t) {
  switch (t) {
    case DofType::kFixed:
      return "fixed";
    case DofType::kRevolute:
      return "revolute";
    case DofType::kSpherical:
      return "spherical";
  }
  return "fixed";
}

inline DofType dof_type_from_string(std::string_view s) {
  if (s == "fixed") return DofType::kFixed;
  if (s == "revolute") return DofType::kRevolute;
  if (s == "spherical") return DofType::kSpherical;
  throw InputError("unknown dof type '" + std::string(s) + "'");
}

/// Semantic keypoint roles shared by losses, metrics and detectors.
enum class Role {
  kRoot,
  kHead,
  kLeftShoulder,
  kRightShoulder,
  kLeftElbow,
  kRightElbow,
  kLeftWrist,
  kRightWrist,
  kLeftHand,
  kRightHand,
  kLeftHip,
  kRightHip,
  kLeftKnee,
  kRightKnee,
  kLeftAnkle,
  kRightAnkle,
  kLeftToe,
  kRightToe,
  kTorso,
};

inline constexpr std::array<std::pair<Role, std::string_view>, 19> kRoleNames{{
    {Role::kRoot, "root"},
    {Role::kHead, "head"},
    {Role::kLeftShoulder, "left_shoulder"},
    {Role::kRightShoulder, "right_shoulder"},
    {Role::kLeftElbow, "left_elbow"},
    {Role::kRightElbow, "right_elbow"},
    {Role::kLeftWrist, "left_wrist"},
    {Role::kRightWrist, "right_wrist"},
    {Role::kLeftHand, "left_hand"},
    {Role::kRightHand, "right_hand"},
    {Role::kLeftHip, "left_hip"},
    {Role::kRightHip, "right_hip"},
    {Role::kLeftKnee, "left_knee"},
    {Role::kRightKnee, "right_knee"},
    {Role::kLeftAnkle, "left_ankle"},
    {Role::kRightAnkle, "right_ankle"},
    {Role::kLeftToe, "left_toe"},
    {Role::kRightToe, "right_toe"},
    {Role::kTorso, "torso"},
}};

inline std::string_view to_string(Role r) {
  for (const auto& [role, name] : kRoleNames) {
    if (role == r) return name;
  }
  return "?";
}

inline Role role_from_string(std::string_view s) {
  for (const auto& [role, name] : kRoleNames) {
    if (name == s) return role;
  }
  throw InputError("unknown role '" + std::string(s) + "'");
}

/// Roles every skeleton must provide: detectors and losses rely on them.
inline constexpr std::array<Role, 10> kRequiredRoles{
    Role::kRoot,      Role::kHead,      Role::kLeftShoulder, Role::kRightShoulder, Role::kLeftElbow,
    Role::kRightElbow, Role::kLeftWrist, Role::kRightWrist,   Role::kLeftHand,      Role::kRightHand};

struct JointLimit {
  double min = -std::numbers::pi;
  double max = std::numbers::pi;
};

struct Joint {
  std::string name;
  std::optional<int> parent;  // empty for the root
  Vec3d rest_offset;          // in the parent's frame, meters
  DofType dof = DofType::kFixed;
  Vec3d axis{0.0, 0.0, 1.0};  // revolute only
  std::vector<JointLimit> limits;
};

/// Rooted kinematic tree, topologically ordered (parent index < child index).
class Skeleton {
 public:
  Skeleton() = default;

  Skeleton(std::string name, std::vector<Joint> joints, std::map<Role, int> roles)
      : name_(std::move(name)), joints_(std::move(joints)), roles_(std::move(roles)) {
    for (auto& j : joints_) {
      if (j.limits.empty()) {
        j.limits.assign(static_cast<std::size_t>(pair::dof_count(j.dof)), JointLimit{});
      }
    }
    validate();
    int offset = 0;
    param_offsets_.reserve(joints_.size());
    for (const auto& j : joints_) {
      param_offsets_.push_back(offset);
      offset += pair::dof_count(j.dof);
    }
    dof_count_ = offset;
  }

  const std::string& name() const { return name_; }
  const std::vector<Joint>& joints() const { return joints_; }
  const Joint& joint(int i) const { return joints_.at(static_cast<std::size_t>(i)); }
  int joint_count() const { return static_cast<int>(joints_.size()); }
  int dof_count() const { return dof_count_; }
  int param_offset(int joint) const { return param_offsets_.at(static_cast<std::size_t>(joint)); }
  const std::map<Role, int>& roles() const { return roles_; }

  bool has_role(Role r) const { return roles_.count(r) != 0; }

  int role_index(Role r) const {
    const auto it = roles_.find(r);
    if (it == roles_.end()) {
      throw InputError("skeleton '" + name_ + "' has no joint for role '" + std::string(to_string(r)) + "'");
    }
    return it->second;
  }

  std::optional<int> find_joint(std::string_view joint_name) const {
    for (int i = 0; i < joint_count(); ++i) {
      if (joints_[static_cast<std::size_t>(i)].name == joint_name) return i;
    }
    return std::nullopt;
  }

  int joint_index(std::string_view joint_name) const {
    auto i = find_joint(joint_name);
    if (!i) {
      throw InputError("skeleton '" + name_ + "' has no joint '" + std::string(joint_name) + "'");
    }
    return *i;
  }

  /// Limits flattened in parameter order.
  std::vector<JointLimit> flat_limits() const {
    std::vector<JointLimit> out;
    out.reserve(static_cast<std::size_t>(dof_count_));
    for (const auto& j : joints_) {
      out.insert(out.end(), j.limits.begin(), j.limits.end());
    }
    return out;
  }

  /// Same topology and joint parameterization, bone lengths scaled per joint.
  Skeleton with_scaled_offsets(const std::vector<double>& per_joint_scale, std::string new_name) const {
    require(per_joint_scale.size() == joints_.size(), "per-joint scale size mismatch");
    auto joints = joints_;
    for (std::size_t i = 0; i < joints.size(); ++i) {
      joints[i].rest_offset = joints[i].rest_offset * per_joint_scale[i];
    }
    return Skeleton(std::move(new_name), std::move(joints), roles_);
  }

 private:
  void validate() const {
    require(!joints_.empty(), "skeleton '" + name_ + "' has no joints");
    int roots = 0;
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      const auto& j = joints_[i];
      if (!j.parent) {
        ++roots;
        require(i == 0, "skeleton '" + name_ + "': root must be the first joint");
      } else {
        require(*j.parent >= 0 && static_cast<std::size_t>(*j.parent) < i,
                "skeleton '" + name_ + "': joint '" + j.name + "' parent index must precede it");
      }
      if (j.dof == DofType::kRevolute) {
        require(std::abs(norm(j.axis) - 1.0) <= 1e-9,
                "skeleton '" + name_ + "': revolute axis of '" + j.name + "' is not unit length");
      }
      require(j.limits.size() == static_cast<std::size_t>(pair::dof_count(j.dof)),
              "skeleton '" + name_ + "': joint '" + j.name + "' limit count does not match its dof");
      for (const auto& l : j.limits) {
        require(l.min <= l.max, "skeleton '" + name_ + "': joint '" + j.name + "' has min > max limit");
      }
    }
    require(roots == 1, "skeleton '" + name_ + "' must have exactly one root");
    for (const auto& [role, index] : roles_) {
      require(index >= 0 && static_cast<std::size_t>(index) < joints_.size(),
              "skeleton '" + name_ + "': role '" + std::string(to_string(role)) + "' maps to an invalid joint");
    }
    for (Role r : kRequiredRoles) {
      require(roles_.count(r) != 0,
              "skeleton '" + name_ + "' is missing required role '" + std::string(to_string(r)) + "'");
    }
  }

  std::string name_;
  std::vector<Joint> joints_;
  std::map<Role, int> roles_;
  std::vector<int> param_offsets_;
  int dof_count_ = 0;
};

struct FramePose {
  Vec3d root_pos;
  Quat root_quat;
  std::vector<double> joint_params;
};

inline constexpr double kProtocolFps = 50.0;

struct MotionSequence {
  double fps = kProtocolFps;
  std::string skeleton_id;
  std::vector<FramePose> frames;

  std::size_t size() const { return frames.size(); }
};

inline void validate_pose(const Skeleton& skeleton, const FramePose& pose) {
  require(pose.joint_params.size() == static_cast<std::size_t>(skeleton.dof_count()),
          "pose has " + std::to_string(pose.joint_params.size()) + " joint params, skeleton '" + skeleton.name() +
              "' expects " + std::to_string(skeleton.dof_count()));
  require(std::abs(pose.root_quat.norm() - 1.0) <= 1e-6, "root quaternion is not unit norm");
}

inline void validate_motion(const Skeleton& skeleton, const MotionSequence& motion) {
  require(!motion.frames.empty(), "motion has no frames");
  for (std::size_t t = 0; t < motion.frames.size(); ++t) {
    try {
      validate_pose(skeleton, motion.frames[t]);
    } catch (const InputError& e) {
      throw InputError("frame " + std::to_string(t) + ": " + e.what());
    }
  }
}

/// T x J x 3 joint position tensor.
class PositionSequence {
 public:
  PositionSequence() = default;
  PositionSequence(std::size_t frames, std::size_t joints) : frames_(frames), joints_(joints), data_(frames * joints) {}

  std::size_t frames() const { return frames_; }
  std::size_t joints() const { return joints_; }

  Vec3d& at(std::size_t t, std::size_t j) { return data_[t * joints_ + j]; }
  const Vec3d& at(std::size_t t, std::size_t j) const { return data_[t * joints_ + j]; }

  std::vector<Vec3d> frame(std::size_t t) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(t * joints_),
            data_.begin() + static_cast<std::ptrdiff_t>((t + 1) * joints_)};
  }

  void set_frame(std::size_t t, const std::vector<Vec3d>& p) {
    require(p.size() == joints_, "frame joint count mismatch");
    std::copy(p.begin(), p.end(), data_.begin() + static_cast<std::ptrdiff_t>(t * joints_));
  }

  /// T x 1 track of a single joint.
  std::vector<Vec3d> track(std::size_t j) const {
    std::vector<Vec3d> out(frames_);
    for (std::size_t t = 0; t < frames_; ++t) out[t] = at(t, j);
    return out;
  }

  /// Columns `joints` in the given order.
  PositionSequence select(const std::vector<int>& joints) const {
    PositionSequence out(frames_, joints.size());
    for (std::size_t t = 0; t < frames_; ++t) {
      for (std::size_t k = 0; k < joints.size(); ++k) {
        out.at(t, k) = at(t, static_cast<std::size_t>(joints[k]));
      }
    }
    return out;
  }

 private:
  std::size_t frames_ = 0;
  std::size_t joints_ = 0;
  std::vector<Vec3d> data_;
};

}  // namespace pair
