#pragma once

// Built-in skeletons: a 24-joint SMPL-proportioned human with spherical
// joints, and a 29-DoF Unitree-G1-proportioned humanoid. Both are authored in
// a T-pose at zero parameters (z up, x forward, y left) so rest-pose bone
// vectors line up for morphology fitting.

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pair/kinematics/skeleton.hpp"

namespace pair {

/// Role pairs (source role, target role) used for morphology fitting and the
/// kinematic similarity term. Mirrors the 16-joint robot/human table.
inline std::vector<std::pair<Role, Role>> default_correspondence() {
  const std::array<Role, 16> roles{Role::kRoot,      Role::kLeftHip,      Role::kLeftKnee,      Role::kLeftAnkle,
                                   Role::kRightHip,  Role::kRightKnee,    Role::kRightAnkle,    Role::kLeftShoulder,
                                   Role::kLeftElbow, Role::kLeftHand,     Role::kRightShoulder, Role::kRightElbow,
                                   Role::kRightHand, Role::kHead,         Role::kLeftToe,       Role::kRightToe};
  std::vector<std::pair<Role, Role>> out;
  out.reserve(roles.size());
  for (Role r : roles) out.emplace_back(r, r);
  return out;
}

namespace detail {

class SkeletonBuilder {
 public:
  explicit SkeletonBuilder(std::string name) : name_(std::move(name)) {}

  SkeletonBuilder& root(const std::string& joint, DofType dof = DofType::kFixed) {
    joints_.push_back({joint, std::nullopt, Vec3d{}, dof, Vec3d{0, 0, 1}, {}});
    return *this;
  }

  SkeletonBuilder& spherical(const std::string& joint, const std::string& parent, Vec3d offset,
                             double limit = 3.14159) {
    joints_.push_back({joint, index(parent), offset, DofType::kSpherical, Vec3d{0, 0, 1},
                       std::vector<JointLimit>(3, JointLimit{-limit, limit})});
    return *this;
  }

  SkeletonBuilder& revolute(const std::string& joint, const std::string& parent, Vec3d offset, Vec3d axis, double lo,
                            double hi) {
    joints_.push_back({joint, index(parent), offset, DofType::kRevolute, axis, {JointLimit{lo, hi}}});
    return *this;
  }

  SkeletonBuilder& fixed(const std::string& joint, const std::string& parent, Vec3d offset) {
    joints_.push_back({joint, index(parent), offset, DofType::kFixed, Vec3d{0, 0, 1}, {}});
    return *this;
  }

  SkeletonBuilder& role(Role r, const std::string& joint) {
    roles_[r] = index(joint);
    return *this;
  }

  Skeleton build() { return Skeleton(name_, joints_, roles_); }

 private:
  int index(const std::string& joint) const {
    for (std::size_t i = 0; i < joints_.size(); ++i) {
      if (joints_[i].name == joint) return static_cast<int>(i);
    }
    throw InputError("builder: unknown joint '" + joint + "'");
  }

  std::string name_;
  std::vector<Joint> joints_;
  std::map<Role, int> roles_;
};

}  // namespace detail

/// SMPL-topology human, ~1.70 m tall, T-pose at zero.
inline Skeleton smpl_like_skeleton() {
  detail::SkeletonBuilder b("smpl");
  b.root("Pelvis")
      .spherical("L_Hip", "Pelvis", {0.0, 0.09, -0.09})
      .spherical("R_Hip", "Pelvis", {0.0, -0.09, -0.09})
      .spherical("Spine1", "Pelvis", {-0.01, 0.0, 0.11})
      .spherical("L_Knee", "L_Hip", {0.0, 0.0, -0.38})
      .spherical("R_Knee", "R_Hip", {0.0, 0.0, -0.38})
      .spherical("Spine2", "Spine1", {0.0, 0.0, 0.13})
      .spherical("L_Ankle", "L_Knee", {0.0, 0.0, -0.40})
      .spherical("R_Ankle", "R_Knee", {0.0, 0.0, -0.40})
      .spherical("Spine3", "Spine2", {0.0, 0.0, 0.05})
      .fixed("L_Foot", "L_Ankle", {0.12, 0.0, -0.06})
      .fixed("R_Foot", "R_Ankle", {0.12, 0.0, -0.06})
      .spherical("Neck", "Spine3", {0.0, 0.0, 0.22})
      .spherical("L_Collar", "Spine3", {0.0, 0.07, 0.14})
      .spherical("R_Collar", "Spine3", {0.0, -0.07, 0.14})
      .spherical("Head", "Neck", {0.02, 0.0, 0.10})
      .spherical("L_Shoulder", "L_Collar", {0.0, 0.11, 0.03})
      .spherical("R_Shoulder", "R_Collar", {0.0, -0.11, 0.03})
      .spherical("L_Elbow", "L_Shoulder", {0.0, 0.26, 0.0})
      .spherical("R_Elbow", "R_Shoulder", {0.0, -0.26, 0.0})
      .spherical("L_Wrist", "L_Elbow", {0.0, 0.25, 0.0})
      .spherical("R_Wrist", "R_Elbow", {0.0, -0.25, 0.0})
      .fixed("L_Hand", "L_Wrist", {0.0, 0.08, 0.0})
      .fixed("R_Hand", "R_Wrist", {0.0, -0.08, 0.0});
  b.role(Role::kRoot, "Pelvis")
      .role(Role::kHead, "Head")
      .role(Role::kTorso, "Spine3")
      .role(Role::kLeftShoulder, "L_Shoulder")
      .role(Role::kRightShoulder, "R_Shoulder")
      .role(Role::kLeftElbow, "L_Elbow")
      .role(Role::kRightElbow, "R_Elbow")
      .role(Role::kLeftWrist, "L_Wrist")
      .role(Role::kRightWrist, "R_Wrist")
      .role(Role::kLeftHand, "L_Hand")
      .role(Role::kRightHand, "R_Hand")
      .role(Role::kLeftHip, "L_Hip")
      .role(Role::kRightHip, "R_Hip")
      .role(Role::kLeftKnee, "L_Knee")
      .role(Role::kRightKnee, "R_Knee")
      .role(Role::kLeftAnkle, "L_Ankle")
      .role(Role::kRightAnkle, "R_Ankle")
      .role(Role::kLeftToe, "L_Foot")
      .role(Role::kRightToe, "R_Foot");
  return b.build();
}

/// Humanoid with the G1 29-DoF joint layout and approximate link offsets.
/// Arms are authored horizontally so the zero configuration is a T-pose.
inline Skeleton g1_like_skeleton() {
  const Vec3d ax{1, 0, 0};
  const Vec3d ay{0, 1, 0};
  const Vec3d az{0, 0, 1};
  detail::SkeletonBuilder b("g1");
  b.root("pelvis");
  for (const int side : {1, -1}) {
    const std::string p = side > 0 ? "left_" : "right_";
    const double s = side;
    const double roll_lo = side > 0 ? -0.5236 : -2.9671;
    const double roll_hi = side > 0 ? 2.9671 : 0.5236;
    b.revolute(p + "hip_pitch_link", "pelvis", {0.0, s * 0.064, -0.103}, ay, -2.5307, 2.8798)
        .revolute(p + "hip_roll_link", p + "hip_pitch_link", {0.0, s * 0.052, -0.030}, ax, roll_lo, roll_hi)
        .revolute(p + "hip_yaw_link", p + "hip_roll_link", {0.025, 0.0, -0.124}, az, -2.7576, 2.7576)
        .revolute(p + "knee_link", p + "hip_yaw_link", {-0.078, s * 0.002, -0.177}, ay, -0.087267, 2.8798)
        .revolute(p + "ankle_pitch_link", p + "knee_link", {0.0, -s * 0.010, -0.300}, ay, -0.87267, 0.5236)
        .revolute(p + "ankle_roll_link", p + "ankle_pitch_link", {0.0, 0.0, -0.017}, ax, -0.2618, 0.2618)
        .fixed(p + "toe_link", p + "ankle_roll_link", {0.12, 0.0, -0.03});
  }
  b.revolute("waist_yaw_link", "pelvis", {0.0, 0.0, 0.0}, az, -2.618, 2.618)
      .revolute("waist_roll_link", "waist_yaw_link", {-0.004, 0.0, 0.044}, ax, -0.52, 0.52)
      .revolute("torso_link", "waist_roll_link", {0.0, 0.0, 0.0}, ay, -0.52, 0.52)
      .fixed("head_link", "torso_link", {0.0, 0.0, 0.43});
  for (const int side : {1, -1}) {
    const std::string p = side > 0 ? "left_" : "right_";
    const double s = side;
    const double roll_lo = side > 0 ? -1.5882 : -2.2515;
    const double roll_hi = side > 0 ? 2.2515 : 1.5882;
    b.revolute(p + "shoulder_pitch_link", "torso_link", {0.004, s * 0.100, 0.238}, az, -3.0892, 2.6704)
        .revolute(p + "shoulder_roll_link", p + "shoulder_pitch_link", {0.0, s * 0.038, -0.014}, ax, roll_lo, roll_hi)
        .revolute(p + "shoulder_yaw_link", p + "shoulder_roll_link", {0.0, s * 0.080, 0.0}, ay, -2.618, 2.618)
        .revolute(p + "elbow_link", p + "shoulder_yaw_link", {0.0, s * 0.100, 0.0}, az, -1.0472, 2.0944)
        .revolute(p + "wrist_roll_link", p + "elbow_link", {0.0, s * 0.100, 0.0}, ay, -1.9722, 1.9722)
        .revolute(p + "wrist_pitch_link", p + "wrist_roll_link", {0.0, s * 0.038, 0.0}, ax, -1.6144, 1.6144)
        .revolute(p + "wrist_yaw_link", p + "wrist_pitch_link", {0.0, s * 0.046, 0.0}, az, -1.6144, 1.6144)
        .fixed(p + "hand_link", p + "wrist_yaw_link", {0.0, s * 0.080, 0.0});
  }
  b.role(Role::kRoot, "pelvis")
      .role(Role::kHead, "head_link")
      .role(Role::kTorso, "torso_link")
      .role(Role::kLeftShoulder, "left_shoulder_roll_link")
      .role(Role::kRightShoulder, "right_shoulder_roll_link")
      .role(Role::kLeftElbow, "left_elbow_link")
      .role(Role::kRightElbow, "right_elbow_link")
      .role(Role::kLeftWrist, "left_wrist_roll_link")
      .role(Role::kRightWrist, "right_wrist_roll_link")
      .role(Role::kLeftHand, "left_hand_link")
      .role(Role::kRightHand, "right_hand_link")
      .role(Role::kLeftHip, "left_hip_pitch_link")
      .role(Role::kRightHip, "right_hip_pitch_link")
      .role(Role::kLeftKnee, "left_knee_link")
      .role(Role::kRightKnee, "right_knee_link")
      .role(Role::kLeftAnkle, "left_ankle_roll_link")
      .role(Role::kRightAnkle, "right_ankle_roll_link")
      .role(Role::kLeftToe, "left_toe_link")
      .role(Role::kRightToe, "right_toe_link");
  return b.build();
}

/// Looks up a built-in skeleton by name ("smpl" or "g1").
inline Skeleton preset_skeleton(const std::string& name) {
  if (name == "smpl") return smpl_like_skeleton();
  if (name == "g1") return g1_like_skeleton();
  throw InputError("unknown skeleton preset '" + name + "'");
}

}  // namespace pair
