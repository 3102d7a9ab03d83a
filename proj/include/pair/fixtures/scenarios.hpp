#pragma once

// Synthetic interaction scenarios used by the test suites, the bundled
// fixture files and the CLI demos.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "pair/kinematics/forward_kinematics.hpp"
#include "pair/kinematics/presets.hpp"
#include "pair/kinematics/skeleton.hpp"

namespace pair::fixtures {

/// SMPL-topology humanoid 0.30 m shorter than the SMPL preset: legs x0.94,
/// torso x0.6, arms x0.8. Joint names match, so angles transfer directly.
inline Skeleton compact_humanoid_skeleton() {
  const Skeleton human = smpl_like_skeleton();
  std::vector<double> scale(static_cast<std::size_t>(human.joint_count()), 1.0);
  const std::map<std::string, double> by_name{
      {"L_Hip", 0.94},      {"R_Hip", 0.94},      {"L_Knee", 0.94},     {"R_Knee", 0.94},   {"L_Ankle", 0.94},
      {"R_Ankle", 0.94},    {"L_Foot", 0.94},     {"R_Foot", 0.94},     {"Spine1", 0.6},    {"Spine2", 0.6},
      {"Spine3", 0.6},      {"Neck", 0.6},        {"Head", 0.6},        {"L_Collar", 0.6},  {"R_Collar", 0.6},
      {"L_Shoulder", 0.8},  {"R_Shoulder", 0.8},  {"L_Elbow", 0.8},     {"R_Elbow", 0.8},   {"L_Wrist", 0.8},
      {"R_Wrist", 0.8},     {"L_Hand", 0.8},      {"R_Hand", 0.8}};
  for (const auto& [name, s] : by_name) scale[static_cast<std::size_t>(human.joint_index(name))] = s;
  return human.with_scaled_offsets(scale, "compact");
}

/// Standing height: head joint above the lowest foot joint in the zero pose.
inline double standing_height(const Skeleton& s) {
  const std::vector<double> zeros(static_cast<std::size_t>(s.dof_count()), 0.0);
  const auto p = forward_kinematics<double>(s, Vec3d{}, {1.0, 0.0, 0.0, 0.0}, zeros);
  double lowest = 0.0;
  for (const auto& v : p) lowest = std::min(lowest, v.z);
  return p[static_cast<std::size_t>(s.role_index(Role::kHead))].z - lowest;
}

/// Builds a frame of `skeleton` from named axis-angle joint rotations.
inline FramePose make_pose(const Skeleton& skeleton, Vec3d root_pos, double yaw,
                           const std::map<std::string, Vec3d>& rotations) {
  FramePose f;
  f.root_pos = root_pos;
  f.root_quat = quat_from_yaw(yaw);
  f.joint_params.assign(static_cast<std::size_t>(skeleton.dof_count()), 0.0);
  for (const auto& [name, aa] : rotations) {
    const int j = skeleton.joint_index(name);
    require(skeleton.joint(j).dof == DofType::kSpherical, "make_pose: joint '" + name + "' is not spherical");
    const auto o = static_cast<std::size_t>(skeleton.param_offset(j));
    f.joint_params[o] = aa.x;
    f.joint_params[o + 1] = aa.y;
    f.joint_params[o + 2] = aa.z;
  }
  return f;
}

/// Right arm pointing forward and raised by `elevation` (rad) from horizontal.
inline Vec3d right_arm_forward(double elevation) {
  return axis_angle_from_rotation(axis_rotation(1, -elevation) * axis_rotation(2, std::numbers::pi / 2.0));
}

/// Right arm hanging down.
inline Vec3d right_arm_down() { return {std::numbers::pi / 2.0, 0.0, 0.0}; }

/// Left arm hanging down.
inline Vec3d left_arm_down() { return {-std::numbers::pi / 2.0, 0.0, 0.0}; }

inline Vec3d lerp(const Vec3d& a, const Vec3d& b, double s) { return a + (b - a) * s; }

inline double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

struct InteractionScenario {
  Skeleton human;
  Skeleton robot;
  MotionSequence source;   // the human the robot replaces
  MotionSequence partner;  // the interaction partner
  std::size_t contact_begin = 0;  // labeled contact window [begin, end)
  std::size_t contact_end = 0;
};

/// Right-hand handshake between two SMPL humans facing each other.
///
/// The source raises its right arm forward, holds it with a slight pumping
/// motion during the contact window, then lowers it; the partner mirrors it
/// so the two right hands are 5 cm apart throughout the window. The robot is
/// the compact humanoid, so plain kinematic retargeting leaves its hand short
/// of the partner's.
inline InteractionScenario make_handshake_scenario(std::size_t frames = 100) {
  require(frames >= 20, "handshake scenario needs at least 20 frames");
  InteractionScenario sc;
  sc.human = smpl_like_skeleton();
  sc.robot = compact_humanoid_skeleton();
  sc.contact_begin = frames * 3 / 10;
  sc.contact_end = frames * 7 / 10;
  const double pelvis_height = 0.93;
  const double elevation = 0.35;

  // Partner root placed so the right hands sit 5 cm apart in the contact pose.
  const FramePose contact_pose =
      make_pose(sc.human, {0.0, 0.0, pelvis_height}, 0.0,
                {{"R_Shoulder", right_arm_forward(elevation)}, {"L_Shoulder", left_arm_down()}});
  const auto contact_fk = forward_kinematics(sc.human, contact_pose);
  const Vec3d hand = contact_fk[static_cast<std::size_t>(sc.human.role_index(Role::kRightHand))];
  const Vec3d local{hand.x, hand.y, hand.z - pelvis_height};
  const Vec3d partner_root{2.0 * local.x + 0.05, 2.0 * local.y, pelvis_height};

  const double fb = static_cast<double>(sc.contact_begin);
  const double fe = static_cast<double>(sc.contact_end);
  for (std::size_t t = 0; t < frames; ++t) {
    const double ft = static_cast<double>(t);
    double raise = 1.0;
    if (ft < fb) raise = smoothstep(ft / (fb - 1.0));
    if (ft >= fe) raise = 1.0 - smoothstep((ft - fe) / (static_cast<double>(frames) - 1.0 - fe));
    // Small pumping motion while the hands are joined.
    const double pump = (ft >= fb && ft < fe) ? 0.04 * std::sin(2.0 * std::numbers::pi * (ft - fb) / 20.0) : 0.0;
    const Vec3d arm = lerp(right_arm_down(), right_arm_forward(elevation + pump), raise);
    const std::map<std::string, Vec3d> rot{{"R_Shoulder", arm}, {"L_Shoulder", left_arm_down()}};
    sc.source.frames.push_back(make_pose(sc.human, {0.0, 0.0, pelvis_height}, 0.0, rot));
    sc.partner.frames.push_back(make_pose(sc.human, partner_root, std::numbers::pi, rot));
  }
  sc.source.skeleton_id = sc.human.name();
  sc.partner.skeleton_id = sc.human.name();
  return sc;
}

/// Gentle two-person motion where the robot skeleton is the human skeleton,
/// so the exact retargeting solution is the source motion itself. Every
/// contact threshold sees both labels. Angles
/// stay small and slow: the temporal and pose regularizers bias the optimum
/// in proportion to joint speed and magnitude.
inline InteractionScenario make_identity_scenario(std::size_t frames = 100) {
  require(frames >= 3, "identity scenario needs at least 3 frames");
  InteractionScenario sc;
  sc.human = smpl_like_skeleton();
  sc.robot = smpl_like_skeleton();
  sc.contact_begin = 0;
  sc.contact_end = frames;
  for (std::size_t t = 0; t < frames; ++t) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(frames);
    const double wobble = 0.05 * std::sin(phase);
    const std::map<std::string, Vec3d> src_rot{{"R_Shoulder", {0.3 + wobble, 0.0, 0.0}},
                                               {"L_Shoulder", {-0.3, 0.0, 0.0}},
                                               {"R_Elbow", {0.0, 0.0, 0.2 + wobble}}};
    const std::map<std::string, Vec3d> partner_rot{{"R_Shoulder", {0.3 - wobble, 0.0, 0.0}},
                                                   {"L_Shoulder", {-0.3, 0.0, 0.0}}};
    sc.source.frames.push_back(make_pose(sc.human, {0.0, 0.0, 0.93}, 0.0, src_rot));
    // The partner faces the source and steps in and back out through hand
    // gaps of about 0.64, 0.38, 0.225 and 0.1 m, each well clear of the
    // contact thresholds. Only joint positions matter here, so the bodies
    // are allowed to overlap.
    static constexpr std::array<double, 7> kGaps{0.64, 0.38, 0.225, 0.1, 0.225, 0.38, 0.64};
    const double gap = kGaps[t * kGaps.size() / frames];
    sc.partner.frames.push_back(make_pose(sc.human, {gap - 0.02, 0.0, 0.93}, std::numbers::pi, partner_rot));
  }
  sc.source.skeleton_id = sc.human.name();
  sc.partner.skeleton_id = sc.human.name();
  return sc;
}

}  // namespace pair::fixtures
