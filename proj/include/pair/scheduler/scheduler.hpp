#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/core/matrix.hpp"
#include "pair/kinematics/skeleton.hpp"

namespace pair {

// 36-D reference layout: 29 joint targets, root translation, root quaternion (w, x, y, z).
inline constexpr std::size_t kJointTargets = 29;
inline constexpr std::size_t kTranslationOffset = 29;
inline constexpr std::size_t kQuatOffset = 32;
inline constexpr std::size_t kReferenceDim = 36;

inline constexpr std::array<double, 5> kAnchorOffsets{0.0, 0.5, 1.0, 1.5, 2.0};
inline constexpr double kGridRate = 50.0;       // dense reference, Hz
inline constexpr std::size_t kDenseFrames = 100;  // 2 s at 50 Hz
inline constexpr std::size_t kFramesPerAnchor = 25;

using Reference = std::array<double, kReferenceDim>;

struct AnchorPlan {
  double call_time = 0.0;
  std::array<Reference, 5> anchors{};

  void validate() const {
    for (std::size_t k = 0; k < anchors.size(); ++k) {
      const auto& a = anchors[k];
      for (double v : a) require(std::isfinite(v), "anchor plan: non-finite value in anchor " + std::to_string(k));
      double n2 = 0.0;
      for (std::size_t i = kQuatOffset; i < kReferenceDim; ++i) n2 += a[i] * a[i];
      require(std::abs(std::sqrt(n2) - 1.0) <= 1e-6,
              "anchor plan: quaternion of anchor " + std::to_string(k) + " is not unit norm");
    }
  }
};

/// Dense 50 Hz reference segment; row i is at start_time + i / 50.
struct DenseTrajectory {
  double start_time = 0.0;
  Matrix frames;  // n x 36

  std::size_t size() const { return frames.rows(); }
  double end_time() const { return start_time + static_cast<double>(size() - 1) / kGridRate; }

  Reference frame(std::size_t i) const {
    Reference r{};
    std::copy(frames.row(i).begin(), frames.row(i).end(), r.begin());
    return r;
  }
};

namespace detail {

inline void normalize_quat(std::span<double> row) {
  double n2 = 0.0;
  for (std::size_t i = kQuatOffset; i < kReferenceDim; ++i) n2 += row[i] * row[i];
  const double n = std::sqrt(n2);
  require(n > 0.0, "scheduler: degenerate quaternion after interpolation");
  for (std::size_t i = kQuatOffset; i < kReferenceDim; ++i) row[i] /= n;
}

// a + s (b - a) reproduces a channel exactly wherever a == b.
inline void lerp_into(std::span<double> out, std::span<const double> a, std::span<const double> b, double s) {
  for (std::size_t i = 0; i < kReferenceDim; ++i) out[i] = a[i] + s * (b[i] - a[i]);
}

/// Linear blend with the quaternion renormalized, unless both ends share it.
inline void blend_into(std::span<double> out, std::span<const double> a, std::span<const double> b, double s) {
  lerp_into(out, a, b, s);
  if (!std::equal(a.begin() + kQuatOffset, a.end(), b.begin() + kQuatOffset)) normalize_quat(out);
}

}  // namespace detail

/// Plan value at `offset` seconds after the call time (0 to 2 s): per-channel
/// linear interpolation between the bracketing anchors, quaternion
/// renormalized. Exactly the anchor at anchor offsets.
inline Reference sample_plan(const AnchorPlan& plan, double offset) {
  require(offset >= 0.0 && offset <= kAnchorOffsets.back(), "sample_plan: offset outside [0, 2] s");
  const double pos = offset / 0.5;
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(pos), kAnchorOffsets.size() - 1);
  const double s = pos - static_cast<double>(k);
  Reference r = plan.anchors[k];
  if (s > 0.0) detail::blend_into(r, plan.anchors[k], plan.anchors[k + 1], s);
  return r;
}

/// 100-frame, 50 Hz reference over [t_k, t_k + 1.98] s. Frames 0, 25, 50 and
/// 75 coincide with anchors; the 2.0 s anchor lies one step past the grid.
inline DenseTrajectory densify(const AnchorPlan& plan) {
  plan.validate();
  DenseTrajectory d;
  d.start_time = plan.call_time;
  d.frames = Matrix(kDenseFrames, kReferenceDim);
  for (std::size_t i = 0; i < kDenseFrames; ++i) {
    const std::size_t k = i / kFramesPerAnchor;
    const std::size_t rem = i % kFramesPerAnchor;
    auto row = d.frames.row(i);
    if (rem == 0) {
      std::copy(plan.anchors[k].begin(), plan.anchors[k].end(), row.begin());
      continue;
    }
    const double s = static_cast<double>(rem) / static_cast<double>(kFramesPerAnchor);
    detail::blend_into(row, plan.anchors[k], plan.anchors[k + 1], s);
  }
  return d;
}

/// Grid offset of `next` relative to `prev`, in frames; rejects misaligned grids.
inline std::size_t grid_offset(const DenseTrajectory& prev, const DenseTrajectory& next) {
  const double steps = (next.start_time - prev.start_time) * kGridRate;
  const double rounded = std::round(steps);
  require(std::abs(steps - rounded) <= 1e-6, "fuse: trajectories are not on a shared 50 Hz grid");
  require(rounded >= 1.0, "fuse: next trajectory must start after the previous one");
  return static_cast<std::size_t>(rounded);
}

/// Fuses two overlapping segments. Over the shared grid the weight on `next`
/// ramps linearly from 0 at the first overlap frame to 1 at the last;
/// outside it each segment is taken as is. The result spans both segments.
inline DenseTrajectory fuse_overlaps(const DenseTrajectory& prev, const DenseTrajectory& next) {
  require(prev.frames.cols() == kReferenceDim && next.frames.cols() == kReferenceDim,
          "fuse: reference dimension must be 36");
  const std::size_t off = grid_offset(prev, next);
  require(off < prev.size(), "fuse: segments do not overlap");
  const std::size_t end = std::max(prev.size(), off + next.size());
  const std::size_t overlap_end = std::min(prev.size(), off + next.size());  // exclusive
  const std::size_t n = overlap_end - off;
  DenseTrajectory out;
  out.start_time = prev.start_time;
  out.frames = Matrix(end, kReferenceDim);
  for (std::size_t i = 0; i < end; ++i) {
    auto row = out.frames.row(i);
    if (i < off) {
      std::copy(prev.frames.row(i).begin(), prev.frames.row(i).end(), row.begin());
    } else if (i < overlap_end) {
      // A single shared frame is handed to the newer segment.
      const double w = n == 1 ? 1.0 : static_cast<double>(i - off) / static_cast<double>(n - 1);
      detail::blend_into(row, prev.frames.row(i), next.frames.row(i - off), w);
    } else if (i < prev.size()) {
      std::copy(prev.frames.row(i).begin(), prev.frames.row(i).end(), row.begin());
    } else {
      std::copy(next.frames.row(i - off).begin(), next.frames.row(i - off).end(), row.begin());
    }
  }
  return out;
}

struct HeldReference {
  Reference values{};
  bool tighten_root_velocity = false;
};

/// Reference at time `now`: the grid frame at or before `now` while the
/// segment covers it; past its end the last frame is held and the
/// root-velocity bounds are flagged for tightening.
inline HeldReference hold_on_timeout(const DenseTrajectory& last, double now) {
  require(last.size() > 0, "hold: empty trajectory");
  require(now >= last.start_time - 1e-9, "hold: time precedes the trajectory start");
  if (now > last.end_time() + 1e-9) return {last.frame(last.size() - 1), true};
  const auto i = static_cast<std::size_t>(std::floor((now - last.start_time) * kGridRate + 1e-9));
  return {last.frame(std::min(i, last.size() - 1)), false};
}

/// Densifies and fuses a sequence of plans in order.
inline DenseTrajectory replay(const std::vector<AnchorPlan>& plans) {
  require(!plans.empty(), "replay: no anchor plans");
  DenseTrajectory fused = densify(plans.front());
  for (std::size_t k = 1; k < plans.size(); ++k) fused = fuse_overlaps(fused, densify(plans[k]));
  return fused;
}

enum class Phase { kPreparation, kAct, kFollowUp };

/// Contiguous Preparation / Act / Follow-up split of an episode.
struct PhaseSegmentation {
  std::size_t preparation = 0;
  std::size_t act = 0;
  std::size_t follow_up = 0;

  std::size_t size() const { return preparation + act + follow_up; }

  static PhaseSegmentation from_labels(const std::vector<Phase>& labels) {
    PhaseSegmentation s;
    Phase last = Phase::kPreparation;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      require(static_cast<int>(labels[t]) >= static_cast<int>(last),
              "phase labels out of order at frame " + std::to_string(t));
      last = labels[t];
      switch (labels[t]) {
        case Phase::kPreparation:
          ++s.preparation;
          break;
        case Phase::kAct:
          ++s.act;
          break;
        case Phase::kFollowUp:
          ++s.follow_up;
          break;
      }
    }
    require(s.act >= 1, "phase labels: Act segment is empty");
    return s;
  }
};

inline constexpr std::size_t kPhaseRampFrames = 16;

/// Neutral upper-body posture by joint name.
using NeutralPose = std::map<std::string, double>;

/// Shoulders (pitch, roll, yaw) = (0, +-0.3, 0), elbows 1.0, wrists 0.
inline NeutralPose default_neutral_pose() {
  return {{"left_shoulder_pitch_link", 0.0},  {"left_shoulder_roll_link", 0.3},   {"left_shoulder_yaw_link", 0.0},
          {"left_elbow_link", 1.0},           {"left_wrist_roll_link", 0.0},      {"left_wrist_pitch_link", 0.0},
          {"left_wrist_yaw_link", 0.0},       {"right_shoulder_pitch_link", 0.0}, {"right_shoulder_roll_link", -0.3},
          {"right_shoulder_yaw_link", 0.0},   {"right_elbow_link", 1.0},          {"right_wrist_roll_link", 0.0},
          {"right_wrist_pitch_link", 0.0},    {"right_wrist_yaw_link", 0.0}};
}

/// Standardizes an episode for deployment. Act is copied unchanged.
/// Preparation keeps its root and lower body, holds the neutral upper body
/// and ramps over its last 16 frames (weight (k+1)/16) into Act's first frame.
/// Follow-up freezes root and lower body at Act's last frame while the upper
/// body ramps back to neutral over 16 frames and then holds. Segments shorter
/// than 16 frames ramp over their full length.
inline MotionSequence standardize_phases(const Skeleton& skeleton, const MotionSequence& motion,
                                         const PhaseSegmentation& seg,
                                         const NeutralPose& neutral = default_neutral_pose()) {
  validate_motion(skeleton, motion);
  require(seg.size() == motion.size(), "standardize: segmentation length does not match the motion");
  require(seg.act >= 1, "standardize: Act segment is empty");
  std::vector<std::pair<std::size_t, double>> upper;  // (param index, neutral value)
  for (const auto& [name, value] : neutral) {
    const int j = skeleton.joint_index(name);
    require(pair::dof_count(skeleton.joint(j).dof) == 1, "standardize: neutral joint '" + name + "' is not revolute");
    upper.emplace_back(static_cast<std::size_t>(skeleton.param_offset(j)), value);
  }
  MotionSequence out = motion;
  const std::size_t act_begin = seg.preparation;
  const std::size_t act_end = seg.preparation + seg.act;
  const FramePose& act_first = motion.frames[act_begin];
  const FramePose& act_last = motion.frames[act_end - 1];

  const std::size_t prep_ramp = std::min(kPhaseRampFrames, seg.preparation);
  for (std::size_t t = 0; t < seg.preparation; ++t) {
    auto& q = out.frames[t].joint_params;
    const std::size_t ramp_start = seg.preparation - prep_ramp;
    const double alpha =
        t < ramp_start ? 0.0 : static_cast<double>(t - ramp_start + 1) / static_cast<double>(prep_ramp);
    for (const auto& [i, v] : upper) q[i] = (1.0 - alpha) * v + alpha * act_first.joint_params[i];
  }

  const std::size_t follow_ramp = std::min(kPhaseRampFrames, seg.follow_up);
  for (std::size_t f = 0; f < seg.follow_up; ++f) {
    FramePose& p = out.frames[act_end + f];
    p = act_last;
    const double alpha = f < follow_ramp ? static_cast<double>(f + 1) / static_cast<double>(follow_ramp) : 1.0;
    for (const auto& [i, v] : upper) p.joint_params[i] = (1.0 - alpha) * act_last.joint_params[i] + alpha * v;
  }
  return out;
}

inline constexpr double kApproachSpeed = 0.2;  // m/s
inline constexpr double kBrakeSpeed = -0.2;    // m/s
inline constexpr double kArrivalRadius = 0.15;  // m
inline constexpr double kStopSpeed = 0.1;      // m/s

/// Root speed command from distance-to-go: approach, brake with a reverse
/// command while still moving inside the arrival radius, then stop.
inline double root_velocity_command(double residual_dist, double current_speed) {
  if (residual_dist > kArrivalRadius) return kApproachSpeed;
  if (current_speed >= kStopSpeed) return kBrakeSpeed;
  return 0.0;
}

}  // namespace pair
