#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/core/math.hpp"
#include "pair/core/matrix.hpp"
#include "pair/kinematics/skeleton.hpp"
#include "pair/retarget/losses.hpp"

namespace pair {

inline constexpr std::array<double, 3> kContactThresholds{0.2, 0.35, 0.5};

/// Joints whose pairwise distances define the interaction workspace.
inline std::vector<Role> interaction_roles() {
  return {Role::kHead,      Role::kLeftShoulder, Role::kRightShoulder, Role::kLeftElbow,
          Role::kRightElbow, Role::kLeftWrist,   Role::kRightWrist};
}

/// Mean over frames and joints of the L2 distance between matching joints.
inline double compute_jpe(const PositionSequence& a, const PositionSequence& b) {
  require(a.frames() == b.frames() && a.joints() == b.joints(), "jpe: shape mismatch");
  require(a.frames() > 0 && a.joints() > 0, "jpe: empty input");
  double sum = 0.0;
  for (std::size_t t = 0; t < a.frames(); ++t) {
    for (std::size_t j = 0; j < a.joints(); ++j) sum += distance(a.at(t, j), b.at(t, j));
  }
  return sum / static_cast<double>(a.frames() * a.joints());
}

/// JPE of robot joints against their corresponding reshaped-human joints.
inline double compute_jpe(const Skeleton& robot, const PositionSequence& robot_positions, const Skeleton& human,
                          const PositionSequence& reshaped, const std::vector<std::pair<Role, Role>>& correspondence) {
  std::vector<int> robot_joints;
  std::vector<int> human_joints;
  for (const auto& [h, r] : correspondence) {
    human_joints.push_back(human.role_index(h));
    robot_joints.push_back(robot.role_index(r));
  }
  return compute_jpe(robot_positions.select(robot_joints), reshaped.select(human_joints));
}

/// Keypoint tracks of the two agents of an interaction, each T x K.
struct PairKeypoints {
  PositionSequence first;
  PositionSequence second;
};

inline PairKeypoints pair_keypoints(const Skeleton& first_skeleton, const PositionSequence& first,
                                    const Skeleton& second_skeleton, const PositionSequence& second,
                                    const std::vector<Role>& roles = interaction_roles()) {
  std::vector<int> a;
  std::vector<int> b;
  for (Role r : roles) {
    a.push_back(first_skeleton.role_index(r));
    b.push_back(second_skeleton.role_index(r));
  }
  return {first.select(a), second.select(b)};
}

/// Average workspace distance: time-mean of the mean absolute entrywise
/// difference between the full pairwise distance matrices of both agents'
/// keypoints (within- and cross-agent blocks).
inline double compute_awd(const PairKeypoints& original, const PairKeypoints& retargeted) {
  const std::size_t frames = original.first.frames();
  require(frames > 0, "awd: empty input");
  for (const auto* p : {&original.second, &retargeted.first, &retargeted.second}) {
    require(p->frames() == frames, "awd: frame count mismatch");
  }
  require(original.first.joints() == retargeted.first.joints() &&
              original.second.joints() == retargeted.second.joints(),
          "awd: keypoint count mismatch");
  auto stacked = [](const PairKeypoints& p, std::size_t t) {
    std::vector<Vec3d> pts = p.first.frame(t);
    const auto b = p.second.frame(t);
    pts.insert(pts.end(), b.begin(), b.end());
    return pts;
  };
  double total = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    const Matrix d0 = pairwise_distance_matrix(stacked(original, t));
    const Matrix d1 = pairwise_distance_matrix(stacked(retargeted, t));
    const std::size_t n = d0.rows();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sum += std::abs(d1(i, j) - d0(i, j));
    }
    total += sum / static_cast<double>(n * n);
  }
  return total / static_cast<double>(frames);
}

/// Left and right hand tracks of one agent.
struct HandTracks {
  std::vector<Vec3d> left;
  std::vector<Vec3d> right;
};

inline HandTracks hand_tracks(const Skeleton& skeleton, const PositionSequence& positions) {
  return {positions.track(static_cast<std::size_t>(skeleton.role_index(Role::kLeftHand))),
          positions.track(static_cast<std::size_t>(skeleton.role_index(Role::kRightHand)))};
}

using ContactLabels = std::vector<std::array<bool, 2>>;

/// Per-frame contact labels for the two hand-hand pairs. The matching
/// {(L,L),(R,R)} or {(L,R),(R,L)} with the smaller summed distance is used
/// (ties keep the straight matching); the closer matched pair is reported
/// first, so labels do not depend on left/right naming.
inline ContactLabels classify_contacts(const HandTracks& a, const HandTracks& b, double tau) {
  const std::size_t frames = a.left.size();
  require(a.right.size() == frames && b.left.size() == frames && b.right.size() == frames,
          "classify_contacts: hand track length mismatch");
  ContactLabels out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double ll = distance(a.left[t], b.left[t]);
    const double rr = distance(a.right[t], b.right[t]);
    const double lr = distance(a.left[t], b.right[t]);
    const double rl = distance(a.right[t], b.left[t]);
    double d0 = ll;
    double d1 = rr;
    if (lr + rl < ll + rr) {
      d0 = lr;
      d1 = rl;
    }
    if (d1 < d0) std::swap(d0, d1);
    out[t] = {d0 <= tau, d1 <= tau};
  }
  return out;
}

struct ContactScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// Micro-averaged scores over all frame x pair decisions. With no predicted
/// positives precision is 1 if there are also no missed contacts, else 0;
/// recall is defined symmetrically.
inline ContactScores contact_metrics(const ContactLabels& gt, const ContactLabels& pred) {
  require(gt.size() == pred.size(), "contact_metrics: label length mismatch");
  require(!gt.empty(), "contact_metrics: empty labels");
  ContactScores s;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    for (std::size_t k = 0; k < 2; ++k) {
      if (gt[t][k] && pred[t][k]) ++s.tp;
      if (!gt[t][k] && pred[t][k]) ++s.fp;
      if (gt[t][k] && !pred[t][k]) ++s.fn;
      if (!gt[t][k] && !pred[t][k]) ++s.tn;
    }
  }
  const auto tp = static_cast<double>(s.tp);
  if (s.tp + s.fp == 0) {
    s.precision = s.fn == 0 ? 1.0 : 0.0;
  } else {
    s.precision = tp / static_cast<double>(s.tp + s.fp);
  }
  if (s.tp + s.fn == 0) {
    s.recall = s.fp == 0 ? 1.0 : 0.0;
  } else {
    s.recall = tp / static_cast<double>(s.tp + s.fn);
  }
  s.f1 = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  s.accuracy = static_cast<double>(s.tp + s.tn) / static_cast<double>(2 * gt.size());
  return s;
}

struct Plausibility {
  double large_angle_ratio = 0.0;
  double angle_std = 0.0;
};

/// T x D matrix of a motion's joint parameters.
inline Matrix joint_param_matrix(const MotionSequence& m) {
  require(!m.frames.empty(), "joint_param_matrix: empty motion");
  const std::size_t d = m.frames.front().joint_params.size();
  Matrix out(m.frames.size(), d);
  for (std::size_t t = 0; t < m.frames.size(); ++t) {
    require(m.frames[t].joint_params.size() == d, "joint_param_matrix: ragged joint parameters");
    for (std::size_t k = 0; k < d; ++k) out(t, k) = m.frames[t].joint_params[k];
  }
  return out;
}

inline constexpr double kLargeAngle = 0.5;

/// Fraction of |q| entries above 0.5 rad and the population standard
/// deviation of |q| over all entries.
inline Plausibility plausibility(const Matrix& joint_params) {
  const std::size_t n = joint_params.rows() * joint_params.cols();
  require(n > 0, "plausibility: empty joint parameter matrix");
  std::size_t large = 0;
  double sum = 0.0;
  for (double q : joint_params.data()) {
    const double a = std::abs(q);
    if (a > kLargeAngle) ++large;
    sum += a;
  }
  const double mean = sum / static_cast<double>(n);
  double var = 0.0;
  for (double q : joint_params.data()) var += square(std::abs(q) - mean);
  return {static_cast<double>(large) / static_cast<double>(n), std::sqrt(var / static_cast<double>(n))};
}

struct JerkStats {
  double mean = 0.0;
  double std = 0.0;
};

/// Third-order finite-difference jerk magnitudes over every (frame, joint),
/// in m/s^3.
inline JerkStats jerk_stats(const PositionSequence& positions, double fps = kProtocolFps) {
  require(positions.frames() >= 4, "jerk: need at least 4 frames");
  require(fps > 0.0, "jerk: fps must be positive");
  const double scale = fps * fps * fps;
  std::vector<double> mags;
  mags.reserve((positions.frames() - 3) * positions.joints());
  for (std::size_t t = 0; t + 3 < positions.frames(); ++t) {
    for (std::size_t j = 0; j < positions.joints(); ++j) {
      const Vec3d d = positions.at(t + 3, j) - positions.at(t + 2, j) * 3.0 + positions.at(t + 1, j) * 3.0 -
                      positions.at(t, j);
      mags.push_back(norm(d) * scale);
    }
  }
  double sum = 0.0;
  for (double m : mags) sum += m;
  const double mean = sum / static_cast<double>(mags.size());
  double var = 0.0;
  for (double m : mags) var += square(m - mean);
  return {mean, std::sqrt(var / static_cast<double>(mags.size()))};
}

struct ThresholdScores {
  double tau = 0.0;
  ContactScores scores;
};

struct MetricsReport {
  double jpe = 0.0;
  double awd = 0.0;
  std::vector<ThresholdScores> contact;
  double large_angle_ratio = 0.0;
  double angle_std = 0.0;
  double jerk_mean = 0.0;
  double jerk_std = 0.0;
};

/// Everything needed to score one retargeted pair against its source pair.
struct EvaluationInput {
  const Skeleton* human = nullptr;
  const Skeleton* robot = nullptr;
  PositionSequence source;            // H_s, the human the robot replaced
  PositionSequence partner;           // H_p as recorded
  PositionSequence robot_positions;   // M_R
  PositionSequence partner_adjusted;  // M'_{H_p}
  PositionSequence reshaped;          // Reshaped(H_s)
  Matrix robot_params;                // T x D
  std::vector<std::pair<Role, Role>> correspondence;  // (human, robot)
  double fps = kProtocolFps;
};

inline MetricsReport full_report(const EvaluationInput& in, const std::vector<double>& thresholds = {
                                                                 kContactThresholds.begin(), kContactThresholds.end()}) {
  require(in.human != nullptr && in.robot != nullptr, "metrics: skeletons not set");
  const Skeleton& human = *in.human;
  const Skeleton& robot = *in.robot;
  MetricsReport r;
  r.jpe = compute_jpe(robot, in.robot_positions, human, in.reshaped, in.correspondence);
  r.awd = compute_awd(pair_keypoints(human, in.partner, human, in.source),
                      pair_keypoints(human, in.partner_adjusted, robot, in.robot_positions));
  const HandTracks partner_hands = hand_tracks(human, in.partner);
  const HandTracks source_hands = hand_tracks(human, in.source);
  const HandTracks adjusted_hands = hand_tracks(human, in.partner_adjusted);
  const HandTracks robot_hands = hand_tracks(robot, in.robot_positions);
  for (double tau : thresholds) {
    require(tau > 0.0, "metrics: contact threshold must be positive");
    const ContactLabels gt = classify_contacts(partner_hands, source_hands, tau);
    const ContactLabels pred = classify_contacts(adjusted_hands, robot_hands, tau);
    r.contact.push_back({tau, contact_metrics(gt, pred)});
  }
  const Plausibility p = plausibility(in.robot_params);
  r.large_angle_ratio = p.large_angle_ratio;
  r.angle_std = p.angle_std;
  const JerkStats j = jerk_stats(in.robot_positions, in.fps);
  r.jerk_mean = j.mean;
  r.jerk_std = j.std;
  return r;
}

}  // namespace pair
