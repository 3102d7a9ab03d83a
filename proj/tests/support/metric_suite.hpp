#pragma once

// Random retargeted pairs scored by full_report and by the oracles.

#include <algorithm>
#include <cmath>
#include <random>

#include "pair/kinematics/forward_kinematics.hpp"
#include "pair/kinematics/presets.hpp"
#include "pair/metrics/metrics.hpp"
#include "support/oracles.hpp"

namespace support {

using namespace pair;

inline MotionSequence random_motion(const Skeleton& s, std::mt19937_64& rng, std::size_t frames, Vec3d base,
                                    double yaw) {
  MotionSequence m;
  m.skeleton_id = s.name();
  const auto limits = s.flat_limits();
  for (std::size_t t = 0; t < frames; ++t) {
    FramePose f;
    f.root_pos = base + oracle::random_point(rng, -0.1, 0.1);
    f.root_quat = quat_from_yaw(yaw + oracle::uniform(rng, -0.2, 0.2));
    for (const auto& l : limits) f.joint_params.push_back(std::clamp(oracle::uniform(rng, -1.2, 1.2), l.min, l.max));
    m.frames.push_back(std::move(f));
  }
  return m;
}

struct MetricComparison {
  double max_abs_error = 0.0;  // over every real-valued metric
  bool rates_exact = true;     // confusion counts and rates bit-equal
  bool any_positive = false;   // at least one ground-truth contact was seen
};

/// Builds one random pair from `seed` and compares full_report with the oracles.
inline MetricComparison compare_random_report(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Skeleton human = smpl_like_skeleton();
  const Skeleton robot = g1_like_skeleton();
  const std::size_t frames = 6 + seed % 7;
  const double gap = oracle::uniform(rng, 0.6, 1.2);
  const MotionSequence source = random_motion(human, rng, frames, {0.0, 0.0, 0.9}, 0.0);
  const MotionSequence partner = random_motion(human, rng, frames, {gap, 0.0, 0.9}, std::numbers::pi);
  const MotionSequence robot_motion = random_motion(robot, rng, frames, {0.0, 0.0, 0.75}, 0.0);
  const MotionSequence adjusted = random_motion(human, rng, frames, {gap, 0.0, 0.9}, std::numbers::pi);
  std::vector<double> scale(static_cast<std::size_t>(human.joint_count()));
  for (double& s : scale) s = oracle::uniform(rng, 0.7, 1.1);
  const std::vector<double> taus{0.2, 0.35, 0.5, oracle::uniform(rng, 0.1, 0.9)};

  EvaluationInput in;
  in.human = &human;
  in.robot = &robot;
  in.source = forward_kinematics(human, source);
  in.partner = forward_kinematics(human, partner);
  in.robot_positions = forward_kinematics(robot, robot_motion);
  in.partner_adjusted = forward_kinematics(human, adjusted);
  in.reshaped = forward_kinematics(human, source, scale);
  in.robot_params = joint_param_matrix(robot_motion);
  in.correspondence = default_correspondence();
  const MetricsReport r = full_report(in, taus);

  // Oracle side, from the oracle FK throughout.
  const auto src = oracle::fk(human, source);
  const auto par = oracle::fk(human, partner);
  const auto rob = oracle::fk(robot, robot_motion);
  const auto adj = oracle::fk(human, adjusted);
  const auto resh = oracle::fk(human, source, scale);
  auto pick = [](const PositionSequence& p, const Skeleton& s, const std::vector<Role>& roles) {
    PositionSequence out(p.frames(), roles.size());
    for (std::size_t t = 0; t < p.frames(); ++t) {
      for (std::size_t k = 0; k < roles.size(); ++k) out.at(t, k) = p.at(t, static_cast<std::size_t>(s.role_index(roles[k])));
    }
    return out;
  };
  std::vector<Role> corr_roles;
  for (const auto& [h, rr] : default_correspondence()) corr_roles.push_back(h);
  const std::vector<Role> ws{Role::kHead,      Role::kLeftShoulder, Role::kRightShoulder, Role::kLeftElbow,
                             Role::kRightElbow, Role::kLeftWrist,    Role::kRightWrist};
  MetricComparison out;
  auto compare = [&out](double a, double b) { out.max_abs_error = std::max(out.max_abs_error, std::abs(a - b)); };
  compare(r.jpe, oracle::jpe(pick(rob, robot, corr_roles), pick(resh, human, corr_roles)));
  compare(r.awd, oracle::awd(pick(par, human, ws), pick(src, human, ws), pick(adj, human, ws), pick(rob, robot, ws)));
  auto hands = [&](const PositionSequence& p, const Skeleton& s, Role role) {
    return p.track(static_cast<std::size_t>(s.role_index(role)));
  };
  for (std::size_t k = 0; k < taus.size(); ++k) {
    const auto gt = oracle::contacts(hands(par, human, Role::kLeftHand), hands(par, human, Role::kRightHand),
                                     hands(src, human, Role::kLeftHand), hands(src, human, Role::kRightHand), taus[k]);
    const auto pred = oracle::contacts(hands(adj, human, Role::kLeftHand), hands(adj, human, Role::kRightHand),
                                       hands(rob, robot, Role::kLeftHand), hands(rob, robot, Role::kRightHand), taus[k]);
    const oracle::Scores o = oracle::scores(gt, pred);
    const ContactScores& c = r.contact[k].scores;
    out.any_positive = out.any_positive || o.tp + o.fn > 0;
    out.rates_exact = out.rates_exact && r.contact[k].tau == taus[k] && static_cast<long>(c.tp) == o.tp &&
                      static_cast<long>(c.fp) == o.fp && static_cast<long>(c.fn) == o.fn &&
                      static_cast<long>(c.tn) == o.tn && c.precision == o.precision && c.recall == o.recall &&
                      c.f1 == o.f1 && c.accuracy == o.accuracy;
  }
  const auto [large, spread] = oracle::plausibility(joint_param_matrix(robot_motion));
  out.rates_exact = out.rates_exact && r.large_angle_ratio == large;
  compare(r.angle_std, spread);
  const auto [jm, js] = oracle::jerk(rob, kProtocolFps);
  // Jerk is O(fps^3); compare relative to its scale.
  compare(r.jerk_mean / std::max(1.0, jm), jm / std::max(1.0, jm));
  compare(r.jerk_std / std::max(1.0, js), js / std::max(1.0, js));
  return out;
}

}  // namespace support
