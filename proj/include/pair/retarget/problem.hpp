#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pair/ad/tape.hpp"
#include "pair/core/matrix.hpp"
#include "pair/kinematics/forward_kinematics.hpp"
#include "pair/kinematics/presets.hpp"
#include "pair/kinematics/skeleton.hpp"
#include "pair/retarget/config.hpp"
#include "pair/retarget/losses.hpp"

namespace pair {

/// One retargeting instance: the source human H_s is replaced by the robot,
/// the partner H_p may adjust its upper arms.
struct RetargetProblem {
  Skeleton robot;
  Skeleton human;           // shared by source and partner
  MotionSequence source;    // H_s
  MotionSequence partner;   // H_p
  PositionSequence reshaped;  // T x J_human, from reshape_motion
  std::vector<std::pair<Role, Role>> correspondence = default_correspondence();  // (human, robot)
  std::vector<std::pair<Role, Role>> task_keypoints{{Role::kLeftHand, Role::kLeftHand},
                                                    {Role::kRightHand, Role::kRightHand}};  // (partner, robot)
};

struct LossBreakdown {
  double total = 0.0;
  double kin = 0.0;
  double con = 0.0;
  double hum = 0.0;
  double temp = 0.0;
  double pose = 0.0;
};

/// Flat decision vector layout, frame-major:
/// [robot joint params (D) | root position (3) | root quaternion wxyz (4) | partner upper-arm params (P)].
struct StateLayout {
  std::size_t frames = 0;
  std::size_t robot_dof = 0;
  std::size_t partner_dof = 0;

  std::size_t stride() const { return robot_dof + 7 + partner_dof; }
  std::size_t size() const { return frames * stride(); }
  std::size_t robot(std::size_t t) const { return t * stride(); }
  std::size_t root_pos(std::size_t t) const { return t * stride() + robot_dof; }
  std::size_t root_quat(std::size_t t) const { return t * stride() + robot_dof + 3; }
  std::size_t partner(std::size_t t) const { return t * stride() + robot_dof + 7; }
};

/// Composite retargeting objective with exact first-order gradients.
///
/// The per-frame terms (kinematic, contact and partner fidelity) go through
/// a reverse-mode tape over forward kinematics; the temporal and pose
/// regularizers have closed-form gradients.
class RetargetObjective {
 public:
  RetargetObjective(RetargetProblem problem, const RetargetConfig& config)
      : problem_(std::move(problem)), w_a_(config.w_a) {
    const auto& p = problem_;
    require(p.source.size() == p.partner.size(), "retarget: source and partner frame counts differ");
    require(p.source.size() >= 3, "retarget: need at least 3 frames");
    require(p.source.fps == p.partner.fps, "retarget: source and partner fps differ");
    require(std::abs(p.source.fps - kProtocolFps) < 1e-9, "retarget: sequences must be sampled at 50 fps");
    validate_motion(p.human, p.source);
    validate_motion(p.human, p.partner);
    require(p.reshaped.frames() == p.source.size() &&
                p.reshaped.joints() == static_cast<std::size_t>(p.human.joint_count()),
            "retarget: reshaped target shape does not match the source motion");
    const std::size_t frames = p.source.size();

    for (const auto& [h, r] : p.correspondence) {
      kin_pairs_.emplace_back(p.robot.role_index(r), p.human.role_index(h));
    }
    require(!kin_pairs_.empty(), "retarget: empty joint correspondence");
    for (Role r : config.keypoint_roles) {
      robot_keypoints_.push_back(p.robot.role_index(r));
      human_keypoints_.push_back(p.human.role_index(r));
    }
    for (Role r : config.upper_body_roles) {
      const int j = p.human.role_index(r);
      upper_body_joints_.push_back(j);
      const int dof = pair::dof_count(p.human.joint(j).dof);
      for (int k = 0; k < dof; ++k) partner_param_index_.push_back(p.human.param_offset(j) + k);
    }

    layout_ = {frames, static_cast<std::size_t>(p.robot.dof_count()), partner_param_index_.size()};
    robot_limits_ = p.robot.flat_limits();
    const auto human_limits = p.human.flat_limits();
    for (int idx : partner_param_index_) partner_limits_.push_back(human_limits[static_cast<std::size_t>(idx)]);

    const PositionSequence source_pos = forward_kinematics(p.human, p.source);
    partner_pos_ = forward_kinematics(p.human, p.partner);
    orig_distances_.reserve(frames);
    for (std::size_t t = 0; t < frames; ++t) {
      std::vector<Vec3d> pts;
      for (int j : human_keypoints_) pts.push_back(partner_pos_.at(t, static_cast<std::size_t>(j)));
      for (int j : human_keypoints_) pts.push_back(source_pos.at(t, static_cast<std::size_t>(j)));
      orig_distances_.push_back(pairwise_distance_matrix(pts));
    }
  }

  const RetargetProblem& problem() const { return problem_; }
  const StateLayout& layout() const { return layout_; }
  std::size_t kin_joint_count() const { return kin_pairs_.size(); }
  const std::vector<std::pair<int, int>>& kin_pairs() const { return kin_pairs_; }
  const std::vector<int>& robot_keypoints() const { return robot_keypoints_; }
  const std::vector<int>& human_keypoints() const { return human_keypoints_; }
  const std::vector<int>& upper_body_joints() const { return upper_body_joints_; }
  const std::vector<int>& partner_param_index() const { return partner_param_index_; }
  const std::vector<Matrix>& original_distances() const { return orig_distances_; }
  double w_a() const { return w_a_; }

  /// Initial decision vector: robot joints copied from same-named human
  /// joints of matching dof (clamped to limits), zeros elsewhere; root pose
  /// from the source pelvis; partner parameters from the input.
  std::vector<double> initial_state() const {
    const auto& p = problem_;
    std::vector<double> x(layout_.size(), 0.0);
    std::vector<std::pair<int, int>> copy;  // (robot param, human param)
    for (int j = 0; j < p.robot.joint_count(); ++j) {
      const Joint& rj = p.robot.joint(j);
      const auto hj = p.human.find_joint(rj.name);
      if (!hj || p.human.joint(*hj).dof != rj.dof) continue;
      for (int k = 0; k < pair::dof_count(rj.dof); ++k) {
        copy.emplace_back(p.robot.param_offset(j) + k, p.human.param_offset(*hj) + k);
      }
    }
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      const FramePose& src = p.source.frames[t];
      for (const auto& [r, h] : copy) {
        const auto& lim = robot_limits_[static_cast<std::size_t>(r)];
        x[layout_.robot(t) + static_cast<std::size_t>(r)] =
            std::clamp(src.joint_params[static_cast<std::size_t>(h)], lim.min, lim.max);
      }
      x[layout_.root_pos(t) + 0] = src.root_pos.x;
      x[layout_.root_pos(t) + 1] = src.root_pos.y;
      x[layout_.root_pos(t) + 2] = src.root_pos.z;
      const Quat q = src.root_quat.normalized();
      x[layout_.root_quat(t) + 0] = q.w;
      x[layout_.root_quat(t) + 1] = q.x;
      x[layout_.root_quat(t) + 2] = q.y;
      x[layout_.root_quat(t) + 3] = q.z;
      for (std::size_t k = 0; k < partner_param_index_.size(); ++k) {
        x[layout_.partner(t) + k] = p.partner.frames[t].joint_params[static_cast<std::size_t>(partner_param_index_[k])];
      }
    }
    return x;
  }

  /// Clamps joint parameters to their limits and renormalizes root quaternions.
  void project(std::span<double> x) const {
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      for (std::size_t d = 0; d < layout_.robot_dof; ++d) {
        double& v = x[layout_.robot(t) + d];
        v = std::clamp(v, robot_limits_[d].min, robot_limits_[d].max);
      }
      for (std::size_t k = 0; k < layout_.partner_dof; ++k) {
        double& v = x[layout_.partner(t) + k];
        v = std::clamp(v, partner_limits_[k].min, partner_limits_[k].max);
      }
      double* q = &x[layout_.root_quat(t)];
      const double n = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
      if (n > 0.0) {
        for (int i = 0; i < 4; ++i) q[i] /= n;
      }
    }
  }

  /// T x D robot joint parameter matrix.
  Matrix robot_params(std::span<const double> x) const {
    Matrix q(layout_.frames, layout_.robot_dof);
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      for (std::size_t d = 0; d < layout_.robot_dof; ++d) q(t, d) = x[layout_.robot(t) + d];
    }
    return q;
  }

  MotionSequence robot_motion(std::span<const double> x) const {
    MotionSequence m;
    m.fps = problem_.source.fps;
    m.skeleton_id = problem_.robot.name();
    m.frames.resize(layout_.frames);
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      FramePose& f = m.frames[t];
      f.joint_params.assign(x.begin() + static_cast<std::ptrdiff_t>(layout_.robot(t)),
                            x.begin() + static_cast<std::ptrdiff_t>(layout_.robot(t) + layout_.robot_dof));
      f.root_pos = {x[layout_.root_pos(t)], x[layout_.root_pos(t) + 1], x[layout_.root_pos(t) + 2]};
      f.root_quat = Quat{x[layout_.root_quat(t)], x[layout_.root_quat(t) + 1], x[layout_.root_quat(t) + 2],
                         x[layout_.root_quat(t) + 3]}
                        .normalized();
    }
    return m;
  }

  /// Partner motion with the adjusted upper-arm parameters written back;
  /// every other parameter is copied verbatim from the input.
  MotionSequence partner_motion(std::span<const double> x) const {
    MotionSequence m = problem_.partner;
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      for (std::size_t k = 0; k < partner_param_index_.size(); ++k) {
        m.frames[t].joint_params[static_cast<std::size_t>(partner_param_index_[k])] = x[layout_.partner(t) + k];
      }
    }
    return m;
  }

  /// Loss value and unweighted components.
  LossBreakdown evaluate(std::span<const double> x, const LossWeights& w) const {
    require(x.size() == layout_.size(), "retarget: state size mismatch");
    LossBreakdown out;
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      const FrameSums<double> s = frame_sums<double>(t, x.subspan(t * layout_.stride(), layout_.stride()));
      out.kin += s.kin;
      out.con += s.con;
      out.hum += s.hum;
    }
    finish(x, w, out);
    return out;
  }

  /// Loss plus its gradient with respect to the full decision vector.
  LossBreakdown evaluate(std::span<const double> x, const LossWeights& w, std::span<double> grad) const {
    require(x.size() == layout_.size() && grad.size() == layout_.size(), "retarget: state size mismatch");
    std::fill(grad.begin(), grad.end(), 0.0);
    LossBreakdown out;
    const double frames = static_cast<double>(layout_.frames);
    const double c_kin = w.w_kin / (frames * static_cast<double>(kin_pairs_.size()));
    const double c_con = w.w_con / frames;
    const double c_hum = w.w_hum / frames;
    ad::Tape tape;
    std::vector<ad::Var> inputs(layout_.stride());
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      tape.clear();
      ad::ScopedTape scope(tape);
      const std::size_t base = t * layout_.stride();
      for (std::size_t i = 0; i < inputs.size(); ++i) inputs[i] = ad::Var::input(x[base + i]);
      const FrameSums<ad::Var> s = frame_sums<ad::Var>(t, inputs);
      const ad::Var weighted = s.kin * c_kin + s.con * c_con + s.hum * c_hum;
      const auto g = ad::gradient(tape, weighted, inputs);
      for (std::size_t i = 0; i < g.size(); ++i) grad[base + i] += g[i];
      out.kin += s.kin.value;
      out.con += s.con.value;
      out.hum += s.hum.value;
    }
    finish(x, w, out);
    const Matrix q = robot_params(x);
    Matrix gq(q.rows(), q.cols(), 0.0);
    accumulate_loss_temp_gradient(q, w_a_, w.w_temp, gq);
    accumulate_loss_pose_gradient(q, w.w_pose, gq);
    for (std::size_t t = 0; t < layout_.frames; ++t) {
      for (std::size_t d = 0; d < layout_.robot_dof; ++d) grad[layout_.robot(t) + d] += gq(t, d);
    }
    return out;
  }

 private:
  template <typename T>
  struct FrameSums {
    T kin;
    T con;
    T hum;
  };

  // Unnormalized per-frame sums of the kinematic, contact and partner terms.
  template <typename T>
  FrameSums<T> frame_sums(std::size_t t, std::span<const T> v) const {
    const auto& p = problem_;
    const std::size_t d = layout_.robot_dof;
    const std::span<const T> robot_params = v.subspan(0, d);
    const Vec3<T> root_pos(v[d], v[d + 1], v[d + 2]);
    const std::array<T, 4> root_quat{v[d + 3], v[d + 4], v[d + 5], v[d + 6]};
    const auto robot = forward_kinematics<T>(p.robot, root_pos, root_quat, robot_params);

    const FramePose& pf = p.partner.frames[t];
    std::vector<T> partner_params(pf.joint_params.begin(), pf.joint_params.end());
    for (std::size_t k = 0; k < partner_param_index_.size(); ++k) {
      partner_params[static_cast<std::size_t>(partner_param_index_[k])] = v[d + 7 + k];
    }
    const Vec3<T> proot(T(pf.root_pos.x), T(pf.root_pos.y), T(pf.root_pos.z));
    const std::array<T, 4> pquat{T(pf.root_quat.w), T(pf.root_quat.x), T(pf.root_quat.y), T(pf.root_quat.z)};
    const auto partner = forward_kinematics<T>(p.human, proot, pquat, partner_params);

    FrameSums<T> s{T(0.0), T(0.0), T(0.0)};
    for (const auto& [rj, hj] : kin_pairs_) {
      const Vec3d& target = p.reshaped.at(t, static_cast<std::size_t>(hj));
      const Vec3<T> diff = robot[static_cast<std::size_t>(rj)] - Vec3<T>(T(target.x), T(target.y), T(target.z));
      s.kin = s.kin + squared_norm(diff);
    }

    std::vector<Vec3<T>> pts;
    pts.reserve(robot_keypoints_.size() * 2);
    for (int j : human_keypoints_) pts.push_back(partner[static_cast<std::size_t>(j)]);
    for (int j : robot_keypoints_) pts.push_back(robot[static_cast<std::size_t>(j)]);
    const Matrix& orig = orig_distances_[t];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t k = i + 1; k < pts.size(); ++k) {
        const T diff = point_distance(pts[i], pts[k]) - T(orig(i, k));
        // Off-diagonal entries appear twice in the Frobenius norm.
        s.con = s.con + T(2.0) * (diff * diff);
      }
    }

    for (int j : upper_body_joints_) {
      const Vec3d& o = partner_pos_.at(t, static_cast<std::size_t>(j));
      s.hum = s.hum + squared_norm(partner[static_cast<std::size_t>(j)] - Vec3<T>(T(o.x), T(o.y), T(o.z)));
    }
    return s;
  }

  void finish(std::span<const double> x, const LossWeights& w, LossBreakdown& out) const {
    const double frames = static_cast<double>(layout_.frames);
    out.kin /= frames * static_cast<double>(kin_pairs_.size());
    out.con /= frames;
    out.hum /= frames;
    const Matrix q = robot_params(x);
    out.temp = loss_temp(q, w_a_);
    out.pose = loss_pose(q);
    out.total = w.w_kin * out.kin + w.w_con * out.con + w.w_hum * out.hum + w.w_temp * out.temp + w.w_pose * out.pose;
  }

  RetargetProblem problem_;
  double w_a_;
  StateLayout layout_;
  std::vector<std::pair<int, int>> kin_pairs_;  // (robot joint, human joint)
  std::vector<int> robot_keypoints_;
  std::vector<int> human_keypoints_;
  std::vector<int> upper_body_joints_;
  std::vector<int> partner_param_index_;
  std::vector<JointLimit> robot_limits_;
  std::vector<JointLimit> partner_limits_;
  PositionSequence partner_pos_;
  std::vector<Matrix> orig_distances_;
};

}  // namespace pair
