#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pair/ad/tape.hpp"
#include "pair/kinematics/forward_kinematics.hpp"
#include "pair/kinematics/skeleton.hpp"
#include "pair/optim/adam.hpp"

namespace pair {

/// Bone-length alignment of a source (human) skeleton onto a target (robot).
/// Effective offset scale of source joint k is global_scale * per_bone_scale[k].
struct MorphologyFit {
  double global_scale = 1.0;
  std::vector<double> per_bone_scale;
  double residual = 0.0;

  static MorphologyFit identity(const Skeleton& source) {
    return {1.0, std::vector<double>(static_cast<std::size_t>(source.joint_count()), 1.0), 0.0};
  }

  std::vector<double> offset_scale() const {
    std::vector<double> out(per_bone_scale.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = global_scale * per_bone_scale[i];
    return out;
  }
};

struct MorphologyFitOptions {
  int iterations = 500;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
};

namespace detail {

// Rest-pose root-relative positions of the corresponded target joints.
inline std::vector<Vec3d> rest_targets(const Skeleton& target, const std::vector<std::pair<Role, Role>>& corr) {
  const std::vector<double> zeros(static_cast<std::size_t>(target.dof_count()), 0.0);
  const auto pos = forward_kinematics<double>(target, Vec3d{}, {1.0, 0.0, 0.0, 0.0}, zeros);
  const Vec3d root = pos[static_cast<std::size_t>(target.role_index(Role::kRoot))];
  std::vector<Vec3d> out;
  out.reserve(corr.size());
  for (const auto& [src, tgt] : corr) out.push_back(pos[static_cast<std::size_t>(target.role_index(tgt))] - root);
  return out;
}

}  // namespace detail

/// Summed squared error between target bone vectors and the scaled,
/// root-relative source bone vectors over the correspondence set.
template <typename T>
T morphology_residual(const Skeleton& source, const std::vector<std::pair<Role, Role>>& corr,
                      const std::vector<Vec3d>& targets, const T& global_scale, const std::vector<T>& per_bone) {
  const std::vector<T> zeros(static_cast<std::size_t>(source.dof_count()), T(0.0));
  const auto pos = forward_kinematics<T>(source, Vec3<T>(T(0.0), T(0.0), T(0.0)), {T(1.0), T(0.0), T(0.0), T(0.0)},
                                         zeros, per_bone);
  const Vec3<T> root = pos[static_cast<std::size_t>(source.role_index(Role::kRoot))];
  T total(0.0);
  for (std::size_t i = 0; i < corr.size(); ++i) {
    const Vec3<T> rel = pos[static_cast<std::size_t>(source.role_index(corr[i].first))] - root;
    const Vec3d& t = targets[i];
    const Vec3<T> d = Vec3<T>(T(t.x), T(t.y), T(t.z)) - rel * global_scale;
    total = total + squared_norm(d);
  }
  return total;
}

/// Fits {global scale, per-bone scales} with Adam from the identity start.
///
/// Per-bone scales are parameterized as exp(u - mean_w(u)) with the
/// bone-length-weighted mean subtracted, which pins the overall size onto
/// the global scale and keeps the joint problem free of the scale gauge.
inline MorphologyFit fit_morphology(const Skeleton& source, const Skeleton& target,
                                    const std::vector<std::pair<Role, Role>>& correspondence,
                                    const MorphologyFitOptions& options = {}) {
  require(!correspondence.empty(), "fit_morphology: empty correspondence");
  require(options.iterations >= 1, "fit_morphology: iterations must be >= 1");
  for (const auto& [src, tgt] : correspondence) {
    (void)source.role_index(src);
    (void)target.role_index(tgt);
  }
  (void)source.role_index(Role::kRoot);
  (void)target.role_index(Role::kRoot);

  const auto n = static_cast<std::size_t>(source.joint_count());
  // Bones that lie on a chain from the root to a corresponded joint.
  std::vector<bool> active(n, false);
  for (const auto& [src, tgt] : correspondence) {
    for (int j = source.role_index(src); j >= 0;) {
      active[static_cast<std::size_t>(j)] = true;
      const auto& parent = source.joint(j).parent;
      j = parent ? *parent : -1;
    }
  }
  std::vector<std::size_t> bones;
  std::vector<double> weights;
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double len = norm(source.joints()[k].rest_offset);
    if (active[k] && len > 0.0) {
      bones.push_back(k);
      weights.push_back(len);
      weight_sum += len;
    }
  }

  const auto targets = detail::rest_targets(target, correspondence);

  // x = [log global scale, u_0 .. u_{m-1}]; the global scale starts at the
  // least-squares single scale <a, b> / <a, a> of the rest positions.
  std::vector<double> x(1 + bones.size(), 0.0);
  {
    std::vector<std::pair<Role, Role>> source_roles;
    for (const auto& [src, tgt] : correspondence) source_roles.emplace_back(tgt, src);
    const auto source_rest = detail::rest_targets(source, source_roles);
    double ab = 0.0;
    double aa = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      ab += dot(source_rest[i], targets[i]);
      aa += dot(source_rest[i], source_rest[i]);
    }
    require(aa > 0.0 && ab > 0.0, "fit_morphology: degenerate rest pose");
    x[0] = std::log(ab / aa);
  }
  Adam adam(x.size(), AdamParams{options.learning_rate});
  ad::Tape tape;

  auto evaluate = [&](bool with_gradient, std::vector<double>* grad) {
    tape.clear();
    ad::ScopedTape scope(tape);
    std::vector<ad::Var> vars;
    vars.reserve(x.size());
    for (double v : x) vars.push_back(with_gradient ? ad::Var::input(v) : ad::Var(v));
    ad::Var mean(0.0);
    for (std::size_t i = 0; i < bones.size(); ++i) mean = mean + vars[1 + i] * (weights[i] / weight_sum);
    std::vector<ad::Var> per_bone(n, ad::Var(1.0));
    for (std::size_t i = 0; i < bones.size(); ++i) {
      const ad::Var e = vars[1 + i] - mean;
      per_bone[bones[i]] = ad::exp(e);
    }
    const ad::Var g = ad::exp(vars[0]);
    const ad::Var r = morphology_residual<ad::Var>(source, correspondence, targets, g, per_bone);
    if (grad) *grad = ad::gradient(tape, r, vars);
    return std::make_pair(r.value, std::make_pair(g.value, per_bone));
  };

  std::vector<double> grad;
  for (int it = 0; it < options.iterations; ++it) {
    const double r = evaluate(true, &grad).first;
    if (!std::isfinite(r)) {
      throw NumericError("fit_morphology: non-finite residual at iteration " + std::to_string(it));
    }
    adam.step(x, grad);
  }

  const auto [residual, scales] = evaluate(false, nullptr);
  MorphologyFit fit;
  fit.global_scale = scales.first;
  fit.per_bone_scale.resize(n);
  for (std::size_t k = 0; k < n; ++k) fit.per_bone_scale[k] = scales.second[k].value;
  fit.residual = residual;
  return fit;
}

/// Joint positions of the morphology-aligned human: each frame keeps the
/// source pelvis pose and applies the fitted bone scales along every chain.
inline PositionSequence reshape_motion(const Skeleton& human, const MotionSequence& human_motion,
                                       const MorphologyFit& fit) {
  require(fit.per_bone_scale.size() == static_cast<std::size_t>(human.joint_count()),
          "reshape_motion: fit does not match skeleton '" + human.name() + "'");
  validate_motion(human, human_motion);
  const auto scale = fit.offset_scale();
  return forward_kinematics(human, human_motion, scale);
}

}  // namespace pair
