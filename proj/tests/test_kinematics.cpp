#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pair/fixtures/scenarios.hpp"
#include "pair/kinematics/forward_kinematics.hpp"
#include "pair/kinematics/morphology.hpp"
#include "pair/kinematics/presets.hpp"
#include "support/oracles.hpp"

namespace {

using namespace pair;

FramePose random_pose(const Skeleton& s, std::mt19937_64& rng, double angle = 1.0) {
  FramePose f;
  f.root_pos = oracle::random_point(rng);
  f.root_quat = Quat{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1),
                     oracle::uniform(rng, -1, 1)}
                    .normalized();
  const auto limits = s.flat_limits();
  for (const auto& l : limits) {
    f.joint_params.push_back(std::clamp(oracle::uniform(rng, -angle, angle), l.min, l.max));
  }
  return f;
}

Skeleton two_link() {
  return detail::SkeletonBuilder("chain")
      .root("root")
      .revolute("a", "root", {0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}, -3.0, 3.0)
      .revolute("b", "a", {0.5, 0.0, 0.0}, {0.0, 0.0, 1.0}, -3.0, 3.0)
      .fixed("c", "b", {0.3, 0.0, 0.0})
      .role(Role::kRoot, "root")
      .role(Role::kHead, "c")
      .role(Role::kLeftShoulder, "a")
      .role(Role::kRightShoulder, "a")
      .role(Role::kLeftElbow, "b")
      .role(Role::kRightElbow, "b")
      .role(Role::kLeftWrist, "c")
      .role(Role::kRightWrist, "c")
      .role(Role::kLeftHand, "c")
      .role(Role::kRightHand, "c")
      .build();
}

TEST(ForwardKinematics, MatchesOracleOnPresets) {
  std::mt19937_64 rng(7);
  for (const Skeleton& s : {smpl_like_skeleton(), g1_like_skeleton(), fixtures::compact_humanoid_skeleton()}) {
    for (int k = 0; k < 20; ++k) {
      const FramePose f = random_pose(s, rng);
      const auto got = forward_kinematics(s, f);
      const auto want = oracle::fk(s, f.root_pos, {f.root_quat.w, f.root_quat.x, f.root_quat.y, f.root_quat.z},
                                   f.joint_params);
      for (std::size_t j = 0; j < got.size(); ++j) {
        EXPECT_NEAR(got[j].x, want[j].x, 1e-12);
        EXPECT_NEAR(got[j].y, want[j].y, 1e-12);
        EXPECT_NEAR(got[j].z, want[j].z, 1e-12);
      }
    }
  }
}

TEST(ForwardKinematics, ZeroPoseIsCumulativeOffsets) {
  const Skeleton s = smpl_like_skeleton();
  FramePose f;
  f.joint_params.assign(static_cast<std::size_t>(s.dof_count()), 0.0);
  const auto p = forward_kinematics(s, f);
  std::vector<Vec3d> want(p.size());
  for (std::size_t j = 1; j < p.size(); ++j) {
    want[j] = want[static_cast<std::size_t>(*s.joint(static_cast<int>(j)).parent)] + s.joint(static_cast<int>(j)).rest_offset;
  }
  for (std::size_t j = 0; j < p.size(); ++j) EXPECT_LT(oracle::dist(p[j], want[j]), 1e-15);
}

TEST(ForwardKinematics, RootTranslationShiftsEveryJoint) {
  std::mt19937_64 rng(3);
  const Skeleton s = g1_like_skeleton();
  FramePose f = random_pose(s, rng);
  f.root_pos = {};
  const auto a = forward_kinematics(s, f);
  f.root_pos = {1.0, 2.0, 3.0};
  const auto b = forward_kinematics(s, f);
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_NEAR(b[j].x - a[j].x, 1.0, 1e-12);
    EXPECT_NEAR(b[j].y - a[j].y, 2.0, 1e-12);
    EXPECT_NEAR(b[j].z - a[j].z, 3.0, 1e-12);
  }
  EXPECT_EQ(b[0].x, 1.0);
  EXPECT_EQ(b[0].y, 2.0);
  EXPECT_EQ(b[0].z, 3.0);
}

TEST(ForwardKinematics, QuarterTurnRevolute) {
  const Skeleton s = detail::SkeletonBuilder("quarter")
                         .root("root", DofType::kRevolute)
                         .fixed("child", "root", {0.7, 0.0, 0.0})
                         .role(Role::kRoot, "root")
                         .role(Role::kHead, "child")
                         .role(Role::kLeftShoulder, "child")
                         .role(Role::kRightShoulder, "child")
                         .role(Role::kLeftElbow, "child")
                         .role(Role::kRightElbow, "child")
                         .role(Role::kLeftWrist, "child")
                         .role(Role::kRightWrist, "child")
                         .role(Role::kLeftHand, "child")
                         .role(Role::kRightHand, "child")
                         .build();
  FramePose f;
  f.joint_params = {std::numbers::pi / 2.0};
  const auto p = forward_kinematics(s, f);
  EXPECT_NEAR(p[1].x, 0.0, 1e-15);
  EXPECT_NEAR(p[1].y, 0.7, 1e-15);
  EXPECT_NEAR(p[1].z, 0.0, 1e-15);
}

TEST(ForwardKinematics, RigidTransformEquivariance) {
  std::mt19937_64 rng(11);
  const Skeleton s = smpl_like_skeleton();
  for (int k = 0; k < 10; ++k) {
    const FramePose f = random_pose(s, rng);
    const Quat g = Quat{oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1), oracle::uniform(rng, -1, 1),
                        oracle::uniform(rng, -1, 1)}
                       .normalized();
    const Vec3d shift = oracle::random_point(rng);
    const Eigen::Quaterniond ge(g.w, g.x, g.y, g.z);
    const Eigen::Quaterniond fe(f.root_quat.w, f.root_quat.x, f.root_quat.y, f.root_quat.z);
    const Eigen::Quaterniond composed = ge * fe;
    FramePose moved = f;
    moved.root_quat = {composed.w(), composed.x(), composed.y(), composed.z()};
    moved.root_pos = oracle::pv(ge * oracle::ev(f.root_pos) + oracle::ev(shift));
    const auto a = forward_kinematics(s, f);
    const auto b = forward_kinematics(s, moved);
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Eigen::Vector3d want = ge * oracle::ev(a[j]) + oracle::ev(shift);
      EXPECT_LT((oracle::ev(b[j]) - want).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(ForwardKinematics, BoneLengthsIgnoreJointAngles) {
  std::mt19937_64 rng(5);
  for (const Skeleton& s : {smpl_like_skeleton(), g1_like_skeleton()}) {
    for (int k = 0; k < 10; ++k) {
      const auto p = forward_kinematics(s, random_pose(s, rng, 3.0));
      for (int j = 1; j < s.joint_count(); ++j) {
        const auto parent = static_cast<std::size_t>(*s.joint(j).parent);
        EXPECT_NEAR(oracle::dist(p[static_cast<std::size_t>(j)], p[parent]), norm(s.joint(j).rest_offset), 1e-9);
      }
    }
  }
}

TEST(ForwardKinematics, RejectsWrongParameterCount) {
  const Skeleton s = smpl_like_skeleton();
  MotionSequence m;
  FramePose f;
  f.joint_params.assign(static_cast<std::size_t>(s.dof_count() - 1), 0.0);
  m.frames.push_back(f);
  EXPECT_THROW(validate_motion(s, m), InputError);
}

TEST(Skeleton, ValidationErrors) {
  Joint root{"root", std::nullopt, {}, DofType::kFixed, {0, 0, 1}, {}};
  Joint bad_axis{"a", 0, {0.1, 0, 0}, DofType::kRevolute, {1, 1, 0}, {JointLimit{}}};
  EXPECT_THROW(Skeleton("s", {root, bad_axis}, {}), InputError);
  Joint bad_limits{"a", 0, {0.1, 0, 0}, DofType::kRevolute, {0, 0, 1}, {JointLimit{1.0, -1.0}}};
  EXPECT_THROW(Skeleton("s", {root, bad_limits}, {}), InputError);
  Joint forward_parent{"a", 2, {0.1, 0, 0}, DofType::kFixed, {0, 0, 1}, {}};
  EXPECT_THROW(Skeleton("s", {root, forward_parent}, {}), InputError);
  EXPECT_THROW(Skeleton("s", {root}, {{Role::kRoot, 0}}), InputError);  // required roles missing
  EXPECT_NO_THROW(two_link());
}

TEST(Skeleton, MissingRoleIsNamed) {
  const Skeleton s = two_link();
  try {
    (void)s.role_index(Role::kLeftKnee);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("left_knee"), std::string::npos);
  }
}

TEST(Morphology, IdentityFit) {
  const Skeleton s = smpl_like_skeleton();
  const auto fit = fit_morphology(s, s, default_correspondence());
  EXPECT_NEAR(fit.global_scale, 1.0, 1e-6);
  for (double v : fit.per_bone_scale) EXPECT_NEAR(v, 1.0, 1e-6);
  EXPECT_LT(fit.residual, 1e-10);
}

TEST(Morphology, DoubledSkeletonGivesScaleTwo) {
  const Skeleton s = smpl_like_skeleton();
  const Skeleton big = s.with_scaled_offsets(std::vector<double>(static_cast<std::size_t>(s.joint_count()), 2.0), "big");
  const auto fit = fit_morphology(s, big, default_correspondence());
  EXPECT_NEAR(fit.global_scale, 2.0, 1e-3);
  // Effective scale on each corresponded bone chain is global * per-bone.
  const auto scale = fit.offset_scale();
  for (const auto& [src, tgt] : default_correspondence()) {
    for (int j = s.role_index(src); j > 0; j = *s.joint(j).parent) {
      if (norm(s.joint(j).rest_offset) > 0.0) {
        EXPECT_NEAR(scale[static_cast<std::size_t>(j)], 2.0, 1e-3);
      }
    }
  }
  EXPECT_LT(fit.residual, 1e-6);
}

// Least-squares oracle for a single global scale: s* = <a, b> / <a, a>.
double best_global_residual(const Skeleton& src, const Skeleton& tgt) {
  auto rest = [](const Skeleton& s) {
    FramePose f;
    f.joint_params.assign(static_cast<std::size_t>(s.dof_count()), 0.0);
    return forward_kinematics(s, f);
  };
  const auto a = rest(src);
  const auto b = rest(tgt);
  const Vec3d ra = a[static_cast<std::size_t>(src.role_index(Role::kRoot))];
  const Vec3d rb = b[static_cast<std::size_t>(tgt.role_index(Role::kRoot))];
  double ab = 0.0;
  double aa = 0.0;
  std::vector<std::pair<Vec3d, Vec3d>> pairs;
  for (const auto& [s, t] : default_correspondence()) {
    const Vec3d u = a[static_cast<std::size_t>(src.role_index(s))] - ra;
    const Vec3d v = b[static_cast<std::size_t>(tgt.role_index(t))] - rb;
    ab += dot(u, v);
    aa += dot(u, u);
    pairs.emplace_back(u, v);
  }
  const double k = ab / aa;
  double r = 0.0;
  for (const auto& [u, v] : pairs) r += squared_norm(u * k - v);
  return r;
}

TEST(Morphology, PerBoneBeatsGlobalScale) {
  const Skeleton h = smpl_like_skeleton();
  const Skeleton g = g1_like_skeleton();
  const auto fit = fit_morphology(h, g, default_correspondence());
  EXPECT_LT(fit.residual, best_global_residual(h, g));
}

TEST(Morphology, Deterministic) {
  const Skeleton h = smpl_like_skeleton();
  const Skeleton g = g1_like_skeleton();
  const auto a = fit_morphology(h, g, default_correspondence());
  const auto b = fit_morphology(h, g, default_correspondence());
  EXPECT_EQ(a.global_scale, b.global_scale);
  EXPECT_EQ(a.per_bone_scale, b.per_bone_scale);
  EXPECT_EQ(a.residual, b.residual);
}

TEST(Morphology, MissingRoleRejected) {
  const Skeleton h = smpl_like_skeleton();
  EXPECT_THROW(fit_morphology(h, two_link(), default_correspondence()), InputError);
}

TEST(Reshape, IdentityFitEqualsForwardKinematics) {
  const auto sc = fixtures::make_handshake_scenario(30);
  const auto reshaped = reshape_motion(sc.human, sc.source, MorphologyFit::identity(sc.human));
  const auto plain = forward_kinematics(sc.human, sc.source);
  for (std::size_t t = 0; t < plain.frames(); ++t) {
    for (std::size_t j = 0; j < plain.joints(); ++j) EXPECT_EQ(oracle::dist(reshaped.at(t, j), plain.at(t, j)), 0.0);
  }
}

TEST(Reshape, HalfScaleHalvesBones) {
  const auto sc = fixtures::make_handshake_scenario(30);
  MorphologyFit fit = MorphologyFit::identity(sc.human);
  fit.global_scale = 0.5;
  const auto r = reshape_motion(sc.human, sc.source, fit);
  const auto p = forward_kinematics(sc.human, sc.source);
  for (std::size_t t = 0; t < p.frames(); ++t) {
    EXPECT_EQ(oracle::dist(r.at(t, 0), p.at(t, 0)), 0.0);  // pelvis kept
    for (int j = 1; j < sc.human.joint_count(); ++j) {
      const auto u = static_cast<std::size_t>(j);
      const auto parent = static_cast<std::size_t>(*sc.human.joint(j).parent);
      EXPECT_NEAR(oracle::dist(r.at(t, u), r.at(t, parent)), 0.5 * oracle::dist(p.at(t, u), p.at(t, parent)), 1e-12);
    }
  }
}

TEST(Reshape, HandBuiltChain) {
  const Skeleton s = two_link();
  MotionSequence m;
  for (double a : {0.0, std::numbers::pi / 2.0}) {
    FramePose f;
    f.joint_params = {a, a};
    m.frames.push_back(f);
  }
  MorphologyFit fit = MorphologyFit::identity(s);
  fit.per_bone_scale = {1.0, 1.0, 2.0, 1.0};
  const auto r = reshape_motion(s, m, fit);
  // Frame 0: straight along x, first bone doubled to 1.0, second 0.3.
  EXPECT_NEAR(r.at(0, 2).x, 1.0, 1e-15);
  EXPECT_NEAR(r.at(0, 3).x, 1.3, 1e-15);
  // Frame 1: a turns 90 deg, b another 90 deg.
  EXPECT_NEAR(r.at(1, 2).x, 0.0, 1e-15);
  EXPECT_NEAR(r.at(1, 2).y, 1.0, 1e-15);
  EXPECT_NEAR(r.at(1, 3).x, -0.3, 1e-15);
  EXPECT_NEAR(r.at(1, 3).y, 1.0, 1e-15);
}

}  // namespace
