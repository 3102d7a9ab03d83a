#pragma once

#include <cstdint>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/kinematics/skeleton.hpp"
#include "pair/optim/adam.hpp"

namespace pair {

struct StageSchedule {
  int iterations = 0;
  double learning_rate = 0.0;
  double w_con = 0.0;
};

/// Loss weights for one stage; w_con is taken from the active stage.
struct LossWeights {
  double w_kin = 1.0;
  double w_con = 0.25;
  double w_hum = 0.25;
  double w_temp = 5.0;
  double w_pose = 0.02;
  double w_a = 1.0;
};

struct SmoothingConfig {
  bool enabled = true;
  int kernel = 5;
  double sigma = 0.75;
};

/// Interaction keypoints used for the N x N distance matrices (per agent).
inline std::vector<Role> default_keypoint_roles() {
  return {Role::kHead,      Role::kLeftShoulder, Role::kRightShoulder, Role::kLeftElbow,
          Role::kRightElbow, Role::kLeftWrist,    Role::kRightWrist};
}

/// Partner joints whose parameters the optimizer may adjust.
inline std::vector<Role> default_upper_body_roles() {
  return {Role::kLeftShoulder, Role::kRightShoulder, Role::kLeftElbow,
          Role::kRightElbow,   Role::kLeftWrist,     Role::kRightWrist};
}

struct RetargetConfig {
  double w_kin = 1.0;
  double w_con_stage1 = 0.25;
  double w_con_stage2 = 2.5;
  double w_hum = 0.25;
  double w_temp = 5.0;
  double w_pose = 0.02;
  double w_a = 1.0;
  StageSchedule stage1{150, 0.02, 0.0};
  StageSchedule stage2{50, 0.005, 0.0};
  SmoothingConfig smoothing;
  AdamParams adam{0.0, 0.9, 0.999, 1e-8};
  std::vector<Role> keypoint_roles = default_keypoint_roles();
  std::vector<Role> upper_body_roles = default_upper_body_roles();
  std::uint64_t seed = 42;

  LossWeights weights(double w_con) const { return {w_kin, w_con, w_hum, w_temp, w_pose, w_a}; }

  StageSchedule resolved_stage1() const { return {stage1.iterations, stage1.learning_rate, w_con_stage1}; }
  StageSchedule resolved_stage2() const { return {stage2.iterations, stage2.learning_rate, w_con_stage2}; }

  void validate() const {
    for (double w : {w_kin, w_con_stage1, w_con_stage2, w_hum, w_temp, w_pose}) {
      require(w >= 0.0, "config: loss weights must be non-negative");
    }
    require(stage1.iterations >= 0 && stage2.iterations >= 0, "config: stage iterations must be >= 0");
    require(stage1.iterations + stage2.iterations >= 1, "config: at least one optimization iteration required");
    require(stage1.learning_rate > 0.0 && stage2.learning_rate > 0.0, "config: learning rates must be > 0");
    require(smoothing.kernel >= 1 && smoothing.kernel % 2 == 1, "config: smoothing kernel must be odd and >= 1");
    require(smoothing.sigma > 0.0, "config: smoothing sigma must be > 0");
    require(keypoint_roles.size() >= 1, "config: keypoint set is empty");
  }
};

}  // namespace pair
