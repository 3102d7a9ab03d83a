#pragma once

// End-to-end retargeting of one interaction pair: morphology fit, reshape,
// optimization and evaluation, shared by the CLI and the tests.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pair/io/files.hpp"
#include "pair/kinematics/morphology.hpp"
#include "pair/metrics/metrics.hpp"
#include "pair/retarget/pair.hpp"

namespace pair::io {

struct PairInput {
  Skeleton human;
  Skeleton robot;
  MotionSequence source;
  MotionSequence partner;
};

struct PairRun {
  MorphologyFit fit;
  RetargetProblem problem;
  RetargetResult result;
  MetricsReport metrics;
};

inline RetargetProblem build_problem(const PairInput& in, std::uint64_t seed, MorphologyFit* fit_out = nullptr) {
  require(in.source.frames.size() == in.partner.frames.size(), "source and partner frame counts differ");
  validate_motion(in.human, in.source);
  validate_motion(in.human, in.partner);
  MorphologyFitOptions opts;
  opts.seed = seed;
  const MorphologyFit fit = fit_morphology(in.human, in.robot, default_correspondence(), opts);
  if (fit_out != nullptr) *fit_out = fit;
  return {in.robot, in.human, in.source, in.partner, reshape_motion(in.human, in.source, fit)};
}

inline MetricsReport evaluate_run(const RetargetProblem& problem, const RetargetResult& result,
                                  const std::vector<double>& thresholds) {
  EvaluationInput ev;
  ev.human = &problem.human;
  ev.robot = &problem.robot;
  ev.source = forward_kinematics(problem.human, problem.source);
  ev.partner = forward_kinematics(problem.human, problem.partner);
  ev.robot_positions = forward_kinematics(problem.robot, result.robot_motion);
  ev.partner_adjusted = forward_kinematics(problem.human, result.partner_motion);
  ev.reshaped = problem.reshaped;
  ev.robot_params = joint_param_matrix(result.robot_motion);
  ev.correspondence = problem.correspondence;
  ev.fps = result.robot_motion.fps;
  return full_report(ev, thresholds);
}

/// Full pipeline; with `warm_start` only stage 2 runs from that state.
inline PairRun run_pair_files(const PairInput& in, const RetargetConfig& config,
                              const std::vector<double>& thresholds,
                              const std::optional<std::vector<double>>& warm_start = std::nullopt) {
  PairRun run;
  run.problem = build_problem(in, config.seed, &run.fit);
  const RetargetObjective objective(run.problem, config);
  if (warm_start) {
    require(warm_start->size() == objective.layout().size(), "warm-start state does not match this problem");
    // Saved states are already feasible; projecting again would perturb the
    // last bits and break equality with the uninterrupted run.
    std::vector<double> projected = *warm_start;
    objective.project(projected);
    for (std::size_t i = 0; i < projected.size(); ++i) {
      require(std::abs(projected[i] - (*warm_start)[i]) <= 1e-6, "warm-start state violates joint limits or unit quaternions");
    }
    run.result = run_pair_from(objective, *warm_start, config, false, true);
  } else {
    run.result = run_pair_from(objective, objective.initial_state(), config);
  }
  run.metrics = evaluate_run(run.problem, run.result, thresholds);
  return run;
}

inline Json state_json(const std::vector<double>& state, const RetargetObjective& objective) {
  const StateLayout& l = objective.layout();
  return {{"version", 1},
          {"frames", l.frames},
          {"robot_dof", l.robot_dof},
          {"partner_dof", l.partner_dof},
          {"state", state}};
}

inline std::vector<double> state_from(const Json& j) {
  const std::string what = "state";
  check_keys(j, {"version", "frames", "robot_dof", "partner_dof", "state"}, what);
  require(j.contains("state"), what + ": missing 'state'");
  const auto s = numbers(j.at("state"), 0, what);
  const auto frames = get<std::size_t>(j, "frames", what);
  const auto stride = get<std::size_t>(j, "robot_dof", what) + 7 + get<std::size_t>(j, "partner_dof", what);
  require(s.size() == frames * stride, what + ": length does not match the declared layout");
  return s;
}

}  // namespace pair::io
