#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pair/optim/adam.hpp"
#include "pair/retarget/config.hpp"
#include "pair/retarget/problem.hpp"
#include "pair/retarget/smoothing.hpp"

namespace pair {

struct TraceEntry {
  int iteration = 0;  // global, 1-based across stages
  int stage = 0;
  LossBreakdown loss;
};

struct StageResult {
  std::vector<double> state;
  std::vector<TraceEntry> trace;
};

struct RetargetResult {
  MotionSequence robot_motion;
  MotionSequence partner_motion;
  std::vector<TraceEntry> loss_trace;
  LossBreakdown final_breakdown;
  std::vector<double> stage1_state;  // raw decision vector after stage 1 (before stage 2)
  std::vector<double> final_state;   // decision vector after smoothing
};

namespace detail {

inline void check_finite(const LossBreakdown& l, int iteration) {
  const std::pair<const char*, double> parts[] = {{"kin", l.kin},   {"con", l.con},   {"hum", l.hum},
                                                  {"temp", l.temp}, {"pose", l.pose}, {"total", l.total}};
  for (const auto& [name, value] : parts) {
    if (!std::isfinite(value)) {
      throw NumericError("retarget: non-finite " + std::string(name) + " loss at iteration " +
                         std::to_string(iteration));
    }
  }
}

}  // namespace detail

/// Runs exactly `stage.iterations` Adam steps from `init`, projecting joint
/// parameters onto their limits after every step. Adam moments start fresh.
inline StageResult optimize_stage(const RetargetObjective& objective, std::vector<double> init,
                                  const StageSchedule& stage, const RetargetConfig& config, int stage_index = 1,
                                  int first_iteration = 1) {
  require(stage.iterations >= 1, "optimize_stage: iterations must be >= 1");
  require(init.size() == objective.layout().size(), "optimize_stage: state size mismatch");
  const LossWeights weights = config.weights(stage.w_con);
  AdamParams adam_params = config.adam;
  adam_params.lr = stage.learning_rate;
  Adam adam(init.size(), adam_params);
  StageResult out;
  out.state = std::move(init);
  out.trace.reserve(static_cast<std::size_t>(stage.iterations));
  std::vector<double> grad(out.state.size());
  for (int i = 0; i < stage.iterations; ++i) {
    const int iteration = first_iteration + i;
    const LossBreakdown loss = objective.evaluate(out.state, weights, grad);
    detail::check_finite(loss, iteration);
    for (double g : grad) {
      if (!std::isfinite(g)) {
        throw NumericError("retarget: non-finite gradient at iteration " + std::to_string(iteration));
      }
    }
    out.trace.push_back({iteration, stage_index, loss});
    adam.step(out.state, grad);
    objective.project(out.state);
  }
  return out;
}

/// Gaussian-smooths robot joint parameters and root translation over time;
/// root quaternions are smoothed componentwise and renormalized. Joint
/// parameters are re-clamped so limits hold exactly.
inline std::vector<double> smooth_state(const RetargetObjective& objective, const std::vector<double>& x,
                                        const SmoothingConfig& smoothing) {
  const StateLayout& l = objective.layout();
  const std::size_t channels = l.robot_dof + 7;
  Matrix signal(l.frames, channels);
  for (std::size_t t = 0; t < l.frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) signal(t, c) = x[l.robot(t) + c];
  }
  const Matrix smoothed = gaussian_smooth(signal, smoothing.kernel, smoothing.sigma);
  std::vector<double> out = x;
  for (std::size_t t = 0; t < l.frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) out[l.robot(t) + c] = smoothed(t, c);
  }
  objective.project(out);
  return out;
}

/// Runs the stage schedule from an explicit starting state and finishes
/// with smoothing. Stages with zero iterations are skipped.
inline RetargetResult run_pair_from(const RetargetObjective& objective, std::vector<double> state,
                                    const RetargetConfig& config, bool run_stage1 = true, bool run_stage2 = true) {
  config.validate();
  RetargetResult result;
  int next_iteration = 1;
  const StageSchedule s1 = config.resolved_stage1();
  const StageSchedule s2 = config.resolved_stage2();
  if (run_stage1 && s1.iterations > 0) {
    auto r = optimize_stage(objective, std::move(state), s1, config, 1, next_iteration);
    state = std::move(r.state);
    result.loss_trace.insert(result.loss_trace.end(), r.trace.begin(), r.trace.end());
    next_iteration += s1.iterations;
  } else if (!run_stage1) {
    next_iteration += s1.iterations;
  }
  result.stage1_state = state;
  if (run_stage2 && s2.iterations > 0) {
    auto r = optimize_stage(objective, std::move(state), s2, config, 2, next_iteration);
    state = std::move(r.state);
    result.loss_trace.insert(result.loss_trace.end(), r.trace.begin(), r.trace.end());
  }
  if (config.smoothing.enabled) {
    state = smooth_state(objective, state, config.smoothing);
  }
  const double final_w_con = (run_stage2 && s2.iterations > 0) ? s2.w_con : s1.w_con;
  result.final_breakdown = objective.evaluate(state, config.weights(final_w_con));
  result.robot_motion = objective.robot_motion(state);
  result.partner_motion = objective.partner_motion(state);
  result.final_state = std::move(state);
  return result;
}

/// Two-stage contact-preserving retargeting: a coarse stage with a moderate
/// contact weight, a refinement stage with the contact weight raised, then
/// clamping and Gaussian smoothing.
inline RetargetResult run_pair(const RetargetProblem& problem, const RetargetConfig& config = {}) {
  config.validate();
  const RetargetObjective objective(problem, config);
  return run_pair_from(objective, objective.initial_state(), config);
}

}  // namespace pair
