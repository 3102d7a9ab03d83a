// Command-line front end: retarget, metrics, detect, schedule, standardize,
// fit-shape. Exit codes: 0 ok, 1 numeric failure, 2 input/validation error.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pair/detectors/detectors.hpp"
#include "pair/io/files.hpp"
#include "pair/io/pipeline.hpp"
#include "pair/scheduler/scheduler.hpp"

namespace {

using namespace pair;
using namespace pair::io;

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitInput = 2;

struct Common {
  std::string config;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::string out_dir = ".";
  int jobs = 1;
};

RetargetConfig load_retarget_config(const Common& c, const Json& overrides = Json::object()) {
  RetargetConfig cfg;
  if (!c.config.empty()) apply_config(read_json(c.config), cfg);
  apply_config(overrides, cfg);
  if (c.seed_given) cfg.seed = c.seed;
  return cfg;
}

DetectionConfig load_detection_config(const std::string& path) {
  DetectionConfig cfg;
  if (!path.empty()) apply_detection_config(read_json(path), cfg);
  return cfg;
}

std::vector<double> thresholds_or_default(const std::vector<double>& taus) {
  if (!taus.empty()) return taus;
  return {kContactThresholds.begin(), kContactThresholds.end()};
}

/// Runs `work(i)` for i in [0, n) on up to `jobs` threads. Errors are
/// collected per index; the first one (by index) is rethrown afterwards.
template <typename F>
void parallel_for(std::size_t n, int jobs, F work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 64));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---- retarget ----

struct RetargetArgs {
  std::string source;
  std::string partner;
  std::string human;
  std::string robot = "g1";
  std::string manifest;
  std::string warm_start;
  bool stage2_only = false;
  std::vector<double> taus;
};

void write_retarget_outputs(const fs::path& dir, const PairRun& run, const RetargetConfig& cfg,
                            const Json& inputs) {
  const RetargetObjective objective(run.problem, cfg);
  save_motion(dir / "robot_motion.json", run.result.robot_motion);
  save_motion(dir / "partner_motion.json", run.result.partner_motion);
  write_text(dir / "loss_trace.csv", loss_trace_csv(run.result.loss_trace));
  write_json(dir / "stage1_state.json", state_json(run.result.stage1_state, objective));
  const Json config = config_json(cfg);
  write_json(dir / "report.json", {{"provenance", provenance(config, cfg.seed)},
                                   {"config", config},
                                   {"inputs", inputs},
                                   {"morphology", fit_json(run.problem.human, run.fit)},
                                   {"final_breakdown", breakdown_json(run.result.final_breakdown)},
                                   {"metrics", metrics_json(run.metrics)}});
}

PairInput load_pair(const fs::path& source, const fs::path& partner, const std::string& human,
                    const std::string& robot) {
  SkinnedMotion s = load_skinned_motion(source, human);
  SkinnedMotion p = load_skinned_motion(partner, human.empty() ? std::string{} : human);
  require(s.skeleton.name() == p.skeleton.name(), "source and partner use different skeletons");
  return {std::move(s.skeleton), resolve_skeleton(robot), std::move(s.motion), std::move(p.motion)};
}

int run_retarget(const Common& c, const RetargetArgs& a) {
  const auto taus = thresholds_or_default(a.taus);
  if (!a.manifest.empty()) {
    require(!a.stage2_only, "--stage2-only is not supported with --manifest");
    const RunManifest m = load_manifest(a.manifest);
    std::vector<std::string> rows(m.episodes.size());
    parallel_for(m.episodes.size(), c.jobs, [&](std::size_t i) {
      const ManifestEpisode& ep = m.episodes[i];
      require(!ep.source.empty() && !ep.partner.empty(), "episode '" + ep.id + "' needs 'source' and 'partner'");
      const RetargetConfig cfg = load_retarget_config(c, ep.config);
      const std::string robot = ep.robot_skeleton.empty() ? a.robot : ep.robot_skeleton;
      const PairInput in = load_pair(ep.source, ep.partner, ep.human_skeleton, robot);
      const PairRun run = run_pair_files(in, cfg, taus);
      write_retarget_outputs(fs::path(c.out_dir) / ep.id, run, cfg,
                             {{"id", ep.id}, {"source", ep.source.filename().string()},
                              {"partner", ep.partner.filename().string()}, {"robot_skeleton", robot}});
      rows[i] = metrics_csv_rows(ep.id, run.metrics);
      log(LogLevel::kInfo, "retargeted " + ep.id);
    });
    std::string csv = metrics_csv_header();
    for (const auto& r : rows) csv += r;
    write_text(fs::path(c.out_dir) / "metrics.csv", csv);
    return kExitOk;
  }
  require(!a.source.empty() && !a.partner.empty(), "retarget needs --source and --partner (or --manifest)");
  const RetargetConfig cfg = load_retarget_config(c);
  const PairInput in = load_pair(a.source, a.partner, a.human, a.robot);
  std::optional<std::vector<double>> warm;
  if (a.stage2_only) {
    require(!a.warm_start.empty(), "--stage2-only needs --warm-start");
    warm = state_from(read_json(a.warm_start));
  }
  const PairRun run = run_pair_files(in, cfg, taus, warm);
  write_retarget_outputs(c.out_dir, run, cfg,
                         {{"source", fs::path(a.source).filename().string()},
                          {"partner", fs::path(a.partner).filename().string()},
                          {"robot_skeleton", a.robot},
                          {"stage2_only", a.stage2_only}});
  std::string csv = metrics_csv_header() + metrics_csv_rows("run", run.metrics);
  write_text(fs::path(c.out_dir) / "metrics.csv", csv);
  return kExitOk;
}

// ---- metrics ----

struct MetricsArgs {
  std::string source;
  std::string partner;
  std::string robot_motion;
  std::string partner_motion;
  std::string human;
  std::string robot;
  std::vector<double> taus;
};

int run_metrics(const Common& c, const MetricsArgs& a) {
  const RetargetConfig cfg = load_retarget_config(c);
  SkinnedMotion rm = load_skinned_motion(a.robot_motion, a.robot);
  PairInput in = load_pair(a.source, a.partner, a.human, a.robot.empty() ? "g1" : a.robot);
  in.robot = rm.skeleton;
  const RetargetProblem problem = build_problem(in, cfg.seed);
  RetargetResult result;
  result.robot_motion = rm.motion;
  result.partner_motion =
      a.partner_motion.empty() ? in.partner : load_skinned_motion(a.partner_motion, a.human).motion;
  const auto taus = thresholds_or_default(a.taus);
  const MetricsReport report = evaluate_run(problem, result, taus);
  const Json config = config_json(cfg);
  write_text(fs::path(c.out_dir) / "metrics.csv", metrics_csv_header() + metrics_csv_rows("run", report));
  write_json(fs::path(c.out_dir) / "metrics.json",
             {{"provenance", provenance(config, cfg.seed)}, {"config", config}, {"thresholds", taus},
              {"metrics", metrics_json(report)}});
  return kExitOk;
}

// ---- detect ----

struct DetectArgs {
  std::string manifest;
  std::string detection_config;
  std::string task;
  std::string human;
  std::string robot;
};

int run_detect(const Common& c, const DetectArgs& a) {
  const DetectionConfig cfg = load_detection_config(a.detection_config);
  const Json cfg_json = detection_config_json(cfg);
  if (a.manifest.empty()) {
    require(!a.task.empty() && !a.human.empty() && !a.robot.empty(),
            "detect needs --manifest, or --task with --human and --robot");
    const DetectionOutcome o = detect(task_from_string(a.task), load_agent(a.human), load_agent(a.robot), cfg);
    write_json(fs::path(c.out_dir) / "detection.json",
               {{"config", cfg_json}, {"task", a.task}, {"outcome", outcome_json(o)}});
    std::cout << (o.success ? "success" : "failure") << "\n";
    return kExitOk;
  }
  const RunManifest m = load_manifest(a.manifest);
  std::vector<DetectionOutcome> outcomes(m.episodes.size());
  for (const auto& ep : m.episodes) {
    require(ep.task.has_value(), "episode '" + ep.id + "' has no task");
    require(!ep.partner.empty() && !ep.robot.empty(), "episode '" + ep.id + "' needs 'partner' and 'robot'");
  }
  parallel_for(m.episodes.size(), c.jobs, [&](std::size_t i) {
    const ManifestEpisode& ep = m.episodes[i];
    outcomes[i] = detect(*ep.task, load_agent(ep.partner, ep.human_skeleton), load_agent(ep.robot, ep.robot_skeleton),
                         cfg);
  });
  std::map<std::pair<std::string, std::string>, SuccessCell> cells;
  Json episodes = Json::array();
  for (std::size_t i = 0; i < m.episodes.size(); ++i) {
    const ManifestEpisode& ep = m.episodes[i];
    const std::string task(to_string(*ep.task));
    SuccessCell& cell = cells[{task, ep.condition}];
    cell.task = task;
    cell.condition = ep.condition;
    ++cell.n;
    if (outcomes[i].success) ++cell.successes;
    Json e = outcome_json(outcomes[i]);
    e["id"] = ep.id;
    e["task"] = task;
    e["condition"] = ep.condition;
    episodes.push_back(e);
  }
  std::vector<SuccessCell> rows;
  for (const auto& [key, cell] : cells) rows.push_back(cell);
  write_text(fs::path(c.out_dir) / "success_rates.csv", success_rates_csv(rows));
  write_json(fs::path(c.out_dir) / "detections.json", {{"config", cfg_json}, {"episodes", episodes}});
  return kExitOk;
}

// ---- schedule / standardize / fit-shape ----

int run_schedule(const Common& c, const std::string& plans_path) {
  const Json j = read_json(plans_path);
  const Json& list = j.is_object() && j.contains("plans") ? j.at("plans") : j;
  require(list.is_array() && !list.empty(), "plan file needs a non-empty list of anchor plans");
  std::vector<AnchorPlan> plans;
  for (std::size_t i = 0; i < list.size(); ++i) plans.push_back(plan_from(list[i], i));
  const DenseTrajectory d = replay(plans);
  MotionSequence m = reference_motion(d, "g1");
  save_motion(fs::path(c.out_dir) / "reference_motion.json", m);
  write_json(fs::path(c.out_dir) / "schedule.json",
             {{"start_time", d.start_time}, {"end_time", d.end_time()}, {"frames", d.size()}, {"plans", plans.size()}});
  return kExitOk;
}

int run_standardize(const Common& c, const std::string& motion_path, const std::string& phases_path,
                    const std::string& skeleton) {
  const SkinnedMotion m = load_skinned_motion(motion_path, skeleton);
  const PhaseSegmentation seg = phases_from(read_json(phases_path));
  save_motion(fs::path(c.out_dir) / "standardized_motion.json", standardize_phases(m.skeleton, m.motion, seg));
  return kExitOk;
}

int run_fit_shape(const Common& c, const std::string& human, const std::string& robot, const std::string& motion) {
  const Skeleton h = resolve_skeleton(human);
  const Skeleton r = resolve_skeleton(robot);
  MorphologyFitOptions opts;
  opts.seed = c.seed;
  const MorphologyFit fit = fit_morphology(h, r, default_correspondence(), opts);
  write_json(fs::path(c.out_dir) / "morphology_fit.json",
             {{"source", h.name()}, {"target", r.name()}, {"seed", c.seed}, {"fit", fit_json(h, fit)}});
  if (!motion.empty()) {
    const SkinnedMotion m = load_skinned_motion(motion, human);
    PositionFile p;
    p.fps = m.motion.fps;
    for (const Joint& jt : m.skeleton.joints()) p.joint_names.push_back(jt.name);
    p.positions = reshape_motion(m.skeleton, m.motion, fit);
    p.roles = m.skeleton.roles();
    write_json(fs::path(c.out_dir) / "reshaped_positions.json", positions_json(p));
  }
  return kExitOk;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file");
  app->add_option("--seed", c.seed, "random seed")->default_val(42);
  app->add_option("--out-dir", c.out_dir, "output directory")->default_val(".");
  app->add_option("--jobs", c.jobs, "parallel workers for manifest runs")->default_val(1)->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction retargeting, evaluation and scheduling tools"};
  app.require_subcommand(1);

  Common common;
  RetargetArgs ra;
  MetricsArgs ma;
  DetectArgs da;
  std::string plans;
  std::string std_motion;
  std::string std_phases;
  std::string std_skeleton;
  std::string fit_human = "smpl";
  std::string fit_robot = "g1";
  std::string fit_motion;

  auto* retarget = app.add_subcommand("retarget", "retarget a human-human pair onto a robot");
  add_common(retarget, common);
  retarget->add_option("--source", ra.source, "motion of the human replaced by the robot");
  retarget->add_option("--partner", ra.partner, "motion of the interaction partner");
  retarget->add_option("--human", ra.human, "human skeleton preset or file (default: from motion file)");
  retarget->add_option("--robot", ra.robot, "robot skeleton preset or file")->default_val("g1");
  retarget->add_option("--manifest", ra.manifest, "batch manifest");
  retarget->add_flag("--stage2-only", ra.stage2_only, "run only the refinement stage");
  retarget->add_option("--warm-start", ra.warm_start, "stage1_state.json from an earlier run");
  retarget->add_option("--tau", ra.taus, "contact threshold in m (repeatable)");

  auto* metrics = app.add_subcommand("metrics", "evaluate a retargeted pair");
  add_common(metrics, common);
  metrics->add_option("--source", ma.source, "original source human motion")->required();
  metrics->add_option("--partner", ma.partner, "original partner motion")->required();
  metrics->add_option("--robot-motion", ma.robot_motion, "retargeted robot motion")->required();
  metrics->add_option("--partner-motion", ma.partner_motion, "adjusted partner motion (default: original)");
  metrics->add_option("--human", ma.human, "human skeleton preset or file");
  metrics->add_option("--robot", ma.robot, "robot skeleton preset or file");
  metrics->add_option("--tau", ma.taus, "contact threshold in m (repeatable)");

  auto* det = app.add_subcommand("detect", "task-success detection");
  add_common(det, common);
  det->add_option("--manifest", da.manifest, "episode manifest");
  det->add_option("--detection-config", da.detection_config, "detector thresholds JSON");
  det->add_option("--task", da.task, "task for a single episode");
  det->add_option("--human", da.human, "human agent motion or positions file");
  det->add_option("--robot", da.robot, "robot agent motion or positions file");

  auto* sched = app.add_subcommand("schedule", "replay anchor plans into a 50 Hz reference");
  add_common(sched, common);
  sched->add_option("--plans", plans, "anchor plan file")->required();

  auto* stdz = app.add_subcommand("standardize", "standardize preparation and follow-up phases");
  add_common(stdz, common);
  stdz->add_option("--motion", std_motion, "robot motion")->required();
  stdz->add_option("--phases", std_phases, "phase labels")->required();
  stdz->add_option("--skeleton", std_skeleton, "skeleton preset or file (default: from motion file)");

  auto* fit = app.add_subcommand("fit-shape", "fit human bone scales to a robot");
  add_common(fit, common);
  fit->add_option("--human", fit_human, "human skeleton preset or file")->default_val("smpl");
  fit->add_option("--robot", fit_robot, "robot skeleton preset or file")->default_val("g1");
  fit->add_option("--motion", fit_motion, "human motion to reshape");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    for (auto* sub : app.get_subcommands()) {
      if (auto* opt = sub->get_option_no_throw("--seed"); opt != nullptr) common.seed_given = opt->count() > 0;
    }
    if (retarget->parsed()) return run_retarget(common, ra);
    if (metrics->parsed()) return run_metrics(common, ma);
    if (det->parsed()) return run_detect(common, da);
    if (sched->parsed()) return run_schedule(common, plans);
    if (stdz->parsed()) return run_standardize(common, std_motion, std_phases, std_skeleton);
    if (fit->parsed()) return run_fit_shape(common, fit_human, fit_robot, fit_motion);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
