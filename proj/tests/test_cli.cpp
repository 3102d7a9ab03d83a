#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pair/io/files.hpp"

namespace {

using namespace pair;
using namespace pair::io;

const fs::path kFixtures = PAIR_FIXTURE_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(PAIR_TEST_TMP) / "cli" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + PAIR_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

std::vector<std::vector<std::string>> csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, ExitCodesForBadInput) {
  const fs::path dir = scratch("exit");
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("retarget --no-such-flag"), 2);
  write_text(dir / "bad.json", "{ not json");
  EXPECT_EQ(run("retarget --config " + q(dir / "bad.json") + " --source " + q(kFixtures / "identity/source.json") +
                " --partner " + q(kFixtures / "identity/partner.json") + " --out-dir " + q(dir)),
            2);
  write_json(dir / "unknown.json", {{"w_kinn", 1.0}});
  EXPECT_EQ(run("retarget --config " + q(dir / "unknown.json") + " --source " + q(kFixtures / "identity/source.json") +
                " --partner " + q(kFixtures / "identity/partner.json") + " --out-dir " + q(dir)),
            2);
  EXPECT_EQ(run("schedule --plans " + q(dir / "missing.json") + " --out-dir " + q(dir)), 2);
  EXPECT_EQ(run("retarget --stage2-only --source " + q(kFixtures / "identity/source.json") + " --partner " +
                q(kFixtures / "identity/partner.json") + " --out-dir " + q(dir)),
            2);
}

TEST(Cli, DetectGoldenManifest) {
  const fs::path dir = scratch("detect");
  ASSERT_EQ(run("detect --manifest " + q(kFixtures / "detectors/manifest.json") + " --out-dir " + q(dir)), 0);
  const Json expected = read_json(kFixtures / "detectors/expected.json");
  const Json got = read_json(dir / "detections.json");
  ASSERT_EQ(got.at("episodes").size(), expected.size());
  for (const auto& e : got.at("episodes")) {
    EXPECT_EQ(e.at("success"), expected.at(e.at("id").get<std::string>()).at("success")) << e.at("id");
  }
  const auto rows = csv(dir / "success_rates.csv");
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"task", "condition", "n", "successes", "rate"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::size_t n = 0;
    std::size_t s = 0;
    for (const auto& [id, v] : expected.items()) {
      if (id.rfind(rows[i][0] + "_", 0) != 0) continue;
      ++n;
      if (v.at("success").get<bool>()) ++s;
    }
    EXPECT_EQ(std::stoul(rows[i][2]), n) << rows[i][0];
    EXPECT_EQ(std::stoul(rows[i][3]), s) << rows[i][0];
  }
}

TEST(Cli, MetricsOnIdentityPairArePerfect) {
  const fs::path dir = scratch("metrics");
  ASSERT_EQ(run("metrics --source " + q(kFixtures / "identity/source.json") + " --partner " +
                q(kFixtures / "identity/partner.json") + " --robot-motion " + q(kFixtures / "identity/source.json") +
                " --robot smpl --out-dir " + q(dir)),
            0);
  const auto rows = csv(dir / "metrics.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0][4], "f1");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stod(rows[i][4]), 1.0) << "tau " << rows[i][1];
    EXPECT_EQ(std::stod(rows[i][10]), 0.0);  // jpe
    EXPECT_EQ(std::stod(rows[i][11]), 0.0);  // awd
  }
}

TEST(Cli, ScheduleConstantPlanIsConstant) {
  const fs::path dir = scratch("schedule");
  ASSERT_EQ(run("schedule --plans " + q(kFixtures / "scheduler/constant_plans.json") + " --out-dir " + q(dir)), 0);
  const auto m = load_motion(dir / "reference_motion.json").motion;
  ASSERT_EQ(m.frames.size(), 100u);
  for (const auto& f : m.frames) {
    EXPECT_EQ(f.joint_params, m.frames[0].joint_params);
    EXPECT_EQ(f.root_pos.z, 0.75);
    EXPECT_EQ(f.root_quat.w, 1.0);
  }
  ASSERT_EQ(run("schedule --plans " + q(kFixtures / "scheduler/ramp_plans.json") + " --out-dir " + q(dir)), 0);
  EXPECT_EQ(load_motion(dir / "reference_motion.json").motion.frames.size(), 125u);
}

TEST(Cli, StandardizeKeepsAct) {
  const fs::path dir = scratch("standardize");
  ASSERT_EQ(run("standardize --motion " + q(kFixtures / "standardize/motion.json") + " --phases " +
                q(kFixtures / "standardize/phases.json") + " --out-dir " + q(dir)),
            0);
  const auto in = load_motion(kFixtures / "standardize/motion.json").motion;
  const auto out = load_motion(dir / "standardized_motion.json").motion;
  ASSERT_EQ(in.frames.size(), out.frames.size());
  for (std::size_t t = 20; t < 50; ++t) EXPECT_EQ(in.frames[t].joint_params, out.frames[t].joint_params);
}

TEST(Cli, FitShapeOnIdentity) {
  const fs::path dir = scratch("fit");
  ASSERT_EQ(run("fit-shape --human smpl --robot smpl --out-dir " + q(dir)), 0);
  const Json fit = read_json(dir / "morphology_fit.json");
  EXPECT_NEAR(fit.at("fit").at("global_scale").get<double>(), 1.0, 1e-9);
}

// Short schedule keeps the pipeline checks quick.
void write_short_config(const fs::path& p) {
  write_json(p, {{"stage1", {{"iterations", 20}}}, {"stage2", {{"iterations", 10}}}});
}

TEST(Cli, RetargetWritesOutputsAndStage2ReproducesTail) {
  const fs::path dir = scratch("retarget");
  write_short_config(dir / "short.json");
  const std::string inputs = " --source " + q(kFixtures / "handshake/source.json") + " --partner " +
                             q(kFixtures / "handshake/partner.json") + " --robot compact --config " +
                             q(dir / "short.json");
  ASSERT_EQ(run("retarget" + inputs + " --out-dir " + q(dir / "full")), 0);
  for (const char* f : {"robot_motion.json", "partner_motion.json", "loss_trace.csv", "stage1_state.json",
                        "report.json", "metrics.csv"}) {
    EXPECT_TRUE(fs::exists(dir / "full" / f)) << f;
  }
  const auto trace = csv(dir / "full/loss_trace.csv");
  ASSERT_EQ(trace.size(), 31u);
  EXPECT_EQ(trace[20][7], "1");
  EXPECT_EQ(trace[21][7], "2");
  const Json report = read_json(dir / "full/report.json");
  EXPECT_EQ(report.at("provenance").at("seed"), 42);
  EXPECT_EQ(report.at("provenance").at("config_hash").get<std::string>().size(), 16u);

  ASSERT_EQ(run("retarget --stage2-only --warm-start " + q(dir / "full/stage1_state.json") + inputs + " --out-dir " +
                q(dir / "tail")),
            0);
  EXPECT_EQ(slurp(dir / "full/robot_motion.json"), slurp(dir / "tail/robot_motion.json"));
  EXPECT_EQ(slurp(dir / "full/partner_motion.json"), slurp(dir / "tail/partner_motion.json"));
  const auto tail = csv(dir / "tail/loss_trace.csv");
  ASSERT_EQ(tail.size(), 11u);
  for (std::size_t i = 1; i < tail.size(); ++i) EXPECT_EQ(tail[i], trace[20 + i]) << "row " << i;
}

TEST(Cli, ManifestRunIsIndependentOfJobs) {
  const fs::path dir = scratch("manifest");
  write_short_config(dir / "short.json");
  const std::string base = "retarget --manifest " + q(kFixtures / "retarget_manifest.json") + " --config " +
                           q(dir / "short.json");
  ASSERT_EQ(run(base + " --jobs 1 --out-dir " + q(dir / "serial")), 0);
  ASSERT_EQ(run(base + " --jobs 2 --out-dir " + q(dir / "parallel")), 0);
  EXPECT_EQ(slurp(dir / "serial/metrics.csv"), slurp(dir / "parallel/metrics.csv"));
  for (const char* id : {"identity", "handshake"}) {
    EXPECT_EQ(slurp(dir / "serial" / id / "robot_motion.json"), slurp(dir / "parallel" / id / "robot_motion.json"));
  }
}

}  // namespace
