#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pair/fixtures/scenarios.hpp"
#include "pair/io/files.hpp"
#include "pair/io/pipeline.hpp"
#include "pair/kinematics/presets.hpp"

namespace {

using namespace pair;
using namespace pair::io;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path(PAIR_TEST_TMP) / "io" / name;
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

Json one_frame_motion() {
  return {{"version", 1},
          {"fps", 30.0},
          {"skeleton", "smpl"},
          {"frames", Json::array({{{"root_pos", {0.0, 0.0, 0.9}},
                                   {"root_quat", {1.0, 0.0, 0.0, 0.0}},
                                   {"joint_params", std::vector<double>(3, 0.1)}}})}};
}

TEST(Motion, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  MotionSequence m;
  m.skeleton_id = "smpl";
  m.fps = 30.0;
  for (int t = 0; t < 5; ++t) {
    FramePose f;
    f.root_pos = {u(rng), u(rng), u(rng)};
    f.root_quat = quat_from_yaw(u(rng));
    for (int i = 0; i < 7; ++i) f.joint_params.push_back(u(rng) * 1e-3);
    m.frames.push_back(f);
  }
  const fs::path dir = scratch("roundtrip");
  save_motion(dir / "m.json", m);
  const LoadedMotion back = load_motion(dir / "m.json");
  EXPECT_TRUE(back.warnings.empty());
  ASSERT_EQ(back.motion.frames.size(), m.frames.size());
  for (std::size_t t = 0; t < m.frames.size(); ++t) {
    const auto& a = m.frames[t];
    const auto& b = back.motion.frames[t];
    EXPECT_NEAR(a.root_pos.x, b.root_pos.x, 1e-12);
    EXPECT_NEAR(a.root_pos.z, b.root_pos.z, 1e-12);
    EXPECT_NEAR(a.root_quat.w, b.root_quat.w, 1e-12);
    EXPECT_NEAR(a.root_quat.z, b.root_quat.z, 1e-12);
    for (std::size_t i = 0; i < a.joint_params.size(); ++i) EXPECT_NEAR(a.joint_params[i], b.joint_params[i], 1e-12);
  }
  // A second save of the loaded motion is byte-identical.
  save_motion(dir / "m2.json", back.motion);
  EXPECT_EQ(slurp(dir / "m.json"), slurp(dir / "m2.json"));
}

TEST(Motion, SlightlyNonUnitQuaternionIsRenormalized) {
  Json j = one_frame_motion();
  j["frames"][0]["root_quat"] = {0.999, 0.0, 0.0, 0.0};
  const LoadedMotion m = motion_from(j);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("frame 0"), std::string::npos);
  EXPECT_NEAR(m.motion.frames[0].root_quat.norm(), 1.0, 1e-4);
  EXPECT_EQ(m.motion.frames[0].root_quat.w, 1.0);
  j["frames"][0]["root_quat"] = {0.5, 0.0, 0.0, 0.0};
  EXPECT_THROW(motion_from(j), InputError);
}

TEST(Motion, ErrorsNameTheProblem) {
  Json missing = one_frame_motion();
  missing["frames"].push_back(missing["frames"][0]);
  missing["frames"][1].erase("joint_params");
  try {
    motion_from(missing);
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("frame 1"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("joint_params"), std::string::npos) << e.what();
  }
  Json unknown = one_frame_motion();
  unknown["colour"] = "red";
  try {
    motion_from(unknown);
    FAIL() << "expected an input error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
  Json nonfinite = one_frame_motion();
  nonfinite["frames"][0]["root_pos"] = {0.0, "x", 0.0};
  EXPECT_THROW(motion_from(nonfinite), InputError);
  Json version = one_frame_motion();
  version["version"] = 2;
  EXPECT_THROW(motion_from(version), InputError);
}

TEST(Skeleton, JsonRoundTrip) {
  for (const Skeleton& s : {smpl_like_skeleton(), g1_like_skeleton(), fixtures::compact_humanoid_skeleton()}) {
    const Skeleton back = skeleton_from(skeleton_json(s));
    EXPECT_EQ(back.name(), s.name());
    ASSERT_EQ(back.joint_count(), s.joint_count());
    EXPECT_EQ(back.dof_count(), s.dof_count());
    EXPECT_EQ(skeleton_json(back), skeleton_json(s));
  }
  EXPECT_THROW(resolve_skeleton("no_such_preset"), InputError);
}

TEST(Manifest, ValidatesIdsAndFiles) {
  const fs::path dir = scratch("manifest");
  write_json(dir / "a.json", one_frame_motion());
  const Json ep = {{"id", "x"}, {"source", "a.json"}, {"partner", "a.json"}};
  const RunManifest ok = manifest_from({{"version", 1}, {"episodes", {ep}}}, dir);
  ASSERT_EQ(ok.episodes.size(), 1u);
  EXPECT_EQ(ok.episodes[0].source, dir / "a.json");
  EXPECT_EQ(ok.episodes[0].condition, "default");
  EXPECT_THROW(manifest_from({{"episodes", {ep, ep}}}, dir), InputError);
  Json gone = ep;
  gone["partner"] = "missing.json";
  EXPECT_THROW(manifest_from({{"episodes", {gone}}}, dir), InputError);
  Json bad_task = ep;
  bad_task["task"] = "juggle";
  EXPECT_THROW(manifest_from({{"episodes", {bad_task}}}, dir), InputError);
  Json bad_config = ep;
  bad_config["config"] = {{"no_such_knob", 1}};
  EXPECT_THROW(manifest_from({{"episodes", {bad_config}}}, dir), InputError);
}

TEST(Config, HashIsStableAndSensitive) {
  RetargetConfig c;
  const Json a = config_json(c);
  EXPECT_EQ(config_hash(a), config_hash(config_json(RetargetConfig{})));
  EXPECT_EQ(config_hash(a).size(), 16u);
  RetargetConfig d;
  apply_config({{"seed", 7}}, d);
  EXPECT_EQ(d.seed, 7u);
  EXPECT_NE(config_hash(config_json(d)), config_hash(a));
  // Round-tripping the dump through the applier reproduces it.
  RetargetConfig e;
  apply_config(a, e);
  EXPECT_EQ(config_json(e), a);
  DetectionConfig dc;
  apply_detection_config(detection_config_json(dc), dc);
  EXPECT_EQ(detection_config_json(dc), detection_config_json(DetectionConfig{}));
  EXPECT_THROW(apply_detection_config({{"wave", {{"speed", 1}}}}, dc), InputError);
}

TEST(Csv, SchemasAndFormatting) {
  std::vector<TraceEntry> trace(1);
  trace[0].iteration = 3;
  trace[0].stage = 2;
  trace[0].loss.total = 0.5;
  const std::string t = loss_trace_csv(trace);
  EXPECT_EQ(t.substr(0, t.find('\n')), "iteration,total,kin,con,hum,temp,pose,stage");
  EXPECT_NE(t.find("\n3,0.5,"), std::string::npos);
  EXPECT_EQ(success_rates_csv({{"wave", "golden", 4, 1}}), "task,condition,n,successes,rate\nwave,golden,4,1,0.25\n");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Fixtures, BundledFilesRegenerateByteIdentically) {
  const fs::path out = scratch("fixtures");
  const std::string cmd = std::string("\"") + PAIR_MAKE_FIXTURES_PATH + "\" \"" + out.string() + "\"";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  const fs::path bundled = PAIR_FIXTURE_DIR;
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), out);
    ASSERT_TRUE(fs::exists(bundled / rel)) << rel;
    EXPECT_EQ(slurp(entry.path()), slurp(bundled / rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 40u);
}

TEST(Fixtures, GoldenPositionFilesLoadAsAgents) {
  const fs::path dir = fs::path(PAIR_FIXTURE_DIR) / "detectors";
  const RunManifest m = load_manifest(dir / "manifest.json");
  const Json expected = read_json(dir / "expected.json");
  ASSERT_EQ(m.episodes.size(), expected.size());
  for (const auto& ep : m.episodes) {
    const auto o = detect(*ep.task, load_agent(ep.partner), load_agent(ep.robot));
    EXPECT_EQ(o.success, expected.at(ep.id).at("success").get<bool>()) << ep.id;
  }
}

}  // namespace
