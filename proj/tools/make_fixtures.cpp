// Writes the bundled example inputs under the given directory:
//   identity/     SMPL pair retargeted onto the SMPL skeleton itself
//   handshake/    SMPL pair retargeted onto the 0.3 m shorter compact humanoid
//   retarget_manifest.json
//   detectors/    golden episodes as positions files, manifest, expected verdicts
//   scheduler/    constant and ramp anchor plans
//   standardize/  a g1 episode with phase labels

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "pair/fixtures/episodes.hpp"
#include "pair/fixtures/scenarios.hpp"
#include "pair/io/files.hpp"
#include "pair/kinematics/presets.hpp"
#include "pair/scheduler/scheduler.hpp"

namespace {

using namespace pair;
using namespace pair::io;

constexpr std::array<Role, 7> kEpisodeRoles{Role::kRoot,          Role::kTorso,    Role::kHead,    Role::kLeftShoulder,
                                            Role::kRightShoulder, Role::kLeftHand, Role::kRightHand};

PositionFile agent_file(const AgentTrack& a) {
  PositionFile p;
  p.positions = PositionSequence(a.frames(), kEpisodeRoles.size());
  for (std::size_t k = 0; k < kEpisodeRoles.size(); ++k) {
    p.joint_names.emplace_back(to_string(kEpisodeRoles[k]));
    p.roles[kEpisodeRoles[k]] = static_cast<int>(k);
    const auto& track = a.at(kEpisodeRoles[k]);
    for (std::size_t t = 0; t < track.size(); ++t) p.positions.at(t, k) = track[t];
  }
  return p;
}

void write_pair(const fs::path& dir, const fixtures::InteractionScenario& sc) {
  save_motion(dir / "source.json", sc.source);
  save_motion(dir / "partner.json", sc.partner);
}

void write_detectors(const fs::path& dir) {
  Json episodes = Json::array();
  Json expected = Json::object();
  for (const auto& g : fixtures::golden_episodes()) {
    const Episode& e = g.episode;
    write_json(dir / (e.id + "_human.json"), positions_json(agent_file(e.human)));
    write_json(dir / (e.id + "_robot.json"), positions_json(agent_file(e.robot)));
    episodes.push_back({{"id", e.id},
                        {"task", std::string(to_string(e.task))},
                        {"condition", e.condition},
                        {"partner", e.id + "_human.json"},
                        {"robot", e.id + "_robot.json"}});
    expected[e.id] = {{"success", g.expected}, {"trace", g.trace}};
  }
  write_json(dir / "manifest.json", {{"version", 1}, {"episodes", episodes}});
  write_json(dir / "expected.json", expected);
}

Reference standing_reference(double x, double yaw) {
  Reference r{};
  r[kTranslationOffset] = x;
  r[kTranslationOffset + 2] = 0.75;
  r[kQuatOffset] = std::cos(yaw / 2.0);
  r[kQuatOffset + 3] = std::sin(yaw / 2.0);
  return r;
}

void write_scheduler(const fs::path& dir) {
  AnchorPlan constant;
  for (auto& a : constant.anchors) a = standing_reference(0.0, 0.0);
  write_json(dir / "constant_plans.json", {{"plans", Json::array({plan_json(constant)})}});

  // Two overlapping plans walking forward at 0.4 m/s, the second issued 0.5 s later.
  Json plans = Json::array();
  for (int p = 0; p < 2; ++p) {
    AnchorPlan plan;
    plan.call_time = 0.5 * p;
    for (std::size_t k = 0; k < 5; ++k) {
      const double t = plan.call_time + kAnchorOffsets[k];
      plan.anchors[k] = standing_reference(0.4 * t, 0.0);
      plan.anchors[k][3] = 0.5 * std::sin(t);  // left knee
    }
    plans.push_back(plan_json(plan));
  }
  write_json(dir / "ramp_plans.json", {{"plans", plans}});
}

void write_standardize(const fs::path& dir) {
  const Skeleton g1 = g1_like_skeleton();
  constexpr std::size_t prep = 20;
  constexpr std::size_t act = 30;
  constexpr std::size_t follow = 20;
  MotionSequence m;
  m.skeleton_id = "g1";
  Json labels = Json::array();
  for (std::size_t t = 0; t < prep + act + follow; ++t) {
    FramePose f;
    f.root_pos = {0.01 * static_cast<double>(t), 0.0, 0.75};
    f.root_quat = {1.0, 0.0, 0.0, 0.0};
    f.joint_params.assign(static_cast<std::size_t>(g1.dof_count()), 0.0);
    const double s = std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 35.0);
    f.joint_params[static_cast<std::size_t>(g1.param_offset(g1.joint_index("right_shoulder_pitch_link")))] = -1.0 + 0.2 * s;
    f.joint_params[static_cast<std::size_t>(g1.param_offset(g1.joint_index("right_elbow_link")))] = 0.5 + 0.1 * s;
    f.joint_params[static_cast<std::size_t>(g1.param_offset(g1.joint_index("left_knee_link")))] = 0.3 + 0.05 * s;
    m.frames.push_back(std::move(f));
    labels.push_back(t < prep ? "preparation" : (t < prep + act ? "act" : "follow_up"));
  }
  save_motion(dir / "motion.json", m);
  write_json(dir / "phases.json", {{"labels", labels}});
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 2;
  }
  try {
    const fs::path root = argv[1];
    write_pair(root / "identity", fixtures::make_identity_scenario());
    write_pair(root / "handshake", fixtures::make_handshake_scenario());
    Json episodes = Json::array({
        {{"id", "identity"}, {"source", "identity/source.json"}, {"partner", "identity/partner.json"},
         {"robot_skeleton", "smpl"}},
        {{"id", "handshake"}, {"task", "handshake"}, {"source", "handshake/source.json"},
         {"partner", "handshake/partner.json"}, {"robot_skeleton", "compact"}},
    });
    write_json(root / "retarget_manifest.json", {{"version", 1}, {"episodes", episodes}});
    write_detectors(root / "detectors");
    write_scheduler(root / "scheduler");
    write_standardize(root / "standardize");
  } catch (const std::exception& e) {
    std::cerr << "make_fixtures: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
