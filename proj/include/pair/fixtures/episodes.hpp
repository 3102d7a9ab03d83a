#pragma once

// Hand-constructed detector episodes with hand-traced expected verdicts
// under the default thresholds. Geometry (metres, z up):
//   human root (0, 0, 0.9), head (0, 0, 1.5), hands at rest (0, +-0.25, 0.6)
//   robot root (1, 0, 0.75), torso (1, 0, 1.0), shoulders (1, +-0.2, 1.2),
//   head (1, 0, 1.3), hands at rest (1, +-0.2, 0.55)

#include <cmath>
#include <string>
#include <vector>

#include "pair/detectors/detectors.hpp"

namespace pair::fixtures {

struct GoldenEpisode {
  Episode episode;
  bool expected = false;
  std::string trace;  // why the verdict holds
};

namespace detail {

inline AgentTrack resting_human(std::size_t frames) {
  AgentTrack a;
  a.joints[Role::kRoot].assign(frames, {0.0, 0.0, 0.9});
  a.joints[Role::kTorso].assign(frames, {0.0, 0.0, 1.15});
  a.joints[Role::kHead].assign(frames, {0.0, 0.0, 1.5});
  a.joints[Role::kLeftShoulder].assign(frames, {0.0, 0.2, 1.35});
  a.joints[Role::kRightShoulder].assign(frames, {0.0, -0.2, 1.35});
  a.joints[Role::kLeftHand].assign(frames, {0.0, 0.25, 0.6});
  a.joints[Role::kRightHand].assign(frames, {0.0, -0.25, 0.6});
  return a;
}

inline AgentTrack resting_robot(std::size_t frames) {
  AgentTrack a;
  a.joints[Role::kRoot].assign(frames, {1.0, 0.0, 0.75});
  a.joints[Role::kTorso].assign(frames, {1.0, 0.0, 1.0});
  a.joints[Role::kHead].assign(frames, {1.0, 0.0, 1.3});
  a.joints[Role::kLeftShoulder].assign(frames, {1.0, 0.2, 1.2});
  a.joints[Role::kRightShoulder].assign(frames, {1.0, -0.2, 1.2});
  a.joints[Role::kLeftHand].assign(frames, {1.0, 0.2, 0.55});
  a.joints[Role::kRightHand].assign(frames, {1.0, -0.2, 0.55});
  return a;
}

inline void set_frames(std::vector<Vec3d>& track, const std::vector<std::size_t>& frames, const Vec3d& p) {
  for (std::size_t t : frames) track.at(t) = p;
}

inline std::vector<std::size_t> range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t t = begin; t < end; ++t) out.push_back(t);
  return out;
}

inline GoldenEpisode make(std::string id, Task task, AgentTrack human, AgentTrack robot, bool expected,
                          std::string trace) {
  return {{std::move(id), task, "golden", std::move(human), std::move(robot)}, expected, std::move(trace)};
}

// Triangle wave along y: `legs` legs of 8 steps of `step`, starting at -4 * step.
inline std::vector<Vec3d> triangle_wave(int legs, double step, double x, double z) {
  std::vector<Vec3d> out;
  int k = 0;
  int dir = 1;
  out.push_back({x, -4.0 * step, z});
  for (int leg = 0; leg < legs; ++leg) {
    for (int s = 0; s < 8; ++s) {
      k += dir;
      out.push_back({x, -4.0 * step + step * static_cast<double>(k), z});
    }
    dir = -dir;
  }
  return out;
}

inline Vec3d bent_head(double angle) { return {0.6 * std::sin(angle), 0.0, 0.9 + 0.6 * std::cos(angle)}; }

}  // namespace detail

inline std::vector<GoldenEpisode> hug_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  constexpr std::size_t n = 10;
  {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kLeftHand], range(0, n), {0.85, 0.1, 1.0});
    set_frames(h.joints[Role::kRightHand], range(0, n), {0.85, -0.1, 1.0});
    out.push_back(make("hug_pos_double", Task::kHug, h, resting_robot(n), true,
                       "hands 0.2 apart, each 0.18 from torso, 10 frames"));
  }
  {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kLeftHand], range(3, 7), {0.8, 0.1, 1.0});
    out.push_back(make("hug_pos_single", Task::kHug, h, resting_robot(n), true,
                       "left hand 0.22 from torso for 4 frames, right hand at rest"));
  }
  {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kLeftHand], range(4, 7), {1.0, 0.55, 1.3});
    out.push_back(make("hug_pos_shoulder", Task::kHug, h, resting_robot(n), true,
                       "left hand 0.36 from robot left shoulder, 0.63 from torso, exactly 3 frames"));
  }
  out.push_back(make("hug_neg_rest", Task::kHug, resting_human(n), resting_robot(n), false,
                     "hands at rest, about 1 m from every robot reference"));
  {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kLeftHand], {2, 3, 6, 7}, {0.85, 0.1, 1.0});
    set_frames(h.joints[Role::kRightHand], {2, 3, 6, 7}, {0.85, -0.1, 1.0});
    out.push_back(make("hug_neg_broken", Task::kHug, h, resting_robot(n), false,
                       "embrace in two 2-frame runs; longest run 2 < 3"));
  }
  {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kLeftHand], range(0, n), {0.4, 0.1, 1.0});
    set_frames(h.joints[Role::kRightHand], range(0, n), {0.4, -0.1, 1.0});
    out.push_back(make("hug_neg_short_reach", Task::kHug, h, resting_robot(n), false,
                       "hands together but 0.61 from torso and 0.64 from shoulders"));
  }
  return out;
}

inline std::vector<GoldenEpisode> handshake_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  constexpr std::size_t n = 20;
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(5, 17), {0.45, -0.1, 1.0});
    set_frames(r.joints[Role::kRightHand], range(5, 17), {0.5, -0.1, 1.0});
    out.push_back(make("handshake_pos_steady", Task::kHandshake, h, r, true,
                       "12 frames at 0.05 m, robot hand 0.52 from human root, std 0"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    for (std::size_t t = 5; t < 15; ++t) {
      h.joints[Role::kRightHand][t] = {0.45, -0.1, 1.0};
      r.joints[Role::kRightHand][t] = {t % 2 == 0 ? 0.5 : 0.6, -0.1, 1.0};
    }
    out.push_back(make("handshake_pos_minimal", Task::kHandshake, h, r, true,
                       "exactly 10 frames alternating 0.05/0.15 m: mean 0.1, std 0.05"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kLeftHand], range(2, 14), {0.45, 0.1, 1.0});
    set_frames(r.joints[Role::kLeftHand], range(2, 14), {0.55, 0.1, 1.0});
    out.push_back(make("handshake_pos_left", Task::kHandshake, h, r, true,
                       "left-left pair at 0.1 m for 12 frames; robot hand 0.56 from root"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(5, 14), {0.45, -0.1, 1.0});
    set_frames(r.joints[Role::kRightHand], range(5, 14), {0.5, -0.1, 1.0});
    out.push_back(make("handshake_neg_brief", Task::kHandshake, h, r, false, "9 contact frames < 10"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(4, 16), {0.15, -0.1, 0.95});
    set_frames(r.joints[Role::kRightHand], range(4, 16), {0.2, -0.1, 0.95});
    out.push_back(make("handshake_neg_too_close", Task::kHandshake, h, r, false,
                       "12 contact frames but robot hand 0.23 from human root < 0.4"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    auto frames = range(2, 8);
    for (std::size_t t = 12; t < 18; ++t) frames.push_back(t);
    set_frames(h.joints[Role::kRightHand], frames, {0.45, -0.1, 1.0});
    set_frames(r.joints[Role::kRightHand], frames, {0.5, -0.1, 1.0});
    out.push_back(make("handshake_neg_interrupted", Task::kHandshake, h, r, false,
                       "12 valid frames in two runs of 6; longest run 6 < 10"));
  }
  return out;
}

inline std::vector<GoldenEpisode> highfive_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  constexpr std::size_t n = 20;
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(8, 11), {0.45, -0.1, 1.5});
    set_frames(r.joints[Role::kLeftHand], range(8, 11), {0.55, -0.1, 1.5});
    out.push_back(make("highfive_pos_brief", Task::kHighFive, h, r, true,
                       "3 frames at 0.1 m, both hands 0.6 above root"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kLeftHand], {10}, {0.45, 0.1, 1.3});
    set_frames(r.joints[Role::kRightHand], {10}, {0.6, 0.1, 1.3});
    out.push_back(make("highfive_pos_single_frame", Task::kHighFive, h, r, true,
                       "one frame at 0.15 m, both hands 0.4 above root"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(0, n), {0.45, -0.1, 1.5});
    set_frames(r.joints[Role::kLeftHand], range(0, n), {0.55, -0.1, 1.5});
    out.push_back(make("highfive_pos_held", Task::kHighFive, h, r, true,
                       "contact for all 20 frames, well under the 1000-frame cap"));
  }
  out.push_back(make("highfive_neg_rest", Task::kHighFive, resting_human(n), resting_robot(n), false,
                     "closest hands about 1 m apart"));
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(8, 13), {0.45, -0.1, 1.0});
    set_frames(r.joints[Role::kLeftHand], range(8, 13), {0.55, -0.1, 1.0});
    out.push_back(make("highfive_neg_low", Task::kHighFive, h, r, false,
                       "contact at 0.1 m but hands only 0.1 above root"));
  }
  {
    AgentTrack h = resting_human(n);
    AgentTrack r = resting_robot(n);
    set_frames(h.joints[Role::kRightHand], range(8, 13), {0.45, -0.1, 1.3});
    set_frames(r.joints[Role::kLeftHand], range(8, 13), {0.5, -0.1, 1.05});
    out.push_back(make("highfive_neg_robot_low", Task::kHighFive, h, r, false,
                       "human hand 0.4 above root, robot hand only 0.15 above"));
  }
  return out;
}

inline std::vector<GoldenEpisode> wave_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  auto with_hand = [](Role hand, std::vector<Vec3d> track) {
    AgentTrack h = resting_human(track.size());
    h.joints[hand] = std::move(track);
    return h;
  };
  auto robot = [](const AgentTrack& h) { return resting_robot(h.frames()); };
  {
    AgentTrack h = with_hand(Role::kRightHand, triangle_wave(5, 0.05, 0.2, 1.5));
    out.push_back(make("wave_pos_right", Task::kWave, h, robot(h), true,
                       "5 legs of 0.4 m at 0.6 above root: path 2.0, 4 reversals, amplitude 0.4"));
  }
  {
    AgentTrack h = with_hand(Role::kLeftHand, triangle_wave(5, 0.05, 0.2, 1.5));
    out.push_back(make("wave_pos_left", Task::kWave, h, robot(h), true, "same wave on the left hand"));
  }
  {
    AgentTrack h = with_hand(Role::kRightHand, triangle_wave(4, 0.05, 0.2, 1.4));
    out.push_back(make("wave_pos_three_changes", Task::kWave, h, robot(h), true,
                       "4 legs: exactly 3 reversals, path 1.6, height 0.5"));
  }
  {
    AgentTrack h = with_hand(Role::kRightHand, triangle_wave(3, 0.05, 0.2, 1.5));
    out.push_back(make("wave_neg_two_changes", Task::kWave, h, robot(h), false, "3 legs: 2 reversals < 3"));
  }
  {
    AgentTrack h = with_hand(Role::kRightHand, triangle_wave(8, 0.025, 0.2, 1.5));
    out.push_back(make("wave_neg_small", Task::kWave, h, robot(h), false,
                       "7 reversals and path 1.6 but amplitude 0.2 < 0.3"));
  }
  {
    AgentTrack h = with_hand(Role::kRightHand, triangle_wave(5, 0.05, 0.2, 1.2));
    out.push_back(make("wave_neg_low", Task::kWave, h, robot(h), false,
                       "full wave but hand only 0.3 above root < 0.45"));
  }
  return out;
}

inline std::vector<GoldenEpisode> bend_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  constexpr std::size_t n = 20;
  auto bent = [](const std::vector<std::size_t>& frames, double angle) {
    AgentTrack h = resting_human(n);
    set_frames(h.joints[Role::kHead], frames, bent_head(angle));
    return h;
  };
  out.push_back(make("bend_pos_deep", Task::kBend, bent(range(5, 15), 0.8), resting_robot(n), true,
                     "0.8 rad for 10 frames"));
  out.push_back(make("bend_pos_minimal", Task::kBend, bent(range(5, 10), 0.6), resting_robot(n), true,
                     "0.6 rad for exactly 5 frames"));
  out.push_back(make("bend_pos_scattered", Task::kBend, bent({2, 5, 8, 11, 14}, 0.7), resting_robot(n), true,
                     "0.7 rad in 5 non-consecutive frames"));
  out.push_back(make("bend_neg_upright", Task::kBend, resting_human(n), resting_robot(n), false, "angle 0"));
  out.push_back(make("bend_neg_shallow", Task::kBend, bent(range(2, 17), 0.45), resting_robot(n), false,
                     "0.45 rad < pi/6 for 15 frames"));
  out.push_back(make("bend_neg_brief", Task::kBend, bent(range(5, 9), 0.8), resting_robot(n), false,
                     "0.8 rad for only 4 frames"));
  return out;
}

inline std::vector<GoldenEpisode> flykiss_episodes() {
  using namespace detail;
  std::vector<GoldenEpisode> out;
  constexpr std::size_t n = 20;
  // Hand held at `start` for frames [0, 5), then `steps` moves of `dx` along +x, then held.
  auto kiss = [](Role hand, Vec3d start, int steps, double dx) {
    AgentTrack h = resting_human(n);
    auto& track = h.joints[hand];
    Vec3d p = start;
    for (std::size_t t = 0; t < n; ++t) {
      if (t >= 5 && static_cast<int>(t) < 5 + steps) p.x += dx;
      track[t] = p;
    }
    return h;
  };
  AgentTrack robot = resting_robot(n);
  robot.joints[Role::kRoot].assign(n, {1.5, 0.0, 0.75});
  out.push_back(make("flykiss_pos_right", Task::kFlyKiss, kiss(Role::kRightHand, {0.1, -0.05, 1.5}, 8, 0.05), robot,
                     true, "hand 0.11 from head, then 8 forward steps totalling 0.4 m"));
  out.push_back(make("flykiss_pos_left", Task::kFlyKiss, kiss(Role::kLeftHand, {0.1, 0.05, 1.5}, 5, 0.03), robot,
                     true, "left hand, exactly 5 forward steps totalling 0.15 m"));
  out.push_back(make("flykiss_pos_reach", Task::kFlyKiss, kiss(Role::kRightHand, {0.2, -0.1, 1.4}, 6, 0.04), robot,
                     true, "hand 0.24 from head, 6 forward steps totalling 0.24 m"));
  out.push_back(make("flykiss_neg_no_touch", Task::kFlyKiss, kiss(Role::kRightHand, {0.1, -0.2, 1.1}, 8, 0.05), robot,
                     false, "hand never closer than 0.45 m to the head"));
  out.push_back(make("flykiss_neg_backward", Task::kFlyKiss, kiss(Role::kRightHand, {0.1, -0.05, 1.5}, 8, -0.05),
                     robot, false, "hand moves away from the robot"));
  out.push_back(make("flykiss_neg_short_push", Task::kFlyKiss, kiss(Role::kRightHand, {0.1, -0.05, 1.5}, 4, 0.1),
                     robot, false, "4 forward steps < 5 despite 0.4 m travelled"));
  out.push_back(make("flykiss_neg_tiny_push", Task::kFlyKiss, kiss(Role::kRightHand, {0.1, -0.05, 1.5}, 6, 0.01),
                     robot, false, "6 forward steps but only 0.06 m"));
  return out;
}

inline std::vector<GoldenEpisode> golden_episodes() {
  std::vector<GoldenEpisode> out;
  for (auto* make_set : {&hug_episodes, &handshake_episodes, &highfive_episodes, &wave_episodes, &bend_episodes,
                         &flykiss_episodes}) {
    auto set = make_set();
    out.insert(out.end(), std::make_move_iterator(set.begin()), std::make_move_iterator(set.end()));
  }
  return out;
}

}  // namespace pair::fixtures
