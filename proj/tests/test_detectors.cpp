#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "pair/detectors/detectors.hpp"
#include "pair/fixtures/episodes.hpp"

namespace {

using namespace pair;

// Human at the origin facing +x, robot 1 m ahead facing back; hands at rest.
AgentTrack human_at_rest(std::size_t n) {
  AgentTrack a;
  const std::map<Role, Vec3d> rest{{Role::kRoot, {0, 0, 0.9}},           {Role::kTorso, {0, 0, 1.2}},
                                   {Role::kHead, {0, 0, 1.6}},           {Role::kLeftShoulder, {0, 0.2, 1.4}},
                                   {Role::kRightShoulder, {0, -0.2, 1.4}}, {Role::kLeftHand, {0, 0.25, 0.8}},
                                   {Role::kRightHand, {0, -0.25, 0.8}}};
  for (const auto& [r, p] : rest) a.joints[r] = std::vector<Vec3d>(n, p);
  return a;
}

AgentTrack robot_at_rest(std::size_t n) {
  AgentTrack a = human_at_rest(n);
  for (auto& [r, track] : a.joints) {
    for (auto& p : track) p = Vec3d{1.0 - p.x, -p.y, p.z - 0.15};
  }
  return a;
}

void fill(std::vector<Vec3d>& track, std::size_t begin, std::size_t end, const Vec3d& p) {
  for (std::size_t t = begin; t < end; ++t) track[t] = p;
}

TEST(Golden, EveryEpisodeMatchesItsTrace) {
  std::map<Task, std::pair<int, int>> counts;
  for (const auto& g : fixtures::golden_episodes()) {
    const auto o = detect(g.episode);
    EXPECT_EQ(o.success, g.expected) << g.episode.id << ": " << g.trace;
    EXPECT_EQ(o.success, recompute_success(o)) << g.episode.id;
    (g.expected ? counts[g.episode.task].first : counts[g.episode.task].second)++;
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [task, c] : counts) {
    EXPECT_GE(c.first, 3) << to_string(task);
    EXPECT_GE(c.second, 3) << to_string(task);
  }
}

TEST(RunLength, Examples) {
  EXPECT_EQ(max_consecutive_frames({false, false, false}), 0);
  EXPECT_EQ(max_consecutive_frames({true, true, false, true, true}), 2);
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.6);
  for (int k = 0; k < 100; ++k) {
    std::vector<bool> flags(50);
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = coin(rng);
    int best = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      std::size_t j = i;
      while (j < flags.size() && flags[j]) ++j;
      best = std::max(best, static_cast<int>(j - i));
    }
    EXPECT_EQ(max_consecutive_frames(flags), best);
  }
}

TEST(Hug, Examples) {
  const std::size_t n = 10;
  AgentTrack h = human_at_rest(n);
  const AgentTrack r = robot_at_rest(n);
  const Vec3d torso = r.at(Role::kTorso)[0];
  fill(h.joints[Role::kLeftHand], 2, 7, torso + Vec3d{-0.06, 0.1, 0.0});
  fill(h.joints[Role::kRightHand], 2, 7, torso + Vec3d{-0.06, -0.1, 0.0});
  const auto ok = detect_hug(h, r);
  EXPECT_TRUE(ok.success);
  EXPECT_TRUE(ok.check("double_embrace"));
  EXPECT_EQ(ok.measure("double_embrace_run"), 5.0);

  AgentTrack far = human_at_rest(n);
  fill(far.joints[Role::kLeftHand], 0, n, {-2.0, 0.0, 1.0});
  fill(far.joints[Role::kRightHand], 0, n, {-2.0, 0.1, 1.0});
  EXPECT_FALSE(detect_hug(far, r).success);

  AgentTrack brief = human_at_rest(n);
  fill(brief.joints[Role::kLeftHand], 2, 4, torso + Vec3d{-0.06, 0.1, 0.0});
  fill(brief.joints[Role::kRightHand], 2, 4, torso + Vec3d{-0.06, -0.1, 0.0});
  const auto b = detect_hug(brief, r);
  EXPECT_FALSE(b.success);
  EXPECT_EQ(b.measure("double_embrace_run"), 2.0);
}

// Human right hand to robot left hand (they face each other) at `d`.
void handshake_frame(AgentTrack& h, AgentTrack& r, std::size_t t, double d) {
  h.joints[Role::kRightHand][t] = {0.45, -0.15, 1.0};
  r.joints[Role::kLeftHand][t] = {0.45 + d, -0.15, 1.0};
}

TEST(Handshake, Examples) {
  const std::size_t n = 20;
  AgentTrack h = human_at_rest(n);
  AgentTrack r = robot_at_rest(n);
  for (std::size_t t = 4; t < 16; ++t) handshake_frame(h, r, t, 0.25);
  const auto ok = detect_handshake(h, r);
  EXPECT_TRUE(ok.success);
  EXPECT_EQ(ok.measure("max_consecutive"), 12.0);
  EXPECT_NEAR(ok.measure("contact_std"), 0.0, 1e-12);

  AgentTrack h8 = human_at_rest(n);
  AgentTrack r8 = robot_at_rest(n);
  for (std::size_t t = 4; t < 12; ++t) handshake_frame(h8, r8, t, 0.25);
  const auto short_contact = detect_handshake(h8, r8);
  EXPECT_FALSE(short_contact.success);
  EXPECT_FALSE(short_contact.check("contact_count"));

  // Distance swinging 0.25 +- 0.2: only the near half of the swing counts
  // as contact, so the contact phase never holds for 10 frames.
  AgentTrack ho = human_at_rest(n);
  AgentTrack ro = robot_at_rest(n);
  for (std::size_t t = 0; t < n; ++t) handshake_frame(ho, ro, t, t % 2 == 0 ? 0.05 : 0.45);
  EXPECT_FALSE(detect_handshake(ho, ro).success);
}

TEST(Handshake, UnstableContactFailsStability) {
  HandshakeConfig cfg;
  cfg.contact = 0.6;  // widen the contact gate so the whole swing is in contact
  const std::size_t n = 20;
  AgentTrack h = human_at_rest(n);
  AgentTrack r = robot_at_rest(n);
  for (std::size_t t = 0; t < n; ++t) handshake_frame(h, r, t, t % 2 == 0 ? 0.05 : 0.45);
  const auto o = detect_handshake(h, r, cfg);
  EXPECT_NEAR(o.measure("contact_std"), 0.2, 1e-12);
  EXPECT_FALSE(o.check("stability_std"));
  EXPECT_FALSE(o.success);
}

TEST(HighFive, Examples) {
  const std::size_t n = 10;
  AgentTrack h = human_at_rest(n);
  AgentTrack r = robot_at_rest(n);
  h.joints[Role::kRightHand][5] = {0.3, -0.2, 1.4};
  r.joints[Role::kLeftHand][5] = {0.65, -0.2, 1.4};
  EXPECT_TRUE(detect_highfive(h, r).success);

  AgentTrack low_h = human_at_rest(n);
  AgentTrack low_r = robot_at_rest(n);
  low_h.joints[Role::kRightHand][5] = {0.3, -0.2, 0.9};
  low_r.joints[Role::kLeftHand][5] = {0.65, -0.2, 0.9};
  EXPECT_FALSE(detect_highfive(low_h, low_r).success);

  const std::size_t long_n = 1500;
  AgentTrack lh = human_at_rest(long_n);
  AgentTrack lr = robot_at_rest(long_n);
  fill(lh.joints[Role::kRightHand], 0, long_n, {0.3, -0.2, 1.4});
  fill(lr.joints[Role::kLeftHand], 0, long_n, {0.65, -0.2, 1.4});
  const auto held = detect_highfive(lh, lr);
  EXPECT_FALSE(held.success);
  EXPECT_FALSE(held.check("not_sustained"));
}

TEST(Wave, Examples) {
  const std::size_t n = 31;
  AgentTrack h = human_at_rest(n);
  for (std::size_t t = 0; t < n; ++t) {
    h.joints[Role::kRightHand][t] = {0.2, -0.3 + 0.4 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 20.0),
                                     1.4};
  }
  const auto ok = detect_wave(h);
  EXPECT_TRUE(ok.success);
  EXPECT_EQ(ok.measure("direction_changes"), 3.0);

  AgentTrack sweep = human_at_rest(n);
  for (std::size_t t = 0; t < n; ++t) sweep.joints[Role::kRightHand][t] = {0.2, -0.8 + 0.05 * static_cast<double>(t), 1.4};
  const auto s = detect_wave(sweep);
  EXPECT_FALSE(s.success);
  EXPECT_EQ(s.measure("direction_changes"), 0.0);

  AgentTrack wiggle = human_at_rest(n);
  for (std::size_t t = 0; t < n; ++t) {
    wiggle.joints[Role::kRightHand][t] = {0.2, -0.3 + (t % 2 == 0 ? 0.05 : -0.05), 1.4};
  }
  const auto w = detect_wave(wiggle);
  EXPECT_FALSE(w.success);
  EXPECT_FALSE(w.check("amplitude"));
}

std::vector<Vec3d> leaning_head(std::size_t n, std::size_t begin, std::size_t end, double angle) {
  std::vector<Vec3d> head(n, Vec3d{0, 0, 1.6});
  for (std::size_t t = begin; t < end; ++t) head[t] = {0.7 * std::sin(angle), 0.0, 0.9 + 0.7 * std::cos(angle)};
  return head;
}

TEST(Bend, Examples) {
  const std::vector<Vec3d> root(20, Vec3d{0, 0, 0.9});
  const double forty = 40.0 * std::numbers::pi / 180.0;
  EXPECT_FALSE(detect_bend(std::vector<Vec3d>(20, Vec3d{0, 0, 1.6}), root).success);
  const auto ok = detect_bend(leaning_head(20, 5, 15, forty), root);
  EXPECT_TRUE(ok.success);
  EXPECT_NEAR(ok.measure("max_angle"), forty, 1e-12);
  EXPECT_FALSE(detect_bend(leaning_head(20, 5, 8, forty), root).success);
}

TEST(FlyKiss, Examples) {
  const std::size_t n = 12;
  auto kiss = [&](double total) {
    AgentTrack h = human_at_rest(n);
    const Vec3d lips = h.at(Role::kHead)[0] + Vec3d{0.08, 0.0, -0.05};
    for (std::size_t t = 0; t < n; ++t) {
      const double s = t < 2 ? 0.0 : std::min(8.0, static_cast<double>(t - 1)) / 8.0;
      h.joints[Role::kRightHand][t] = lips + Vec3d{total * s, 0.0, 0.0};
    }
    return detect_flykiss(h, robot_at_rest(n));
  };
  const auto ok = kiss(0.15);
  EXPECT_TRUE(ok.success);
  EXPECT_EQ(ok.measure("max_consecutive_forward"), 8.0);
  // Robot root sits 0.15 m lower, so only the x-share of the push counts.
  EXPECT_NEAR(ok.measure("total_forward"), 0.15 / std::sqrt(1.0 + 0.15 * 0.15), 1e-12);
  EXPECT_FALSE(kiss(0.05).success);
  AgentTrack none = human_at_rest(n);
  EXPECT_FALSE(detect_flykiss(none, robot_at_rest(n)).success);
}

TEST(Detectors, StricterThresholdsNeverCreateSuccess) {
  DetectionConfig strict;
  strict.hug.min_frames = 50;
  strict.handshake.min_contact = 50;
  strict.highfive.min_approach = 50;
  strict.wave.min_changes = 50;
  strict.bend.min_frames = 50;
  strict.flykiss.min_forward = 50;
  for (const auto& g : fixtures::golden_episodes()) {
    if (!detect(g.episode).success) {
      EXPECT_FALSE(detect(g.episode, strict).success) << g.episode.id;
    }
  }
}

TEST(Detectors, ConfigValidationAndMissingRoles) {
  DetectionConfig bad;
  bad.bend.min_angle = 4.0;
  EXPECT_THROW(bad.validate(), InputError);
  DetectionConfig neg;
  neg.hug.body = -1.0;
  EXPECT_THROW(neg.validate(), InputError);
  AgentTrack h = human_at_rest(5);
  h.joints.erase(Role::kHead);
  EXPECT_THROW(detect(Task::kBend, h, robot_at_rest(5)), InputError);
  EXPECT_EQ(task_from_string("highfive"), Task::kHighFive);
  EXPECT_THROW(task_from_string("dance"), InputError);
}

}  // namespace
