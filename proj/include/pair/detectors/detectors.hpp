#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pair/core/error.hpp"
#include "pair/core/math.hpp"
#include "pair/kinematics/skeleton.hpp"

namespace pair {

enum class Task { kHug, kHandshake, kHighFive, kWave, kBend, kFlyKiss };

inline constexpr std::array<std::pair<Task, std::string_view>, 6> kTaskNames{{{Task::kHug, "hug"},
                                                                              {Task::kHandshake, "handshake"},
                                                                              {Task::kHighFive, "highfive"},
                                                                              {Task::kWave, "wave"},
                                                                              {Task::kBend, "bend"},
                                                                              {Task::kFlyKiss, "flykiss"}}};

inline std::string_view to_string(Task t) {
  for (const auto& [task, name] : kTaskNames) {
    if (task == t) return name;
  }
  return "unknown";
}

inline Task task_from_string(std::string_view s) {
  for (const auto& [task, name] : kTaskNames) {
    if (name == s) return task;
  }
  throw InputError("unknown task '" + std::string(s) + "'");
}

struct HugConfig {
  double hand_dist = 0.5;
  double body = 0.45;
  double shoulder = 0.4;
  int min_frames = 3;
};

struct HighFiveConfig {
  double contact = 0.4;
  int min_approach = 1;
  int max_sustained = 1000;
  double height = 0.3;
  bool height_validation = true;
};

struct HandshakeConfig {
  double contact = 0.3;
  int min_contact = 10;
  double min_dist = 0.4;
  double max_dist = 1.5;
  double std_contact = 0.15;
  double mean_contact = 0.45;
};

struct WaveConfig {
  double motion_dist = 0.5;
  int min_changes = 3;
  double amplitude = 0.3;
  double angle = std::numbers::pi / 4.0;
  double height = 0.45;
  double displacement_guard = 0.02;  // m travelled since the last counted change
};

struct BendConfig {
  double min_angle = std::numbers::pi / 6.0;
  int min_frames = 5;
};

struct FlyKissConfig {
  double hand2head = 0.3;
  double forward_thresh = 0.1;
  int min_forward = 5;
};

struct DetectionConfig {
  HugConfig hug;
  HighFiveConfig highfive;
  HandshakeConfig handshake;
  WaveConfig wave;
  BendConfig bend;
  FlyKissConfig flykiss;

  void validate() const {
    for (double d : {hug.hand_dist, hug.body, hug.shoulder, highfive.contact, highfive.height, handshake.contact,
                     handshake.min_dist, handshake.max_dist, handshake.std_contact, handshake.mean_contact,
                     wave.motion_dist, wave.amplitude, wave.height, flykiss.hand2head, flykiss.forward_thresh}) {
      require(d > 0.0, "detection config: distances must be positive");
    }
    require(wave.displacement_guard >= 0.0, "detection config: displacement guard must be non-negative");
    for (int n : {hug.min_frames, highfive.min_approach, highfive.max_sustained, handshake.min_contact,
                  wave.min_changes, bend.min_frames, flykiss.min_forward}) {
      require(n >= 1, "detection config: frame counts must be >= 1");
    }
    for (double a : {wave.angle, bend.min_angle}) {
      require(a > 0.0 && a < std::numbers::pi, "detection config: angles must lie in (0, pi)");
    }
    require(handshake.min_dist <= handshake.max_dist, "detection config: handshake min_dist > max_dist");
  }
};

/// Detector verdict plus the evidence it was derived from. `checks` are
/// combined with AND, or with OR when `any_of` is set.
struct DetectionOutcome {
  bool success = false;
  bool any_of = false;
  std::vector<std::pair<std::string, bool>> checks;
  std::vector<std::pair<std::string, double>> measures;

  double measure(std::string_view name) const {
    for (const auto& [n, v] : measures) {
      if (n == name) return v;
    }
    throw InputError("outcome has no measure '" + std::string(name) + "'");
  }

  bool check(std::string_view name) const {
    for (const auto& [n, v] : checks) {
      if (n == name) return v;
    }
    throw InputError("outcome has no check '" + std::string(name) + "'");
  }
};

inline bool recompute_success(const DetectionOutcome& o) {
  if (o.any_of) {
    return std::any_of(o.checks.begin(), o.checks.end(), [](const auto& c) { return c.second; });
  }
  return !o.checks.empty() && std::all_of(o.checks.begin(), o.checks.end(), [](const auto& c) { return c.second; });
}

inline int max_consecutive_frames(const std::vector<bool>& flags) {
  int best = 0;
  int run = 0;
  for (bool f : flags) {
    run = f ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

inline int count_true(const std::vector<bool>& flags) {
  return static_cast<int>(std::count(flags.begin(), flags.end(), true));
}

/// Role-indexed joint tracks of one agent.
struct AgentTrack {
  std::map<Role, std::vector<Vec3d>> joints;

  bool has(Role r) const { return joints.count(r) != 0; }

  const std::vector<Vec3d>& at(Role r) const {
    const auto it = joints.find(r);
    if (it == joints.end()) throw InputError("episode track is missing role '" + std::string(to_string(r)) + "'");
    return it->second;
  }

  std::size_t frames() const { return joints.empty() ? 0 : joints.begin()->second.size(); }
};

inline AgentTrack agent_track(const Skeleton& skeleton, const PositionSequence& positions) {
  AgentTrack a;
  for (const auto& [role, joint] : skeleton.roles()) a.joints[role] = positions.track(static_cast<std::size_t>(joint));
  return a;
}

/// Torso reference: the torso role when present, otherwise the root.
inline const std::vector<Vec3d>& torso_track(const AgentTrack& a) {
  return a.has(Role::kTorso) ? a.at(Role::kTorso) : a.at(Role::kRoot);
}

namespace detail {

inline std::size_t common_length(std::initializer_list<const std::vector<Vec3d>*> tracks) {
  std::size_t n = (*tracks.begin())->size();
  for (const auto* t : tracks) require(t->size() == n, "detector: track length mismatch");
  require(n >= 1, "detector: empty episode");
  return n;
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double population_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size()));
}

// Minimum over the four human-robot hand pairs, with the winning pair.
struct HandPairDistance {
  double d = 0.0;
  int human_hand = 0;  // 0 left, 1 right
  int robot_hand = 0;
};

inline HandPairDistance min_hand_pair(const std::array<const Vec3d*, 2>& human, const std::array<const Vec3d*, 2>& robot) {
  HandPairDistance best{distance(*human[0], *robot[0]), 0, 0};
  for (int h = 0; h < 2; ++h) {
    for (int r = 0; r < 2; ++r) {
      const double d = distance(*human[static_cast<std::size_t>(h)], *robot[static_cast<std::size_t>(r)]);
      if (d < best.d) best = {d, h, r};
    }
  }
  return best;
}

}  // namespace detail

/// Hug: double, single or shoulder embrace held for min_frames consecutive
/// frames. Single embrace is either hand near the torso; shoulder embrace is
/// either hand near either robot shoulder.
inline DetectionOutcome detect_hug(const std::vector<Vec3d>& left_hand, const std::vector<Vec3d>& right_hand,
                                   const std::vector<Vec3d>& robot_torso, const std::vector<Vec3d>& robot_left_shoulder,
                                   const std::vector<Vec3d>& robot_right_shoulder, const HugConfig& cfg = {}) {
  const std::size_t n =
      detail::common_length({&left_hand, &right_hand, &robot_torso, &robot_left_shoulder, &robot_right_shoulder});
  std::vector<bool> dbl(n);
  std::vector<bool> single(n);
  std::vector<bool> shoulder(n);
  for (std::size_t t = 0; t < n; ++t) {
    const bool hands_close = distance(left_hand[t], right_hand[t]) < cfg.hand_dist;
    const bool l_body = distance(left_hand[t], robot_torso[t]) < cfg.body;
    const bool r_body = distance(right_hand[t], robot_torso[t]) < cfg.body;
    dbl[t] = hands_close && l_body && r_body;
    single[t] = l_body || r_body;
    shoulder[t] = false;
    for (const Vec3d* h : {&left_hand[t], &right_hand[t]}) {
      for (const Vec3d* s : {&robot_left_shoulder[t], &robot_right_shoulder[t]}) {
        if (distance(*h, *s) < cfg.shoulder) shoulder[t] = true;
      }
    }
  }
  DetectionOutcome o;
  o.any_of = true;
  const int run_d = max_consecutive_frames(dbl);
  const int run_s = max_consecutive_frames(single);
  const int run_sh = max_consecutive_frames(shoulder);
  o.measures = {{"double_embrace_run", run_d}, {"single_embrace_run", run_s}, {"shoulder_embrace_run", run_sh}};
  o.checks = {{"double_embrace", run_d >= cfg.min_frames},
              {"single_embrace", run_s >= cfg.min_frames},
              {"shoulder_embrace", run_sh >= cfg.min_frames}};
  o.success = recompute_success(o);
  return o;
}

inline DetectionOutcome detect_hug(const AgentTrack& human, const AgentTrack& robot, const HugConfig& cfg = {}) {
  return detect_hug(human.at(Role::kLeftHand), human.at(Role::kRightHand), torso_track(robot),
                    robot.at(Role::kLeftShoulder), robot.at(Role::kRightShoulder), cfg);
}

/// Handshake: a validated contact phase (closest hand pair under the contact
/// threshold with the active robot hand at a plausible distance from the
/// human root) and a stable contact-distance profile over the whole window.
inline DetectionOutcome detect_handshake(const AgentTrack& human, const AgentTrack& robot,
                                         const HandshakeConfig& cfg = {}) {
  const auto& hl = human.at(Role::kLeftHand);
  const auto& hr = human.at(Role::kRightHand);
  const auto& rl = robot.at(Role::kLeftHand);
  const auto& rr = robot.at(Role::kRightHand);
  const auto& root = human.at(Role::kRoot);
  const std::size_t n = detail::common_length({&hl, &hr, &rl, &rr, &root});
  std::vector<bool> valid(n);
  std::vector<double> contact_d;
  for (std::size_t t = 0; t < n; ++t) {
    const auto m = detail::min_hand_pair({&hl[t], &hr[t]}, {&rl[t], &rr[t]});
    if (m.d >= cfg.contact) continue;
    contact_d.push_back(m.d);
    const Vec3d& active = m.robot_hand == 0 ? rl[t] : rr[t];
    const double d_root = distance(active, root[t]);
    valid[t] = d_root >= cfg.min_dist && d_root <= cfg.max_dist;
  }
  const int count = count_true(valid);
  const int run = max_consecutive_frames(valid);
  const bool have_contact = !contact_d.empty();
  const double std_d = have_contact ? detail::population_std(contact_d) : 0.0;
  const double mean_d = have_contact ? detail::mean_of(contact_d) : 0.0;
  DetectionOutcome o;
  o.measures = {{"valid_contact_count", count},
                {"max_consecutive", run},
                {"contact_frames", static_cast<double>(contact_d.size())},
                {"contact_std", std_d},
                {"contact_mean", mean_d}};
  o.checks = {{"contact_count", count >= cfg.min_contact},
              {"contact_consecutive", run >= cfg.min_contact},
              {"stability_std", have_contact && std_d < cfg.std_contact},
              {"stability_mean", have_contact && mean_d < cfg.mean_contact}};
  o.success = recompute_success(o);
  return o;
}

/// High-five: brief hand contact with both contacting hands raised above the
/// human root.
inline DetectionOutcome detect_highfive(const AgentTrack& human, const AgentTrack& robot,
                                        const HighFiveConfig& cfg = {}) {
  const auto& hl = human.at(Role::kLeftHand);
  const auto& hr = human.at(Role::kRightHand);
  const auto& rl = robot.at(Role::kLeftHand);
  const auto& rr = robot.at(Role::kRightHand);
  const auto& root = human.at(Role::kRoot);
  const std::size_t n = detail::common_length({&hl, &hr, &rl, &rr, &root});
  std::vector<bool> close(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto m = detail::min_hand_pair({&hl[t], &hr[t]}, {&rl[t], &rr[t]});
    close[t] = m.d < cfg.contact;
    if (close[t] && cfg.height_validation) {
      const Vec3d& h = m.human_hand == 0 ? hl[t] : hr[t];
      const Vec3d& r = m.robot_hand == 0 ? rl[t] : rr[t];
      close[t] = h.z - root[t].z >= cfg.height && r.z - root[t].z >= cfg.height;
    }
  }
  const int count = count_true(close);
  const int run = max_consecutive_frames(close);
  DetectionOutcome o;
  o.measures = {{"contact_count", count}, {"max_consecutive", run}};
  o.checks = {{"approach", count >= cfg.min_approach}, {"not_sustained", run <= cfg.max_sustained}};
  o.success = recompute_success(o);
  return o;
}

inline double path_length(const std::vector<Vec3d>& p) {
  double s = 0.0;
  for (std::size_t t = 1; t < p.size(); ++t) s += distance(p[t], p[t - 1]);
  return s;
}

/// Counts planar (x, y) heading changes above `angle`. A change only counts
/// once the hand has moved at least `guard` metres from where the previous
/// counted change (or the sequence) started.
inline int count_direction_changes(const std::vector<Vec3d>& p, double angle, double guard) {
  if (p.size() < 3) return 0;
  std::vector<double> theta(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    theta[i] = std::atan2(p[i + 1].y - p[i].y, p[i + 1].x - p[i].x);
  }
  int changes = 0;
  std::size_t anchor = 0;
  for (std::size_t i = 1; i < theta.size(); ++i) {
    double d = std::abs(theta[i] - theta[i - 1]);
    if (d > std::numbers::pi) d = 2.0 * std::numbers::pi - d;
    if (d > angle && distance(p[i], p[anchor]) >= guard) {
      ++changes;
      anchor = i;
    }
  }
  return changes;
}

/// Largest per-axis peak-to-peak range.
inline double peak_to_peak(const std::vector<Vec3d>& p) {
  double best = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    double lo = p.front()[k];
    double hi = lo;
    for (const auto& v : p) {
      lo = std::min(lo, v[k]);
      hi = std::max(hi, v[k]);
    }
    best = std::max(best, hi - lo);
  }
  return best;
}

/// Wave: the hand with the longer path must travel far enough, reverse
/// direction repeatedly with enough amplitude, and rise above the root.
inline DetectionOutcome detect_wave(const std::vector<Vec3d>& left_hand, const std::vector<Vec3d>& right_hand,
                                    const std::vector<Vec3d>& root, const WaveConfig& cfg = {}) {
  detail::common_length({&left_hand, &right_hand, &root});
  const double len_l = path_length(left_hand);
  const double len_r = path_length(right_hand);
  const bool use_left = len_l > len_r;
  const auto& active = use_left ? left_hand : right_hand;
  const double total = use_left ? len_l : len_r;
  const int changes = count_direction_changes(active, cfg.angle, cfg.displacement_guard);
  const double amp = peak_to_peak(active);
  double height = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < active.size(); ++t) height = std::max(height, active[t].z - root[t].z);
  DetectionOutcome o;
  o.measures = {{"active_hand_left", use_left ? 1.0 : 0.0},
                {"path_length", total},
                {"direction_changes", changes},
                {"amplitude", amp},
                {"max_height_above_root", height}};
  o.checks = {{"motion", total > cfg.motion_dist},
              {"direction_changes", changes >= cfg.min_changes},
              {"amplitude", amp > cfg.amplitude},
              {"height", height >= cfg.height}};
  o.success = recompute_success(o);
  return o;
}

inline DetectionOutcome detect_wave(const AgentTrack& human, const WaveConfig& cfg = {}) {
  return detect_wave(human.at(Role::kLeftHand), human.at(Role::kRightHand), human.at(Role::kRoot), cfg);
}

/// Angle between (head - root) and +z.
inline double bend_angle(const Vec3d& head, const Vec3d& root) {
  const Vec3d v = head - root;
  const double n = norm(v);
  if (n == 0.0) return 0.0;
  return std::acos(std::clamp(v.z / n, -1.0, 1.0));
}

/// Bend: the head-root vector tilts at least min_angle from vertical in at
/// least min_frames frames (not necessarily consecutive).
inline DetectionOutcome detect_bend(const std::vector<Vec3d>& head, const std::vector<Vec3d>& root,
                                    const BendConfig& cfg = {}) {
  const std::size_t n = detail::common_length({&head, &root});
  double max_angle = 0.0;
  int above = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double a = bend_angle(head[t], root[t]);
    max_angle = std::max(max_angle, a);
    if (a >= cfg.min_angle) ++above;
  }
  DetectionOutcome o;
  o.measures = {{"max_angle", max_angle}, {"frames_above", above}};
  o.checks = {{"angle", max_angle >= cfg.min_angle}, {"frames", above >= cfg.min_frames}};
  o.success = recompute_success(o);
  return o;
}

inline DetectionOutcome detect_bend(const AgentTrack& human, const BendConfig& cfg = {}) {
  return detect_bend(human.at(Role::kHead), human.at(Role::kRoot), cfg);
}

/// Fly-kiss: the hand nearer the head touches it, then pushes forward along
/// the mean human-to-robot root direction.
inline DetectionOutcome detect_flykiss(const std::vector<Vec3d>& left_hand, const std::vector<Vec3d>& right_hand,
                                       const std::vector<Vec3d>& head, const std::vector<Vec3d>& human_root,
                                       const std::vector<Vec3d>& robot_root, const FlyKissConfig& cfg = {}) {
  const std::size_t n = detail::common_length({&left_hand, &right_hand, &head, &human_root, &robot_root});
  double d_left = std::numeric_limits<double>::infinity();
  double d_right = std::numeric_limits<double>::infinity();
  Vec3d mean_h;
  Vec3d mean_r;
  for (std::size_t t = 0; t < n; ++t) {
    d_left = std::min(d_left, distance(left_hand[t], head[t]));
    d_right = std::min(d_right, distance(right_hand[t], head[t]));
    mean_h += human_root[t];
    mean_r += robot_root[t];
  }
  const bool use_left = d_left <= d_right;
  const auto& active = use_left ? left_hand : right_hand;
  const double d_min = use_left ? d_left : d_right;
  const Vec3d delta = (mean_r - mean_h) * (1.0 / static_cast<double>(n));
  const double len = norm(delta);
  require(len > 0.0, "flykiss: human and robot mean roots coincide");
  const Vec3d dir = delta * (1.0 / len);
  std::vector<bool> forward(n > 0 ? n - 1 : 0);
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const double proj = dot(active[t + 1] - active[t], dir);
    forward[t] = proj > 0.0;
    if (proj > 0.0) total += proj;
  }
  const int run = max_consecutive_frames(forward);
  DetectionOutcome o;
  o.measures = {{"active_hand_left", use_left ? 1.0 : 0.0},
                {"min_hand_head", d_min},
                {"max_consecutive_forward", run},
                {"total_forward", total}};
  o.checks = {{"hand_to_head", d_min <= cfg.hand2head},
              {"forward_frames", run >= cfg.min_forward},
              {"forward_motion", total >= cfg.forward_thresh}};
  o.success = recompute_success(o);
  return o;
}

inline DetectionOutcome detect_flykiss(const AgentTrack& human, const AgentTrack& robot,
                                       const FlyKissConfig& cfg = {}) {
  return detect_flykiss(human.at(Role::kLeftHand), human.at(Role::kRightHand), human.at(Role::kHead),
                        human.at(Role::kRoot), robot.at(Role::kRoot), cfg);
}

/// One scored interaction: the human subject and the robot it interacts with.
struct Episode {
  std::string id;
  Task task = Task::kHug;
  std::string condition = "default";
  AgentTrack human;
  AgentTrack robot;
};

inline DetectionOutcome detect(Task task, const AgentTrack& human, const AgentTrack& robot,
                               const DetectionConfig& cfg = {}) {
  cfg.validate();
  switch (task) {
    case Task::kHug:
      return detect_hug(human, robot, cfg.hug);
    case Task::kHandshake:
      return detect_handshake(human, robot, cfg.handshake);
    case Task::kHighFive:
      return detect_highfive(human, robot, cfg.highfive);
    case Task::kWave:
      return detect_wave(human, cfg.wave);
    case Task::kBend:
      return detect_bend(human, cfg.bend);
    case Task::kFlyKiss:
      return detect_flykiss(human, robot, cfg.flykiss);
  }
  throw InputError("unknown task");
}

inline DetectionOutcome detect(const Episode& e, const DetectionConfig& cfg = {}) {
  return detect(e.task, e.human, e.robot, cfg);
}

}  // namespace pair
