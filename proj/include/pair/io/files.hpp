#pragma once

// File-level I/O: JSON documents, skeleton resolution, run manifests,
// CSV writers, config hashing and the stderr logger.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "pair/fixtures/scenarios.hpp"
#include "pair/io/json_io.hpp"

namespace pair::io {

namespace fs = std::filesystem;

// ---- logging ----

enum class LogLevel { kError = 0, kWarn = 1, kInfo = 2, kDebug = 3 };

/// Verbosity from PAIR_LOG_LEVEL (error, warn, info, debug); default warn.
inline LogLevel log_level() {
  const char* env = std::getenv("PAIR_LOG_LEVEL");
  if (env == nullptr) return LogLevel::kWarn;
  const std::string v(env);
  if (v == "error") return LogLevel::kError;
  if (v == "info") return LogLevel::kInfo;
  if (v == "debug") return LogLevel::kDebug;
  return LogLevel::kWarn;
}

inline spdlog::level::level_enum spdlog_level(LogLevel level) {
  switch (level) {
    case LogLevel::kError:
      return spdlog::level::err;
    case LogLevel::kWarn:
      return spdlog::level::warn;
    case LogLevel::kInfo:
      return spdlog::level::info;
    case LogLevel::kDebug:
      return spdlog::level::debug;
  }
  return spdlog::level::warn;
}

/// Process-wide stderr logger, leaving stdout to command output.
inline spdlog::logger& logger() {
  static const std::shared_ptr<spdlog::logger> instance = [] {
    auto l = std::make_shared<spdlog::logger>("pair", std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    l->set_level(spdlog_level(log_level()));
    return l;
  }();
  return *instance;
}

inline void log(LogLevel level, const std::string& msg) { logger().log(spdlog_level(level), msg); }

// ---- documents ----

inline Json read_json(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

/// Pretty-printed, key-sorted, newline-terminated; doubles round-trip exactly.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot write '" + path.string() + "'");
  out << text;
  require(out.good(), "write failed for '" + path.string() + "'");
}

inline void write_json(const fs::path& path, const Json& j) { write_text(path, dump(j)); }

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- skeletons and motions ----

inline bool is_preset(const std::string& name) { return name == "smpl" || name == "g1" || name == "compact"; }

/// Built-in preset name, or a skeleton JSON file (relative paths against `base`).
inline Skeleton resolve_skeleton(const std::string& ref, const fs::path& base = {}) {
  if (ref == "compact") return fixtures::compact_humanoid_skeleton();
  if (is_preset(ref)) return preset_skeleton(ref);
  const fs::path p = fs::path(ref).is_absolute() ? fs::path(ref) : base / ref;
  require(fs::exists(p), "unknown skeleton '" + ref + "' (not a preset and no such file)");
  return skeleton_from(read_json(p));
}

inline LoadedMotion load_motion(const fs::path& path) {
  LoadedMotion m = motion_from(read_json(path));
  for (const auto& w : m.warnings) log(LogLevel::kWarn, path.string() + ": " + w);
  if (std::abs(m.motion.fps - kProtocolFps) > 1e-9) {
    log(LogLevel::kWarn, path.string() + ": fps " + format_double(m.motion.fps) + " differs from the 50 Hz protocol");
  }
  return m;
}

inline void save_motion(const fs::path& path, const MotionSequence& m) { write_json(path, motion_json(m)); }

/// Motion plus the skeleton it animates. `skeleton_ref` overrides the
/// file's own skeleton reference when non-empty.
struct SkinnedMotion {
  Skeleton skeleton;
  MotionSequence motion;
};

inline SkinnedMotion load_skinned_motion(const fs::path& path, const std::string& skeleton_ref = {}) {
  LoadedMotion m = load_motion(path);
  SkinnedMotion out;
  if (!skeleton_ref.empty()) {
    out.skeleton = resolve_skeleton(skeleton_ref, path.parent_path());
  } else if (m.inline_skeleton) {
    out.skeleton = *m.inline_skeleton;
  } else {
    out.skeleton = resolve_skeleton(m.motion.skeleton_id, path.parent_path());
  }
  validate_motion(out.skeleton, m.motion);
  out.motion = std::move(m.motion);
  return out;
}

/// Role-indexed joint tracks from either a motion file or a positions file.
inline AgentTrack load_agent(const fs::path& path, const std::string& skeleton_ref = {}) {
  const Json j = read_json(path);
  if (is_positions_document(j)) {
    const PositionFile p = positions_from(j);
    require(!p.roles.empty(), path.string() + ": positions file needs 'roles' for detection");
    AgentTrack a;
    for (const auto& [role, idx] : p.roles) a.joints[role] = p.positions.track(static_cast<std::size_t>(idx));
    return a;
  }
  const SkinnedMotion m = load_skinned_motion(path, skeleton_ref);
  return agent_track(m.skeleton, forward_kinematics(m.skeleton, m.motion));
}

// ---- manifests ----

/// One manifest entry. Paths are resolved against the manifest directory.
struct ManifestEpisode {
  std::string id;
  std::optional<Task> task;
  std::string condition = "default";
  fs::path source;   // human replaced by the robot
  fs::path partner;  // interaction partner
  fs::path robot;    // retargeted robot motion, for detection
  std::string human_skeleton;
  std::string robot_skeleton;
  Json config = Json::object();  // retarget overrides
  fs::path phase_labels;
};

struct RunManifest {
  fs::path base;
  std::vector<ManifestEpisode> episodes;
};

inline RunManifest manifest_from(const Json& j, const fs::path& base) {
  const std::string what = "manifest";
  check_keys(j, {"version", "episodes"}, what);
  if (j.contains("version")) require(get<int>(j, "version", what) == 1, what + ": unsupported version");
  require(j.contains("episodes") && j.at("episodes").is_array(), what + ": 'episodes' must be an array");
  RunManifest m;
  m.base = base;
  std::set<std::string> ids;
  auto path_of = [&](const Json& e, const char* key, const std::string& ew) -> fs::path {
    if (!e.contains(key)) return {};
    const fs::path p = base / get<std::string>(e, key, ew);
    require(fs::exists(p), ew + ": '" + key + "' file '" + p.string() + "' does not exist");
    return p;
  };
  for (std::size_t i = 0; i < j.at("episodes").size(); ++i) {
    const Json& e = j.at("episodes")[i];
    std::string ew = what + " episode " + std::to_string(i);
    check_keys(e,
               {"id", "task", "condition", "source", "partner", "robot", "human_skeleton", "robot_skeleton", "config",
                "phase_labels"},
               ew);
    ManifestEpisode ep;
    ep.id = get<std::string>(e, "id", ew);
    require(!ep.id.empty(), ew + ": empty id");
    require(ids.insert(ep.id).second, ew + ": duplicate id '" + ep.id + "'");
    ew += " ('" + ep.id + "')";
    if (e.contains("task")) ep.task = task_from_string(get<std::string>(e, "task", ew));
    get_to(e, "condition", ep.condition, ew);
    ep.source = path_of(e, "source", ew);
    ep.partner = path_of(e, "partner", ew);
    ep.robot = path_of(e, "robot", ew);
    ep.phase_labels = path_of(e, "phase_labels", ew);
    for (auto [key, out] : {std::pair{"human_skeleton", &ep.human_skeleton}, std::pair{"robot_skeleton", &ep.robot_skeleton}}) {
      if (!e.contains(key)) continue;
      *out = get<std::string>(e, key, ew);
      if (!is_preset(*out)) {
        require(fs::exists(base / *out), ew + ": skeleton file '" + (base / *out).string() + "' does not exist");
        *out = (base / *out).string();
      }
    }
    if (e.contains("config")) {
      ep.config = e.at("config");
      RetargetConfig probe;
      apply_config(ep.config, probe);
    }
    m.episodes.push_back(std::move(ep));
  }
  return m;
}

inline RunManifest load_manifest(const fs::path& path) {
  return manifest_from(read_json(path), path.parent_path());
}

// ---- CSV ----

inline std::string loss_trace_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream out;
  out << "iteration,total,kin,con,hum,temp,pose,stage\n";
  for (const auto& e : trace) {
    out << e.iteration << ',' << format_double(e.loss.total) << ',' << format_double(e.loss.kin)
        << ',' << format_double(e.loss.con) << ',' << format_double(e.loss.hum) << ','
        << format_double(e.loss.temp) << ',' << format_double(e.loss.pose) << ',' << e.stage << '\n';
  }
  return out.str();
}

inline std::string metrics_csv_header() {
  return "id,tau,precision,recall,f1,accuracy,tp,fp,fn,tn,jpe,awd,large_angle_ratio,angle_std,jerk_mean,jerk_std\n";
}

/// One row per contact threshold.
inline std::string metrics_csv_rows(const std::string& id, const MetricsReport& r) {
  std::ostringstream out;
  for (const auto& c : r.contact) {
    const ContactScores& s = c.scores;
    out << id << ',' << format_double(c.tau) << ',' << format_double(s.precision) << ',' << format_double(s.recall)
        << ',' << format_double(s.f1) << ',' << format_double(s.accuracy) << ',' << s.tp << ',' << s.fp << ','
        << s.fn << ',' << s.tn << ',' << format_double(r.jpe) << ',' << format_double(r.awd) << ','
        << format_double(r.large_angle_ratio) << ',' << format_double(r.angle_std) << ','
        << format_double(r.jerk_mean) << ',' << format_double(r.jerk_std) << '\n';
  }
  return out.str();
}

struct SuccessCell {
  std::string task;
  std::string condition;
  std::size_t n = 0;
  std::size_t successes = 0;
};

inline std::string success_rates_csv(const std::vector<SuccessCell>& cells) {
  std::ostringstream out;
  out << "task,condition,n,successes,rate\n";
  for (const auto& c : cells) {
    const double rate = c.n == 0 ? 0.0 : static_cast<double>(c.successes) / static_cast<double>(c.n);
    out << c.task << ',' << c.condition << ',' << c.n << ',' << c.successes << ',' << format_double(rate) << '\n';
  }
  return out.str();
}

// ---- provenance ----

/// 64-bit FNV-1a of the canonical (key-sorted, compact) config dump.
inline std::string config_hash(const Json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline constexpr const char* kToolVersion = "0.1.0";

inline Json provenance(const Json& config, std::uint64_t seed) {
  return {{"tool", "pair_cli"},
          {"version", kToolVersion},
          {"json_library", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                               std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                               std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"config_hash", config_hash(config)},
          {"seed", seed}};
}

}  // namespace pair::io
