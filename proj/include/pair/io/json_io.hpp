#pragma once

// JSON encodings of the domain types. Readers reject unknown keys and
// inconsistent lengths with InputError; optional keys keep their defaults.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pair/core/error.hpp"
#include "pair/detectors/detectors.hpp"
#include "pair/kinematics/morphology.hpp"
#include "pair/kinematics/skeleton.hpp"
#include "pair/metrics/metrics.hpp"
#include "pair/retarget/config.hpp"
#include "pair/retarget/pair.hpp"
#include "pair/scheduler/scheduler.hpp"

namespace pair::io {

using Json = nlohmann::json;

inline void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  require(j.is_object(), what + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    require(allowed.count(key) != 0, what + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const Json& j, const std::string& key, const std::string& what) {
  require(j.contains(key), what + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(what + ": '" + key + "' has the wrong type");
  }
}

template <typename T>
void get_to(const Json& j, const std::string& key, T& out, const std::string& what) {
  if (j.contains(key)) out = get<T>(j, key, what);
}

inline std::vector<double> numbers(const Json& j, std::size_t expected, const std::string& what) {
  require(j.is_array(), what + ": expected an array");
  require(expected == 0 || j.size() == expected,
          what + ": expected " + std::to_string(expected) + " values, got " + std::to_string(j.size()));
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    require(v.is_number(), what + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

inline Json vec_json(const Vec3d& v) { return Json::array({v.x, v.y, v.z}); }

inline Vec3d vec_from(const Json& j, const std::string& what) {
  const auto v = numbers(j, 3, what);
  return {v[0], v[1], v[2]};
}

// ---- skeletons ----

inline Json skeleton_json(const Skeleton& s) {
  Json joints = Json::array();
  for (const Joint& jt : s.joints()) {
    Json o{{"name", jt.name}, {"rest_offset", vec_json(jt.rest_offset)}, {"dof", std::string(to_string(jt.dof))}};
    o["parent"] = jt.parent ? Json(s.joint(*jt.parent).name) : Json(nullptr);
    if (jt.dof == DofType::kRevolute) o["axis"] = vec_json(jt.axis);
    Json limits = Json::array();
    for (const auto& l : jt.limits) limits.push_back(Json::array({l.min, l.max}));
    if (!jt.limits.empty()) o["limits"] = limits;
    joints.push_back(o);
  }
  Json roles = Json::object();
  for (const auto& [role, idx] : s.roles()) roles[std::string(to_string(role))] = s.joint(idx).name;
  return {{"name", s.name()}, {"joints", joints}, {"roles", roles}};
}

inline Skeleton skeleton_from(const Json& j) {
  const std::string what = "skeleton";
  check_keys(j, {"name", "joints", "roles"}, what);
  const auto name = get<std::string>(j, "name", what);
  require(j.contains("joints") && j.at("joints").is_array(), what + ": 'joints' must be an array");
  std::vector<Joint> joints;
  std::map<std::string, int> index;
  for (const auto& jj : j.at("joints")) {
    const std::string jw = what + " joint " + std::to_string(joints.size());
    check_keys(jj, {"name", "parent", "rest_offset", "dof", "axis", "limits"}, jw);
    Joint jt;
    jt.name = get<std::string>(jj, "name", jw);
    require(jj.contains("parent"), jw + ": missing 'parent'");
    if (!jj.at("parent").is_null()) {
      const auto parent = get<std::string>(jj, "parent", jw);
      require(index.count(parent) != 0, jw + ": parent '" + parent + "' must be listed before its child");
      jt.parent = index.at(parent);
    }
    require(jj.contains("rest_offset"), jw + ": missing 'rest_offset'");
    jt.rest_offset = vec_from(jj.at("rest_offset"), jw + " rest_offset");
    jt.dof = dof_type_from_string(get<std::string>(jj, "dof", jw));
    if (jj.contains("axis")) jt.axis = vec_from(jj.at("axis"), jw + " axis");
    const auto n = static_cast<std::size_t>(dof_count(jt.dof));
    jt.limits.assign(n, JointLimit{});
    if (jj.contains("limits")) {
      const Json& lim = jj.at("limits");
      require(lim.is_array() && lim.size() == n, jw + ": 'limits' needs one [min, max] per parameter");
      for (std::size_t k = 0; k < n; ++k) {
        const auto mm = numbers(lim[k], 2, jw + " limits");
        jt.limits[k] = {mm[0], mm[1]};
      }
    }
    require(index.emplace(jt.name, static_cast<int>(joints.size())).second, jw + ": duplicate joint name");
    joints.push_back(std::move(jt));
  }
  std::map<Role, int> roles;
  if (j.contains("roles")) {
    for (const auto& [role, joint] : j.at("roles").items()) {
      require(joint.is_string(), what + ": role '" + role + "' must name a joint");
      const auto it = index.find(joint.get<std::string>());
      require(it != index.end(), what + ": role '" + role + "' refers to unknown joint");
      roles[role_from_string(role)] = it->second;
    }
  }
  return Skeleton(name, std::move(joints), std::move(roles));
}

// ---- motions ----

/// Motion file: pose frames; `skeleton` is the skeleton name.
inline Json motion_json(const MotionSequence& m) {
  Json frames = Json::array();
  for (const auto& f : m.frames) {
    frames.push_back({{"root_pos", vec_json(f.root_pos)},
                      {"root_quat", Json::array({f.root_quat.w, f.root_quat.x, f.root_quat.y, f.root_quat.z})},
                      {"joint_params", f.joint_params}});
  }
  return {{"version", 1}, {"fps", m.fps}, {"skeleton", m.skeleton_id}, {"frames", frames}};
}

struct LoadedMotion {
  MotionSequence motion;
  std::optional<Skeleton> inline_skeleton;
  std::vector<std::string> warnings;
};

// Loaded quaternions are unit to rounding; inputs drifting past the warn
// tolerance are renormalized, grossly non-unit ones are rejected.
inline constexpr double kQuatRejectTolerance = 0.1;
inline constexpr double kQuatWarnTolerance = 1e-6;

inline LoadedMotion motion_from(const Json& j) {
  const std::string what = "motion";
  check_keys(j, {"version", "fps", "skeleton", "frames"}, what);
  require(get<int>(j, "version", what) == 1, what + ": unsupported version");
  LoadedMotion out;
  out.motion.fps = get<double>(j, "fps", what);
  require(out.motion.fps > 0.0, what + ": fps must be positive");
  require(j.contains("skeleton"), what + ": missing 'skeleton'");
  if (j.at("skeleton").is_string()) {
    out.motion.skeleton_id = j.at("skeleton").get<std::string>();
  } else {
    out.inline_skeleton = skeleton_from(j.at("skeleton"));
    out.motion.skeleton_id = out.inline_skeleton->name();
  }
  require(j.contains("frames") && j.at("frames").is_array(), what + ": 'frames' must be an array");
  require(!j.at("frames").empty(), what + ": no frames");
  std::size_t dof = 0;
  for (std::size_t t = 0; t < j.at("frames").size(); ++t) {
    const Json& fj = j.at("frames")[t];
    const std::string fw = what + " frame " + std::to_string(t);
    check_keys(fj, {"root_pos", "root_quat", "joint_params"}, fw);
    FramePose f;
    require(fj.contains("root_pos"), fw + ": missing 'root_pos'");
    require(fj.contains("root_quat"), fw + ": missing 'root_quat'");
    require(fj.contains("joint_params"), fw + ": missing 'joint_params'");
    f.root_pos = vec_from(fj.at("root_pos"), fw + " root_pos");
    const auto q = numbers(fj.at("root_quat"), 4, fw + " root_quat");
    f.root_quat = {q[0], q[1], q[2], q[3]};
    const double n = f.root_quat.norm();
    require(std::abs(n - 1.0) <= kQuatRejectTolerance, fw + ": root_quat is not unit norm");
    if (std::abs(n - 1.0) > kQuatWarnTolerance) {
      f.root_quat = f.root_quat.normalized();
      out.warnings.push_back(fw + ": root_quat renormalized");
    }
    f.joint_params = numbers(fj.at("joint_params"), 0, fw + " joint_params");
    if (t == 0) dof = f.joint_params.size();
    require(f.joint_params.size() == dof, fw + ": joint_params length differs from frame 0");
    out.motion.frames.push_back(std::move(f));
  }
  if (out.inline_skeleton) validate_motion(*out.inline_skeleton, out.motion);
  return out;
}

/// Positions-only capture file.
struct PositionFile {
  double fps = kProtocolFps;
  std::vector<std::string> joint_names;
  PositionSequence positions;
  std::map<Role, int> roles;  // optional role -> joint index
};

inline Json positions_json(const PositionFile& p) {
  Json frames = Json::array();
  for (std::size_t t = 0; t < p.positions.frames(); ++t) {
    Json row = Json::array();
    for (std::size_t k = 0; k < p.positions.joints(); ++k) row.push_back(vec_json(p.positions.at(t, k)));
    frames.push_back(row);
  }
  Json out{{"version", 1}, {"fps", p.fps}, {"joint_names", p.joint_names}, {"positions", frames}};
  if (!p.roles.empty()) {
    Json roles = Json::object();
    for (const auto& [r, i] : p.roles) roles[std::string(to_string(r))] = p.joint_names[static_cast<std::size_t>(i)];
    out["roles"] = roles;
  }
  return out;
}

inline PositionFile positions_from(const Json& j) {
  const std::string what = "positions";
  check_keys(j, {"version", "fps", "joint_names", "positions", "roles"}, what);
  if (j.contains("version")) require(get<int>(j, "version", what) == 1, what + ": unsupported version");
  PositionFile p;
  p.fps = get<double>(j, "fps", what);
  require(p.fps > 0.0, what + ": fps must be positive");
  p.joint_names = get<std::vector<std::string>>(j, "joint_names", what);
  require(!p.joint_names.empty(), what + ": no joints");
  require(j.contains("positions") && j.at("positions").is_array(), what + ": 'positions' must be an array");
  const Json& frames = j.at("positions");
  require(!frames.empty(), what + ": no frames");
  p.positions = PositionSequence(frames.size(), p.joint_names.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const std::string fw = what + " frame " + std::to_string(t);
    require(frames[t].is_array() && frames[t].size() == p.joint_names.size(), fw + ": expected one point per joint");
    for (std::size_t k = 0; k < p.joint_names.size(); ++k) p.positions.at(t, k) = vec_from(frames[t][k], fw);
  }
  if (j.contains("roles")) {
    for (const auto& [role, joint] : j.at("roles").items()) {
      require(joint.is_string(), what + ": role '" + role + "' must name a joint");
      const auto it = std::find(p.joint_names.begin(), p.joint_names.end(), joint.get<std::string>());
      require(it != p.joint_names.end(), what + ": role '" + role + "' refers to unknown joint");
      p.roles[role_from_string(role)] = static_cast<int>(it - p.joint_names.begin());
    }
  }
  return p;
}

inline bool is_positions_document(const Json& j) { return j.is_object() && j.contains("positions"); }

// ---- configs ----

inline Json roles_json(const std::vector<Role>& roles) {
  Json a = Json::array();
  for (Role r : roles) a.push_back(std::string(to_string(r)));
  return a;
}

inline std::vector<Role> roles_from(const Json& j, const std::string& what) {
  require(j.is_array(), what + ": expected an array of roles");
  std::vector<Role> out;
  for (const auto& r : j) {
    require(r.is_string(), what + ": roles must be strings");
    out.push_back(role_from_string(r.get<std::string>()));
  }
  return out;
}

inline Json config_json(const RetargetConfig& c) {
  return {{"w_kin", c.w_kin},
          {"w_con_stage1", c.w_con_stage1},
          {"w_con_stage2", c.w_con_stage2},
          {"w_hum", c.w_hum},
          {"w_temp", c.w_temp},
          {"w_pose", c.w_pose},
          {"w_a", c.w_a},
          {"stage1", {{"iterations", c.stage1.iterations}, {"lr", c.stage1.learning_rate}}},
          {"stage2", {{"iterations", c.stage2.iterations}, {"lr", c.stage2.learning_rate}}},
          {"smoothing", {{"enabled", c.smoothing.enabled}, {"kernel", c.smoothing.kernel}, {"sigma", c.smoothing.sigma}}},
          {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"epsilon", c.adam.epsilon}}},
          {"keypoint_roles", roles_json(c.keypoint_roles)},
          {"upper_body_roles", roles_json(c.upper_body_roles)},
          {"seed", c.seed}};
}

/// Applies the keys present in `j` on top of `c`.
inline void apply_config(const Json& j, RetargetConfig& c) {
  const std::string what = "config";
  check_keys(j, {"w_kin", "w_con_stage1", "w_con_stage2", "w_hum", "w_temp", "w_pose", "w_a", "stage1", "stage2",
                 "smoothing", "adam", "keypoint_roles", "upper_body_roles", "seed"},
             what);
  get_to(j, "w_kin", c.w_kin, what);
  get_to(j, "w_con_stage1", c.w_con_stage1, what);
  get_to(j, "w_con_stage2", c.w_con_stage2, what);
  get_to(j, "w_hum", c.w_hum, what);
  get_to(j, "w_temp", c.w_temp, what);
  get_to(j, "w_pose", c.w_pose, what);
  get_to(j, "w_a", c.w_a, what);
  for (auto [key, stage] : {std::pair{"stage1", &c.stage1}, std::pair{"stage2", &c.stage2}}) {
    if (!j.contains(key)) continue;
    const std::string sw = what + " " + key;
    check_keys(j.at(key), {"iterations", "lr"}, sw);
    get_to(j.at(key), "iterations", stage->iterations, sw);
    get_to(j.at(key), "lr", stage->learning_rate, sw);
  }
  if (j.contains("smoothing")) {
    const Json& s = j.at("smoothing");
    check_keys(s, {"enabled", "kernel", "sigma"}, what + " smoothing");
    get_to(s, "enabled", c.smoothing.enabled, what);
    get_to(s, "kernel", c.smoothing.kernel, what);
    get_to(s, "sigma", c.smoothing.sigma, what);
  }
  if (j.contains("adam")) {
    const Json& a = j.at("adam");
    check_keys(a, {"beta1", "beta2", "epsilon"}, what + " adam");
    get_to(a, "beta1", c.adam.beta1, what);
    get_to(a, "beta2", c.adam.beta2, what);
    get_to(a, "epsilon", c.adam.epsilon, what);
  }
  if (j.contains("keypoint_roles")) c.keypoint_roles = roles_from(j.at("keypoint_roles"), what + " keypoint_roles");
  if (j.contains("upper_body_roles")) {
    c.upper_body_roles = roles_from(j.at("upper_body_roles"), what + " upper_body_roles");
  }
  get_to(j, "seed", c.seed, what);
  c.validate();
}

inline Json detection_config_json(const DetectionConfig& c) {
  return {{"hug",
           {{"hand_dist", c.hug.hand_dist},
            {"body", c.hug.body},
            {"shoulder", c.hug.shoulder},
            {"min_frames", c.hug.min_frames}}},
          {"highfive",
           {{"contact", c.highfive.contact},
            {"min_approach", c.highfive.min_approach},
            {"max_sustained", c.highfive.max_sustained},
            {"height", c.highfive.height},
            {"height_validation", c.highfive.height_validation}}},
          {"handshake",
           {{"contact", c.handshake.contact},
            {"min_contact", c.handshake.min_contact},
            {"min_dist", c.handshake.min_dist},
            {"max_dist", c.handshake.max_dist},
            {"std_contact", c.handshake.std_contact},
            {"mean_contact", c.handshake.mean_contact}}},
          {"wave",
           {{"motion_dist", c.wave.motion_dist},
            {"min_changes", c.wave.min_changes},
            {"amplitude", c.wave.amplitude},
            {"angle", c.wave.angle},
            {"height", c.wave.height},
            {"displacement_guard", c.wave.displacement_guard}}},
          {"bend", {{"min_angle", c.bend.min_angle}, {"min_frames", c.bend.min_frames}}},
          {"flykiss",
           {{"hand2head", c.flykiss.hand2head},
            {"forward_thresh", c.flykiss.forward_thresh},
            {"min_forward", c.flykiss.min_forward}}}};
}

inline void apply_detection_config(const Json& j, DetectionConfig& c) {
  const std::string what = "detection config";
  check_keys(j, {"hug", "highfive", "handshake", "wave", "bend", "flykiss"}, what);
  if (j.contains("hug")) {
    const Json& s = j.at("hug");
    check_keys(s, {"hand_dist", "body", "shoulder", "min_frames"}, what + " hug");
    get_to(s, "hand_dist", c.hug.hand_dist, what);
    get_to(s, "body", c.hug.body, what);
    get_to(s, "shoulder", c.hug.shoulder, what);
    get_to(s, "min_frames", c.hug.min_frames, what);
  }
  if (j.contains("highfive")) {
    const Json& s = j.at("highfive");
    check_keys(s, {"contact", "min_approach", "max_sustained", "height", "height_validation"}, what + " highfive");
    get_to(s, "contact", c.highfive.contact, what);
    get_to(s, "min_approach", c.highfive.min_approach, what);
    get_to(s, "max_sustained", c.highfive.max_sustained, what);
    get_to(s, "height", c.highfive.height, what);
    get_to(s, "height_validation", c.highfive.height_validation, what);
  }
  if (j.contains("handshake")) {
    const Json& s = j.at("handshake");
    check_keys(s, {"contact", "min_contact", "min_dist", "max_dist", "std_contact", "mean_contact"},
               what + " handshake");
    get_to(s, "contact", c.handshake.contact, what);
    get_to(s, "min_contact", c.handshake.min_contact, what);
    get_to(s, "min_dist", c.handshake.min_dist, what);
    get_to(s, "max_dist", c.handshake.max_dist, what);
    get_to(s, "std_contact", c.handshake.std_contact, what);
    get_to(s, "mean_contact", c.handshake.mean_contact, what);
  }
  if (j.contains("wave")) {
    const Json& s = j.at("wave");
    check_keys(s, {"motion_dist", "min_changes", "amplitude", "angle", "height", "displacement_guard"}, what + " wave");
    get_to(s, "motion_dist", c.wave.motion_dist, what);
    get_to(s, "min_changes", c.wave.min_changes, what);
    get_to(s, "amplitude", c.wave.amplitude, what);
    get_to(s, "angle", c.wave.angle, what);
    get_to(s, "height", c.wave.height, what);
    get_to(s, "displacement_guard", c.wave.displacement_guard, what);
  }
  if (j.contains("bend")) {
    const Json& s = j.at("bend");
    check_keys(s, {"min_angle", "min_frames"}, what + " bend");
    get_to(s, "min_angle", c.bend.min_angle, what);
    get_to(s, "min_frames", c.bend.min_frames, what);
  }
  if (j.contains("flykiss")) {
    const Json& s = j.at("flykiss");
    check_keys(s, {"hand2head", "forward_thresh", "min_forward"}, what + " flykiss");
    get_to(s, "hand2head", c.flykiss.hand2head, what);
    get_to(s, "forward_thresh", c.flykiss.forward_thresh, what);
    get_to(s, "min_forward", c.flykiss.min_forward, what);
  }
  c.validate();
}

// ---- results ----

inline Json breakdown_json(const LossBreakdown& l) {
  return {{"total", l.total}, {"kin", l.kin}, {"con", l.con}, {"hum", l.hum}, {"temp", l.temp}, {"pose", l.pose}};
}

inline Json scores_json(const ContactScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"accuracy", s.accuracy},
          {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}, {"tn", s.tn}};
}

inline Json metrics_json(const MetricsReport& r) {
  Json contact = Json::array();
  for (const auto& c : r.contact) {
    Json e = scores_json(c.scores);
    e["tau"] = c.tau;
    contact.push_back(e);
  }
  return {{"jpe", r.jpe},
          {"awd", r.awd},
          {"contact", contact},
          {"large_angle_ratio", r.large_angle_ratio},
          {"angle_std", r.angle_std},
          {"jerk_mean", r.jerk_mean},
          {"jerk_std", r.jerk_std}};
}

inline Json outcome_json(const DetectionOutcome& o) {
  Json checks = Json::object();
  for (const auto& [n, v] : o.checks) checks[n] = v;
  Json measures = Json::object();
  for (const auto& [n, v] : o.measures) measures[n] = v;
  return {{"success", o.success}, {"combine", o.any_of ? "any" : "all"}, {"checks", checks}, {"measures", measures}};
}

inline Json fit_json(const Skeleton& source, const MorphologyFit& fit) {
  Json per_bone = Json::object();
  for (int j = 0; j < source.joint_count(); ++j) {
    per_bone[source.joint(j).name] = fit.per_bone_scale[static_cast<std::size_t>(j)];
  }
  return {{"global_scale", fit.global_scale}, {"per_bone_scale", per_bone}, {"residual", fit.residual}};
}

// ---- scheduler ----

inline AnchorPlan plan_from(const Json& j, std::size_t index) {
  const std::string what = "anchor plan " + std::to_string(index);
  check_keys(j, {"call_time", "anchors"}, what);
  AnchorPlan p;
  p.call_time = get<double>(j, "call_time", what);
  require(j.contains("anchors") && j.at("anchors").is_array() && j.at("anchors").size() == 5,
          what + ": exactly 5 anchors required");
  for (std::size_t k = 0; k < 5; ++k) {
    const auto v = numbers(j.at("anchors")[k], kReferenceDim, what + " anchor " + std::to_string(k));
    std::copy(v.begin(), v.end(), p.anchors[k].begin());
  }
  p.validate();
  return p;
}

inline Json plan_json(const AnchorPlan& p) {
  Json anchors = Json::array();
  for (const auto& a : p.anchors) anchors.push_back(std::vector<double>(a.begin(), a.end()));
  return {{"call_time", p.call_time}, {"anchors", anchors}};
}

/// A dense 36-D reference viewed as a motion of the 29-DoF robot.
inline MotionSequence reference_motion(const DenseTrajectory& d, const std::string& skeleton_id) {
  MotionSequence m;
  m.fps = kGridRate;
  m.skeleton_id = skeleton_id;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto row = d.frames.row(i);
    FramePose f;
    f.joint_params.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(kJointTargets));
    f.root_pos = {row[kTranslationOffset], row[kTranslationOffset + 1], row[kTranslationOffset + 2]};
    f.root_quat = {row[kQuatOffset], row[kQuatOffset + 1], row[kQuatOffset + 2], row[kQuatOffset + 3]};
    m.frames.push_back(std::move(f));
  }
  return m;
}

inline PhaseSegmentation phases_from(const Json& j) {
  const std::string what = "phases";
  check_keys(j, {"labels", "preparation", "act", "follow_up"}, what);
  if (j.contains("labels")) {
    std::vector<Phase> labels;
    for (const auto& l : j.at("labels")) {
      require(l.is_string(), what + ": labels must be strings");
      const auto s = l.get<std::string>();
      if (s == "preparation") {
        labels.push_back(Phase::kPreparation);
      } else if (s == "act") {
        labels.push_back(Phase::kAct);
      } else if (s == "follow_up") {
        labels.push_back(Phase::kFollowUp);
      } else {
        throw InputError(what + ": unknown phase label '" + s + "'");
      }
    }
    return PhaseSegmentation::from_labels(labels);
  }
  PhaseSegmentation s;
  s.preparation = get<std::size_t>(j, "preparation", what);
  s.act = get<std::size_t>(j, "act", what);
  s.follow_up = get<std::size_t>(j, "follow_up", what);
  require(s.act >= 1, what + ": Act segment is empty");
  return s;
}

}  // namespace pair::io
