#include "pbench/experiment/spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pbench/error.hpp"

namespace pbench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::pair<Paradigm, std::string_view> kParadigmNames[] = {
    {Paradigm::Flicker, "flicker"},
    {Paradigm::Bubble, "bubble"},
    {Paradigm::Gauge, "gauge"},
    {Paradigm::Composition, "composition"},
    {Paradigm::Perspective, "perspective"},
};

bool is_token(std::string_view s) {
  if (s.empty() || s.size() > 128) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
           c == '.';
  }) && s.front() != '.';
}

[[noreturn]] void spec_error(const std::string& id, const std::string& what) {
  fail(ErrorKind::InvalidInput, "experiment '" + id + "': " + what);
}

}  // namespace

std::string_view to_string(Paradigm p) noexcept {
  for (auto [k, name] : kParadigmNames) {
    if (k == p) return name;
  }
  return "unknown";
}

Paradigm paradigm_from_string(std::string_view name) {
  for (auto [k, n] : kParadigmNames) {
    if (n == name) return k;
  }
  fail(ErrorKind::InvalidInput, "unknown paradigm '" + std::string(name) + "'");
}

ParameterMap default_parameters(Paradigm p) {
  switch (p) {
    case Paradigm::Flicker:
      return {{"image-ms", 240}, {"blank-ms", 80}, {"reveal-ms", 60000}, {"correct-radius", 0.1}};
    case Paradigm::Bubble:
      return {{"radius-px", 32}, {"max-clicks", 20}, {"display-width-px", 600}, {"blur-sigma-px", 8}};
    case Paradigm::Gauge:
      return {{"max-trial-seconds", 3}, {"max-slant-deg", 89}};
    case Paradigm::Composition:
      return {{"bandwidth-fraction", 0.02}};
    case Paradigm::Perspective:
      return {{"min-figures", 10}, {"max-figures", 15}};
  }
  return {};
}

const StimulusRef* ExperimentSpec::find_stimulus(std::string_view name) const noexcept {
  for (const auto& s : stimuli) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

double ExperimentSpec::parameter(std::string_view key) const {
  if (auto it = parameters.find(key); it != parameters.end()) return it->second;
  const auto defaults = default_parameters(paradigm);
  if (auto it = defaults.find(key); it != defaults.end()) return it->second;
  spec_error(id, "no parameter '" + std::string(key) + "'");
}

void validate(const ExperimentSpec& spec) {
  if (!is_token(spec.id)) spec_error(spec.id, "id must be a nonempty token of [A-Za-z0-9._-]");
  for (const auto& [k, v] : spec.parameters) {
    if (!std::isfinite(v) || v <= 0) spec_error(spec.id, "parameter '" + k + "' must be strictly positive");
  }
  if (spec.stimuli.empty()) spec_error(spec.id, "no stimuli");
  std::set<std::string_view> names;
  for (const auto& s : spec.stimuli) {
    if (s.name.empty()) spec_error(spec.id, "stimulus with empty name");
    if (!names.insert(s.name).second) spec_error(spec.id, "duplicate stimulus '" + s.name + "'");
    if (s.width_px <= 0 || s.height_px <= 0) spec_error(spec.id, "stimulus '" + s.name + "' has non-positive size");
    if (spec.paradigm == Paradigm::Flicker) {
      if (!s.pair_uri || !s.target) spec_error(spec.id, "flicker stimulus '" + s.name + "' needs pairUri and targetEllipse");
    }
  }
  if (spec.trials.empty()) spec_error(spec.id, "empty trial table");

  if (spec.paradigm == Paradigm::Gauge) {
    if (!spec.triangulation) spec_error(spec.id, "gauge experiment without triangulation");
    const int col = spec.trials.column("pointIndex");
    if (col < 0) spec_error(spec.id, "gauge trial table needs a pointIndex column");
    for (std::size_t r = 0; r < spec.trials.size(); ++r) {
      const auto& f = spec.trials.rows()[r][static_cast<std::size_t>(col)];
      char* end = nullptr;
      const long v = std::strtol(f.c_str(), &end, 10);
      if (f.empty() || *end != '\0' || v < 0 || static_cast<std::size_t>(v) >= spec.triangulation->triangle_count()) {
        spec_error(spec.id, "trial row " + std::to_string(r + 1) + " references no triangle ('" + f + "')");
      }
    }
  } else {
    const int col = spec.trials.column("imageName");
    if (col < 0) spec_error(spec.id, "trial table needs an imageName column");
    for (std::size_t r = 0; r < spec.trials.size(); ++r) {
      const auto& name = spec.trials.rows()[r][static_cast<std::size_t>(col)];
      if (!spec.find_stimulus(name)) {
        spec_error(spec.id, "trial row " + std::to_string(r + 1) + " references unknown stimulus '" + name + "'");
      }
    }
  }
}

namespace {

template <class T>
T required(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key)) fail(ErrorKind::InvalidInput, ctx + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidInput, ctx + ": field '" + key + "': " + e.what());
  }
}

StimulusRef stimulus_from_json(const json& j, const std::string& ctx) {
  if (!j.is_object()) fail(ErrorKind::InvalidInput, ctx + ": stimulus must be an object");
  StimulusRef s;
  s.name = required<std::string>(j, "name", ctx);
  s.uri = j.value("uri", s.name);
  s.width_px = required<int>(j, "widthPx", ctx);
  s.height_px = required<int>(j, "heightPx", ctx);
  if (j.contains("pairUri")) s.pair_uri = required<std::string>(j, "pairUri", ctx);
  if (j.contains("targetEllipse")) {
    const auto& t = j.at("targetEllipse");
    const auto c = ctx + ".targetEllipse";
    s.target = TargetEllipse{required<double>(t, "cx", c), required<double>(t, "cy", c), required<double>(t, "rx", c),
                             required<double>(t, "ry", c)};
  }
  if (j.contains("group")) s.group = required<std::string>(j, "group", ctx);
  if (j.contains("year")) s.year = required<double>(j, "year", ctx);
  return s;
}

}  // namespace

ExperimentSpec experiment_from_json(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidInput, std::string("experiment json: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::InvalidInput, "experiment json: top level must be an object");

  ExperimentSpec spec;
  spec.id = required<std::string>(j, "id", "experiment");
  const std::string ctx = "experiment '" + spec.id + "'";
  spec.paradigm = paradigm_from_string(required<std::string>(j, "paradigm", ctx));
  spec.seed = required<std::uint64_t>(j, "seed", ctx);
  if (j.contains("parameters")) {
    for (const auto& [k, v] : j.at("parameters").items()) {
      if (!v.is_number()) fail(ErrorKind::InvalidInput, ctx + ": parameter '" + k + "' must be numeric");
      spec.parameters[k] = v.get<double>();
    }
  }
  const auto stimuli = required<json>(j, "stimuli", ctx);
  if (!stimuli.is_array()) fail(ErrorKind::InvalidInput, ctx + ": stimuli must be an array");
  for (std::size_t i = 0; i < stimuli.size(); ++i) {
    spec.stimuli.push_back(stimulus_from_json(stimuli[i], ctx + ".stimuli[" + std::to_string(i) + "]"));
  }

  const auto table = required<std::string>(j, "trialTableCsv", ctx);
  if (table.find('\n') == std::string::npos && table.ends_with(".csv")) {
    const auto path = base_dir / table;
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, ctx + ": cannot read trial table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    spec.trials = parse_trial_table(ss.str());
  } else {
    spec.trials = parse_trial_table(table);
  }

  if (j.contains("triangulation")) {
    const auto& t = j.at("triangulation");
    std::vector<Point2> pts;
    std::vector<Triangle> tris;
    try {
      for (const auto& p : t.at("points")) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      for (const auto& tr : t.at("triangles")) {
        tris.push_back({tr.at(0).get<std::size_t>(), tr.at(1).get<std::size_t>(), tr.at(2).get<std::size_t>()});
      }
    } catch (const json::exception& e) {
      fail(ErrorKind::InvalidInput, ctx + ": triangulation: " + e.what());
    }
    spec.triangulation = make_triangulation(std::move(pts), std::move(tris));
  }

  validate(spec);
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return experiment_from_json(ss.str(), file.parent_path());
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ": " + e.what());
  }
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  ordered_json j;
  j["id"] = spec.id;
  j["paradigm"] = std::string(to_string(spec.paradigm));
  j["seed"] = spec.seed;
  j["parameters"] = ordered_json::object();
  for (const auto& [k, v] : spec.parameters) j["parameters"][k] = v;
  j["stimuli"] = ordered_json::array();
  for (const auto& s : spec.stimuli) {
    ordered_json o;
    o["name"] = s.name;
    o["uri"] = s.uri;
    o["widthPx"] = s.width_px;
    o["heightPx"] = s.height_px;
    if (s.pair_uri) o["pairUri"] = *s.pair_uri;
    if (s.target) o["targetEllipse"] = {{"cx", s.target->cx}, {"cy", s.target->cy}, {"rx", s.target->rx}, {"ry", s.target->ry}};
    if (s.group) o["group"] = *s.group;
    if (s.year) o["year"] = *s.year;
    j["stimuli"].push_back(std::move(o));
  }
  j["trialTableCsv"] = write_csv(spec.trials);
  if (spec.triangulation) {
    ordered_json pts = ordered_json::array();
    for (const auto& p : spec.triangulation->points) pts.push_back({p.x, p.y});
    ordered_json tris = ordered_json::array();
    for (const auto& t : spec.triangulation->triangles) tris.push_back({t[0], t[1], t[2]});
    j["triangulation"] = {{"points", std::move(pts)}, {"triangles", std::move(tris)}};
  }
  return j.dump(2) + "\n";
}

}  // namespace pbench
