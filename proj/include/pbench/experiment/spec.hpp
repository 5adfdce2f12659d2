#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbench/experiment/csv.hpp"
#include "pbench/geometry/triangulation.hpp"

namespace pbench {

enum class Paradigm { Flicker, Bubble, Gauge, Composition, Perspective };

std::string_view to_string(Paradigm p) noexcept;
/// Throws InvalidInput for unknown names.
Paradigm paradigm_from_string(std::string_view name);

/// Target of a flicker change, in normalized image units: cx, rx as
/// fractions of the width, cy, ry as fractions of the height.
struct TargetEllipse {
  double cx = 0.0;
  double cy = 0.0;
  double rx = 0.0;
  double ry = 0.0;
  friend bool operator==(const TargetEllipse&, const TargetEllipse&) = default;
};

struct StimulusRef {
  std::string name;
  std::string uri;
  int width_px = 0;
  int height_px = 0;
  std::optional<std::string> pair_uri;        // flicker: modified image
  std::optional<TargetEllipse> target;        // flicker: changing object
  std::optional<std::string> group;           // flicker: condition label, e.g. easy/hard
  std::optional<double> year;                 // perspective: dating for the trend fit
  friend bool operator==(const StimulusRef&, const StimulusRef&) = default;
};

using ParameterMap = std::map<std::string, double, std::less<>>;

struct ExperimentSpec {
  std::string id;
  Paradigm paradigm = Paradigm::Flicker;
  std::uint64_t seed = 0;
  ParameterMap parameters;
  std::vector<StimulusRef> stimuli;
  TrialTable trials;
  std::optional<Triangulation> triangulation;  // gauge only, stored at authoring time

  const StimulusRef* find_stimulus(std::string_view name) const noexcept;
  /// Parameter value, falling back to the paradigm default. Throws if neither exists.
  double parameter(std::string_view key) const;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Paradigm defaults: flicker image-ms=240, blank-ms=80, reveal-ms=60000,
/// correct-radius=0.1; bubble radius-px=32, max-clicks=20,
/// display-width-px=600, blur-sigma-px=8; gauge max-trial-seconds=3,
/// max-slant-deg=89; composition bandwidth-fraction=0.02; perspective
/// min-figures=10, max-figures=15.
ParameterMap default_parameters(Paradigm p);

/// Throws InvalidInput describing the first violated invariant.
void validate(const ExperimentSpec& spec);

/// `trialTableCsv` is inline CSV text unless it is a single line ending in
/// ".csv", in which case it is a path relative to `base_dir`.
ExperimentSpec experiment_from_json(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment(const std::filesystem::path& file);
/// Pretty-printed JSON with the trial table inlined. Deterministic.
std::string experiment_to_json(const ExperimentSpec& spec);

}  // namespace pbench
