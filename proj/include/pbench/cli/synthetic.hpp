#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pbench/experiment/shuffle.hpp"
#include "pbench/experiment/spec.hpp"

namespace pbench {

/// A generated experiment together with per-session result files, shaped
/// exactly as the collection service would store them.
struct SyntheticDataset {
  ExperimentSpec spec;
  std::map<std::string, std::string> results;       // session id -> CSV body
  std::map<std::string, std::string> descriptions;  // bubble only
};

/// Lognormal reaction time in milliseconds with the given mean and SD
/// (seconds), redrawn until it falls at or below `cap_s`.
double draw_reaction_time_ms(Rng& rng, double mean_s, double sd_s, double cap_s);

/// Flicker: easy (M 10.7 s, SD 14.1 s) and hard (M 25.1 s, SD 23.6 s) images;
/// exactly `valid_easy` + `valid_hard` trials survive the validity filter, the
/// rest are revealed or misplaced clicks.
SyntheticDataset synthetic_flicker(std::uint64_t seed, std::size_t valid_easy = 135, std::size_t valid_hard = 136);
SyntheticDataset synthetic_bubble(std::uint64_t seed);
/// 64 sample points; observers set noise-free gradients of scaled copies of
/// z = sin(pi u) sin(pi v), one scale per observer.
SyntheticDataset synthetic_gauge(std::uint64_t seed);
SyntheticDataset synthetic_composition(std::uint64_t seed);
/// 34 dated paintings whose viewpoint height falls by 0.1 body heights per
/// year; figures are exact pinhole projections.
SyntheticDataset synthetic_perspective(std::uint64_t seed);

/// Per-observer depth scale used by synthetic_gauge, by session id.
std::map<std::string, double> synthetic_gauge_scales(std::uint64_t seed);

}  // namespace pbench
