#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pbench/experiment/spec.hpp"

namespace pbench {

struct MakeExperimentOptions {
  std::string id;
  std::uint64_t seed = 1;
  std::size_t gauge_points = 64;
  /// Sampling rectangle (x0, y0, x1, y1) in pixels; defaults to the image
  /// inset by 5% on every side.
  std::optional<std::array<double, 4>> gauge_region;
  ParameterMap parameters;
};

/// Builds an experiment from a stimulus directory.
///
/// If the directory contains `stimuli.csv` it is the manifest, with columns
/// name (required) and optionally file, widthPx, heightPx, pairFile, targetCx,
/// targetCy, targetRx, targetRy, group, year. Otherwise every .png/.jpg/.jpeg/
/// .pgm/.ppm file becomes a stimulus named after the file. Missing sizes are
/// read from the image headers.
///
/// Gauge experiments get `gauge_points` well-spread sample points in the
/// region of the first stimulus (seeded best-candidate sampling), their
/// Delaunay triangulation, and one trial per triangle barycentre.
ExperimentSpec cmd_make_experiment(Paradigm paradigm, const std::filesystem::path& stimuli_dir,
                                   const MakeExperimentOptions& options);

/// Seeded best-candidate (Mitchell) sampling of `n` points in a rectangle.
std::vector<Point2> sample_points(std::size_t n, std::array<double, 4> region, std::uint64_t seed);

}  // namespace pbench
