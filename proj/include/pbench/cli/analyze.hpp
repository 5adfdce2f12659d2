#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pbench/experiment/spec.hpp"
#include "pbench/stats/elevation.hpp"

namespace pbench {

struct AnalyzeOptions {
  std::filesystem::path results_dir;
  std::filesystem::path out_dir;
  std::optional<double> bandwidth;  // composition; default bandwidth-fraction * canvas width
  OffsetMode offset_mode = OffsetMode::ThroughOrigin;
  std::optional<std::string> horizon_annotator;
  std::uint64_t seed = 0;  // recorded in the report header
};

/// Files written by one analysis run, plus inputs that were not used.
struct ReportBundle {
  std::filesystem::path out_dir;
  std::vector<std::string> files;                            // relative to out_dir, sorted
  std::vector<std::pair<std::string, std::string>> skipped;  // input file -> reason
  std::string summary;                                       // contents of summary.txt
};

/// Runs the paradigm's analysis over every session CSV in
/// options.results_dir (lexicographic order) and writes the bundle into
/// options.out_dir. Outputs depend only on the inputs and options.
///
/// Throws InvalidInput when the directory holds no usable results or a file
/// carries another paradigm's header; Analysis when a numerical step fails.
ReportBundle cmd_analyze(Paradigm paradigm, const ExperimentSpec& spec, const AnalyzeOptions& options);

/// File-name-safe version of an image or session name.
std::string safe_file_stem(std::string_view name);

}  // namespace pbench
