#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace pbench {

struct ServeConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::filesystem::path data_dir = "data";
  std::filesystem::path experiments_dir = "experiments";
  std::filesystem::path stimuli_dir;  // default: <experiments_dir>/stimuli
};

/// Overrides applied on top of the config file, most specific last:
/// file < environment (PBENCH_HOST, PBENCH_PORT, PBENCH_DATA_DIR,
/// PBENCH_EXPERIMENTS_DIR, PBENCH_STIMULI_DIR) < command-line flags.
struct ServeOverrides {
  std::optional<std::string> host;
  std::optional<int> port;
  std::optional<std::filesystem::path> data_dir;
  std::optional<std::filesystem::path> experiments_dir;
  std::optional<std::filesystem::path> stimuli_dir;
};

/// `config_file` is JSON with optional keys host, port, dataDir,
/// experimentsDir, stimuliDir; relative paths resolve against the file's
/// directory. Throws InvalidInput for malformed files or values.
ServeConfig resolve_serve_config(const std::optional<std::filesystem::path>& config_file,
                                 const ServeOverrides& flags);

}  // namespace pbench
