#include "pbench/cli/serve_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"

namespace pbench {

namespace {

int checked_port(long long v, const std::string& where) {
  if (v < 0 || v > 65535) fail(ErrorKind::InvalidInput, where + ": port out of range");
  return static_cast<int>(v);
}

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

}  // namespace

ServeConfig resolve_serve_config(const std::optional<std::filesystem::path>& config_file,
                                 const ServeOverrides& flags) {
  ServeConfig cfg;
  bool stimuli_set = false;

  if (config_file) {
    std::ifstream in(*config_file);
    if (!in) fail(ErrorKind::InvalidInput, "cannot read config " + config_file->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidInput, config_file->string() + ": " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::InvalidInput, config_file->string() + ": expected a JSON object");
    const auto base = config_file->parent_path();
    auto path_of = [&](const char* key, std::filesystem::path& dst) {
      if (!j.contains(key)) return false;
      if (!j[key].is_string()) fail(ErrorKind::InvalidInput, config_file->string() + ": " + key + " must be a string");
      std::filesystem::path p = j[key].get<std::string>();
      dst = p.is_absolute() ? p : base / p;
      return true;
    };
    for (const auto& [key, _] : j.items()) {
      if (key != "host" && key != "port" && key != "dataDir" && key != "experimentsDir" && key != "stimuliDir") {
        fail(ErrorKind::InvalidInput, config_file->string() + ": unknown key '" + key + "'");
      }
    }
    if (j.contains("host")) {
      if (!j["host"].is_string()) fail(ErrorKind::InvalidInput, config_file->string() + ": host must be a string");
      cfg.host = j["host"].get<std::string>();
    }
    if (j.contains("port")) {
      if (!j["port"].is_number_integer()) fail(ErrorKind::InvalidInput, config_file->string() + ": port must be an integer");
      cfg.port = checked_port(j["port"].get<long long>(), config_file->string());
    }
    path_of("dataDir", cfg.data_dir);
    path_of("experimentsDir", cfg.experiments_dir);
    stimuli_set = path_of("stimuliDir", cfg.stimuli_dir);
  }

  if (auto v = env("PBENCH_HOST")) cfg.host = *v;
  if (auto v = env("PBENCH_PORT")) {
    const auto port = parse_int(*v);
    if (!port) fail(ErrorKind::InvalidInput, "PBENCH_PORT: not an integer");
    cfg.port = checked_port(*port, "PBENCH_PORT");
  }
  if (auto v = env("PBENCH_DATA_DIR")) cfg.data_dir = *v;
  if (auto v = env("PBENCH_EXPERIMENTS_DIR")) cfg.experiments_dir = *v;
  if (auto v = env("PBENCH_STIMULI_DIR")) {
    cfg.stimuli_dir = *v;
    stimuli_set = true;
  }

  if (flags.host) cfg.host = *flags.host;
  if (flags.port) cfg.port = checked_port(*flags.port, "--port");
  if (flags.data_dir) cfg.data_dir = *flags.data_dir;
  if (flags.experiments_dir) cfg.experiments_dir = *flags.experiments_dir;
  if (flags.stimuli_dir) {
    cfg.stimuli_dir = *flags.stimuli_dir;
    stimuli_set = true;
  }
  if (!stimuli_set) cfg.stimuli_dir = cfg.experiments_dir / "stimuli";
  return cfg;
}

}  // namespace pbench
