#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "pbench/cli/synthetic.hpp"
#include "pbench/experiment/csv.hpp"
#include "pbench/experiment/spec.hpp"

namespace fixture {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("pbench-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& sub) const { return path_ / sub; }

 private:
  fs::path path_;
};

inline std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline void install(const fs::path& experiments_dir, const pbench::ExperimentSpec& spec) {
  write(experiments_dir / (spec.id + ".json"), pbench::experiment_to_json(spec));
}

/// Replaces the session column of a result CSV; other bytes are untouched in
/// the sense that the result is the canonical serialization of the same rows.
inline std::string rebind_session(const std::string& csv, const std::string& session) {
  const auto table = pbench::parse_trial_table(csv);
  const auto col = static_cast<std::size_t>(table.column("session"));
  auto rows = table.rows();
  for (auto& r : rows) r[col] = session;
  return pbench::write_csv(pbench::TrialTable(table.header(), rows));
}

/// Every regular file below `dir`, relative, sorted.
inline std::vector<std::string> list_files(const fs::path& dir) {
  std::vector<std::string> out;
  if (!fs::exists(dir)) return out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir).string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fixture
