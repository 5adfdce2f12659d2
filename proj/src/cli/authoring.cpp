#include "pbench/cli/authoring.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pbench/cli/image_size.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/shuffle.hpp"
#include "pbench/geometry/delaunay.hpp"

namespace pbench {

namespace fs = std::filesystem;

std::vector<Point2> sample_points(std::size_t n, std::array<double, 4> region, std::uint64_t seed) {
  const auto [x0, y0, x1, y1] = region;
  if (!(x1 > x0) || !(y1 > y0)) fail(ErrorKind::InvalidInput, "sampling region is empty");
  constexpr std::size_t kCandidates = 20;
  Rng rng(seed);
  std::vector<Point2> out;
  out.reserve(n);
  while (out.size() < n) {
    Point2 best{};
    double best_d = -1.0;
    const std::size_t tries = out.empty() ? 1 : kCandidates;
    for (std::size_t c = 0; c < tries; ++c) {
      const Point2 p{rng.uniform(x0, x1), rng.uniform(y0, y1)};
      double d = std::numeric_limits<double>::infinity();
      for (const auto& q : out) d = std::min(d, (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y));
      if (d > best_d) {
        best_d = d;
        best = p;
      }
    }
    if (best_d == 0.0) continue;  // duplicate; draw again
    out.push_back(best);
  }
  return out;
}

namespace {

bool is_image(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".gif" || ext == ".pgm" || ext == ".ppm" || ext == ".pbm";
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string uri_for(const std::string& file) { return "/stimuli/" + file; }

std::vector<StimulusRef> read_manifest(const fs::path& dir) {
  const auto table = parse_trial_table(read_file(dir / "stimuli.csv"));
  const int name_col = table.column("name");
  if (name_col < 0) fail(ErrorKind::InvalidInput, "stimuli.csv: missing 'name' column");
  static const std::set<std::string> known{"name", "file", "widthPx", "heightPx", "pairFile", "targetCx",
                                           "targetCy", "targetRx", "targetRy", "group", "year"};
  for (const auto& h : table.header()) {
    if (!known.count(h)) fail(ErrorKind::InvalidInput, "stimuli.csv: unknown column '" + h + "'");
  }

  std::vector<StimulusRef> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    const auto where = "stimuli.csv: row " + std::to_string(r + 1);
    auto cell = [&](const char* name) -> std::optional<std::string> {
      const int c = table.column(name);
      if (c < 0 || row[static_cast<std::size_t>(c)].empty()) return std::nullopt;
      return row[static_cast<std::size_t>(c)];
    };
    auto number = [&](const char* name) -> std::optional<double> {
      const auto v = cell(name);
      if (!v) return std::nullopt;
      const auto d = parse_double(*v);
      if (!d) fail(ErrorKind::InvalidInput, where + ": " + name + " is not a number");
      return d;
    };
    auto integer = [&](const char* name) -> std::optional<int> {
      const auto v = cell(name);
      if (!v) return std::nullopt;
      const auto i = parse_int(*v);
      if (!i || *i <= 0 || *i > 1'000'000) fail(ErrorKind::InvalidInput, where + ": " + name + " must be a positive integer");
      return static_cast<int>(*i);
    };

    StimulusRef s;
    s.name = row[static_cast<std::size_t>(name_col)];
    const auto file = cell("file").value_or(s.name);
    s.uri = uri_for(file);
    const auto w = integer("widthPx");
    const auto h = integer("heightPx");
    if (w && h) {
      s.width_px = *w;
      s.height_px = *h;
    } else {
      const auto size = read_image_size(dir / file);
      s.width_px = w.value_or(size.width);
      s.height_px = h.value_or(size.height);
    }
    if (auto pf = cell("pairFile")) s.pair_uri = uri_for(*pf);
    const auto cx = number("targetCx"), cy = number("targetCy"), rx = number("targetRx"), ry = number("targetRy");
    if (cx || cy || rx || ry) {
      if (!(cx && cy && rx && ry)) fail(ErrorKind::InvalidInput, where + ": target needs targetCx, targetCy, targetRx and targetRy");
      s.target = TargetEllipse{*cx, *cy, *rx, *ry};
    }
    s.group = cell("group");
    s.year = number("year");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<StimulusRef> scan_images(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && is_image(e.path())) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<StimulusRef> out;
  for (const auto& f : files) {
    const auto size = read_image_size(f);
    StimulusRef s;
    s.name = f.filename().string();
    s.uri = uri_for(s.name);
    s.width_px = size.width;
    s.height_px = size.height;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

ExperimentSpec cmd_make_experiment(Paradigm paradigm, const fs::path& stimuli_dir, const MakeExperimentOptions& options) {
  if (!fs::is_directory(stimuli_dir)) fail(ErrorKind::InvalidInput, "stimulus directory " + stimuli_dir.string() + " does not exist");

  ExperimentSpec spec;
  spec.id = options.id;
  spec.paradigm = paradigm;
  spec.seed = options.seed;
  spec.parameters = default_parameters(paradigm);
  for (const auto& [k, v] : options.parameters) spec.parameters[k] = v;
  spec.stimuli = fs::exists(stimuli_dir / "stimuli.csv") ? read_manifest(stimuli_dir) : scan_images(stimuli_dir);
  if (spec.stimuli.empty()) fail(ErrorKind::InvalidInput, "no stimuli found in " + stimuli_dir.string());

  if (paradigm == Paradigm::Gauge) {
    const auto& s = spec.stimuli.front();
    const double w = s.width_px, h = s.height_px;
    const auto region = options.gauge_region.value_or(std::array<double, 4>{0.05 * w, 0.05 * h, 0.95 * w, 0.95 * h});
    if (options.gauge_points < 3) fail(ErrorKind::InvalidInput, "gauge experiments need at least 3 sample points");
    const auto points = sample_points(options.gauge_points, region, options.seed);
    spec.triangulation = delaunay_triangulate(points);
    const auto centres = barycentres(*spec.triangulation);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < centres.size(); ++i) {
      rows.push_back({std::to_string(i), format_number(centres[i].x), format_number(centres[i].y)});
    }
    spec.trials = TrialTable({"pointIndex", "px", "py"}, std::move(rows));
  } else {
    std::vector<std::vector<std::string>> rows;
    for (const auto& s : spec.stimuli) rows.push_back({s.name});
    spec.trials = TrialTable({"imageName"}, std::move(rows));
  }
  validate(spec);
  return spec;
}

}  // namespace pbench
