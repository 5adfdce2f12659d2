#include "pbench/cli/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/results.hpp"
#include "pbench/geometry/gauge.hpp"
#include "pbench/geometry/relief.hpp"
#include "pbench/geometry/triangulation_io.hpp"
#include "pbench/stats/clicks.hpp"
#include "pbench/stats/modes.hpp"
#include "pbench/stats/regression.hpp"
#include "pbench/stats/student_t.hpp"
#include "pbench/stats/ttest.hpp"

namespace pbench {

namespace fs = std::filesystem;

std::string safe_file_stem(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "_" : out;
}

namespace {

std::string num(double v) { return format_number(v); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SessionFile {
  std::string name;  // file name
  std::vector<ResultRecord> records;
};

struct Inputs {
  std::vector<SessionFile> sessions;
  std::vector<SessionFile> descriptions;
  std::vector<std::pair<std::string, std::string>> skipped;
};

constexpr std::string_view kDescriptionsSuffix = ".descriptions.csv";

// Which schema a header belongs to, if any.
std::optional<ResultSchema> schema_of_header(const std::vector<std::string>& header) {
  for (auto s : {ResultSchema::Flicker, ResultSchema::Bubble, ResultSchema::Descriptions, ResultSchema::Gauge,
                 ResultSchema::Composition, ResultSchema::Perspective}) {
    if (schema_header(s) == header) return s;
  }
  return std::nullopt;
}

Inputs load_inputs(Paradigm paradigm, const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::InvalidInput, "results directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  Inputs in;
  const auto expected = schema_for(paradigm);
  for (const auto& f : files) {
    const auto name = f.filename().string();
    const bool sidecar = name.ends_with(kDescriptionsSuffix);
    const auto want = sidecar ? ResultSchema::Descriptions : expected;
    TrialTable table;
    try {
      table = parse_trial_table(read_file(f));
    } catch (const Error& e) {
      in.skipped.emplace_back(name, e.what());
      continue;
    }
    const auto found = schema_of_header(table.header());
    if (found && *found != want && !(sidecar && paradigm != Paradigm::Bubble)) {
      fail(ErrorKind::InvalidInput, "mixed paradigms: " + name + " holds " + std::string(to_string(*found)) +
                                        " results, expected " + std::string(to_string(want)));
    }
    if (sidecar && paradigm != Paradigm::Bubble) {
      in.skipped.emplace_back(name, "descriptions sidecar ignored for " + std::string(to_string(paradigm)));
      continue;
    }
    try {
      auto records = parse_results(want, table);
      (sidecar ? in.descriptions : in.sessions).push_back({name, std::move(records)});
    } catch (const Error& e) {
      in.skipped.emplace_back(name, e.what());
    }
  }
  std::size_t total = 0;
  for (const auto& s : in.sessions) total += s.records.size();
  if (total == 0) fail(ErrorKind::InvalidInput, "no usable " + std::string(to_string(paradigm)) + " results in " + dir.string());
  return in;
}

class BundleWriter {
 public:
  explicit BundleWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot write " + (dir_ / name).string());
    out << content;
    files_.push_back(name);
  }

  std::vector<std::string> files() const {
    auto f = files_;
    std::sort(f.begin(), f.end());
    return f;
  }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

template <class R>
std::vector<R> collect(const std::vector<SessionFile>& files) {
  std::vector<R> out;
  for (const auto& f : files) {
    auto part = records_as<R>(f.records);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---------------------------------------------------------------- flicker

void analyze_flicker(const ExperimentSpec& spec, const Inputs& in, BundleWriter& out, std::ostringstream& summary) {
  const auto records = collect<FlickerRecord>(in.sessions);
  const auto valid = filter_valid_trials(records, spec);
  const double max_rt = spec.parameter("reveal-ms");
  const double radius = spec.parameter("correct-radius");

  std::string clicks = "session,trial,imageName,clickX,clickY,rtMs,revealed,correct,valid\n";
  for (const auto& r : records) {
    const auto* s = spec.find_stimulus(r.image_name);
    const bool correct = classify_click({r.click_x, r.click_y}, target_center_px(*s), {s->width_px, s->height_px}, radius);
    const bool ok = correct && !r.revealed && r.rt_ms <= max_rt;
    clicks += write_csv_row({r.session, std::to_string(r.trial), r.image_name, num(r.click_x), num(r.click_y),
                             num(r.rt_ms), r.revealed ? "1" : "0", correct ? "1" : "0", ok ? "1" : "0"});
  }
  out.write("flicker_clicks.csv", clicks);

  std::map<std::string, std::vector<double>> by_image, by_group;
  for (const auto& r : valid) {
    by_image[r.image_name].push_back(r.rt_ms / 1000.0);
    const auto* s = spec.find_stimulus(r.image_name);
    if (s->group) by_group[*s->group].push_back(r.rt_ms / 1000.0);
  }
  std::string per_image = "imageName,group,n,meanS,sdS\n";
  for (const auto& [image, rts] : by_image) {
    const auto s = summarize(rts);
    const auto* stim = spec.find_stimulus(image);
    per_image += write_csv_row({image, stim->group.value_or(""), std::to_string(s.n), num(s.mean), num(s.sd)});
  }
  out.write("flicker_rt_by_image.csv", per_image);

  summary << "trials: " << records.size() << " recorded, " << valid.size() << " valid (unrevealed, rt <= "
          << num(max_rt) << " ms, click within " << num(radius) << " of target)\n";
  if (by_group.size() != 2) {
    summary << "t-test: skipped, need exactly two stimulus groups among valid trials, found " << by_group.size() << "\n";
    return;
  }
  const auto& [name_a, a] = *by_group.begin();
  const auto& [name_b, b] = *std::next(by_group.begin());
  const auto t = ttest_independent(a, b);
  std::string table = "groupA,groupB,nA,nB,meanA_s,sdA_s,meanB_s,sdB_s,t,df,p\n";
  table += write_csv_row({name_a, name_b, std::to_string(t.n_a), std::to_string(t.n_b), num(t.mean_a), num(t.sd_a),
                          num(t.mean_b), num(t.sd_b), num(t.t), std::to_string(t.df), num(t.p)});
  out.write("flicker_ttest.csv", table);
  summary << "t-test " << name_a << " vs " << name_b << ": M=" << num(t.mean_a) << "s SD=" << num(t.sd_a)
          << "s vs M=" << num(t.mean_b) << "s SD=" << num(t.sd_b) << "s, t(" << t.df << ") = " << num(t.t)
          << ", p = " << num(t.p) << "\n";
}

// ---------------------------------------------------------------- bubble

void analyze_bubble(const ExperimentSpec& spec, const Inputs& in, BundleWriter& out, std::ostringstream& summary) {
  const auto records = collect<BubbleRecord>(in.sessions);
  const double display_radius = spec.parameter("radius-px");
  const double display_width = spec.parameter("display-width-px");

  std::map<std::string, std::vector<Point2>> clicks;
  for (const auto& r : records) {
    if (!spec.find_stimulus(r.image_name)) fail(ErrorKind::InvalidInput, "bubble record names unknown stimulus '" + r.image_name + "'");
    clicks[r.image_name].push_back({r.x, r.y});
  }
  std::string index = "imageName,widthPx,heightPx,radiusPx,clicks,grid\n";
  for (const auto& [image, pts] : clicks) {
    const auto* s = spec.find_stimulus(image);
    // Clicks are in image pixels; the aperture was specified at display width.
    const double radius = display_radius * s->width_px / display_width;
    const auto grid = click_density(pts, {s->width_px, s->height_px}, radius);
    const auto stem = "bubble_density_" + safe_file_stem(image);
    out.write(stem + ".csv", density_to_csv(grid));
    out.write(stem + ".pgm", density_to_pgm(grid));
    index += write_csv_row({image, std::to_string(s->width_px), std::to_string(s->height_px), num(radius),
                            std::to_string(pts.size()), stem});
    summary << "image " << image << ": " << pts.size() << " clicks, aperture " << num(radius) << " px\n";
  }
  out.write("bubble_maps.csv", index);

  if (!in.descriptions.empty()) {
    std::vector<ResultRecord> all;
    for (const auto& f : in.descriptions) all.insert(all.end(), f.records.begin(), f.records.end());
    out.write("bubble_descriptions.csv", serialize_results(ResultSchema::Descriptions, all));
    summary << "descriptions: " << all.size() << "\n";
  }
}

// ---------------------------------------------------------------- gauge

void analyze_gauge(const ExperimentSpec& spec, const Inputs& in, BundleWriter& out, std::ostringstream& summary,
                   std::vector<std::pair<std::string, std::string>>& skipped) {
  if (!spec.triangulation) fail(ErrorKind::InvalidInput, "gauge experiment '" + spec.id + "' has no triangulation");
  const auto& tri = *spec.triangulation;
  out.write("triangulation.csv", write_triangulation_csv(tri));

  struct Observer {
    std::string session;
    double range;
    double rms;
  };
  std::vector<Observer> observers;
  for (const auto& file : in.sessions) {
    const auto recs = records_as<GaugeRecord>(file.records);
    std::vector<GradientSample> samples;
    std::set<std::string> sessions;
    try {
      for (const auto& r : recs) {
        sessions.insert(r.session);
        const auto g = slant_tilt_to_gradient(deg2rad(r.slant_deg), deg2rad(r.tilt_deg));
        samples.push_back({static_cast<std::size_t>(r.point_index), g.p, g.q});
      }
      if (sessions.size() != 1) fail(ErrorKind::InvalidInput, "file must hold exactly one session");
      const auto surface = reconstruct_relief(tri, samples);
      const auto& session = *sessions.begin();
      out.write("relief_" + safe_file_stem(session) + ".csv", write_relief_csv(tri, surface));
      observers.push_back({session, relief_depth_range(surface), surface.rms_misfit});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidInput) throw;
      skipped.emplace_back(file.name, e.what());
    }
  }
  if (observers.empty()) fail(ErrorKind::InvalidInput, "no gauge session covers the triangulation");
  std::stable_sort(observers.begin(), observers.end(), [](const Observer& a, const Observer& b) {
    return a.range != b.range ? a.range < b.range : a.session < b.session;
  });
  std::string table = "rank,session,depthRange,rmsMisfit\n";
  for (std::size_t i = 0; i < observers.size(); ++i) {
    table += write_csv_row({std::to_string(i + 1), observers[i].session, num(observers[i].range), num(observers[i].rms)});
  }
  out.write("gauge_depth_ranges.csv", table);
  summary << "observers reconstructed: " << observers.size() << " over " << tri.vertex_count() << " vertices / "
          << tri.triangle_count() << " triangles\n";
  summary << "depth ranges, shallow to deep:";
  for (const auto& o : observers) summary << " " << o.session << "=" << num(o.range);
  summary << "\n";
}

// ---------------------------------------------------------------- composition

void analyze_composition(const ExperimentSpec& spec, const Inputs& in, const AnalyzeOptions& opt, BundleWriter& out,
                         std::ostringstream& summary) {
  const auto records = collect<CompositionRecord>(in.sessions);
  const auto& canvas = spec.stimuli.front();
  const double bandwidth = opt.bandwidth.value_or(spec.parameter("bandwidth-fraction") * canvas.width_px);
  std::vector<double> xs;
  for (const auto& r : records) xs.push_back(r.x);
  const auto peaks = composition_modes(xs, bandwidth);

  std::string modes = "rank,x,density\n";
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    modes += write_csv_row({std::to_string(i + 1), num(peaks[i].x), num(peaks[i].density)});
  }
  out.write("composition_modes.csv", modes);

  std::string curve = "x,density\n";
  for (int x = 0; x <= canvas.width_px; ++x) {
    curve += std::to_string(x) + "," + num(kde_density(xs, bandwidth, x)) + "\n";
  }
  out.write("composition_kde.csv", curve);

  std::vector<Point2> placements;
  for (const auto& r : records) {
    placements.push_back({std::clamp(r.x, 0.0, static_cast<double>(canvas.width_px)),
                          std::clamp(r.y, 0.0, static_cast<double>(canvas.height_px))});
  }
  const auto grid = click_density(placements, {canvas.width_px, canvas.height_px}, bandwidth);
  out.write("composition_density.csv", density_to_csv(grid));
  out.write("composition_density.pgm", density_to_pgm(grid));

  summary << "placements: " << xs.size() << ", bandwidth " << num(bandwidth) << " px, modes: " << peaks.size() << "\n";
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    summary << "  mode " << i + 1 << ": x=" << num(peaks[i].x) << " density=" << num(peaks[i].density) << "\n";
  }
}

// ---------------------------------------------------------------- perspective

std::string report_row(const std::string& name, double estimate, double stderr_, double t, int df, double p) {
  return write_csv_row({name, num(estimate), num(stderr_), num(t), std::to_string(df), num(p)});
}

void analyze_perspective(const ExperimentSpec& spec, const Inputs& in, const AnalyzeOptions& opt, BundleWriter& out,
                         std::ostringstream& summary, std::vector<std::pair<std::string, std::string>>& skipped) {
  const auto records = collect<PerspectiveRecord>(in.sessions);
  std::map<std::string, std::vector<PerspectiveRecord>> by_image;
  for (const auto& r : records) {
    if (!spec.find_stimulus(r.image_name)) fail(ErrorKind::InvalidInput, "perspective record names unknown stimulus '" + r.image_name + "'");
    by_image[r.image_name].push_back(r);
  }

  const std::string header = "name,estimate,stderr,t,df,p\n";
  std::string fits = header, elevations = header;
  std::vector<double> years, heights;
  for (const auto& [image, recs] : by_image) {
    ImageElevation e;
    try {
      e = estimate_image_elevation(recs, opt.offset_mode, opt.horizon_annotator);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::InvalidInput) throw;
      skipped.emplace_back("image " + image, err.what());
      continue;
    }
    for (const auto& [annotator, f] : e.per_horizon) {
      fits += report_row(image + "|" + annotator, f.h, f.stderr_h, f.t, f.df, f.p);
      if (f.mode == OffsetMode::FreeOffset) {
        fits += report_row(image + "|" + annotator + "|offset", f.offset, f.offset_stderr,
                           f.offset_stderr > 0 ? f.offset / f.offset_stderr : 0.0, f.df,
                           f.offset_stderr > 0 ? student_t_two_sided_p(f.offset / f.offset_stderr, f.df) : 1.0);
      }
    }
    const auto& a = e.aggregate;
    elevations += report_row(image, a.h, a.stderr_h, a.t, a.df, a.p);
    summary << "image " << image << ": h=" << num(a.h) << " body heights (horizon of " << e.aggregate_source << ", "
            << e.figure_count << " figures, " << e.per_horizon.size() << " horizon(s))\n";
    if (const auto* s = spec.find_stimulus(image); s && s->year) {
      years.push_back(*s->year);
      heights.push_back(a.h);
    }
  }
  out.write("perspective_fits.csv", fits);
  out.write("perspective_elevations.csv", elevations);

  if (years.size() < 3) {
    summary << "trend: skipped, " << years.size() << " dated image(s)\n";
    return;
  }
  const auto trend = fit_trend(years, heights);
  std::string table = header;
  table += report_row("slope", trend.slope, trend.slope_stderr, trend.t, trend.df, trend.p);
  const double ti = trend.intercept_stderr > 0 ? trend.intercept / trend.intercept_stderr : 0.0;
  table += report_row("intercept", trend.intercept, trend.intercept_stderr, ti, trend.df,
                      trend.intercept_stderr > 0 ? student_t_two_sided_p(ti, trend.df) : 1.0);
  out.write("perspective_trend.csv", table);
  summary << "trend over " << years.size() << " images: slope " << num(trend.slope) << " per year, t(" << trend.df
          << ") = " << num(trend.t) << ", p = " << num(trend.p) << "\n";
}

}  // namespace

ReportBundle cmd_analyze(Paradigm paradigm, const ExperimentSpec& spec, const AnalyzeOptions& options) {
  if (spec.paradigm != paradigm) {
    fail(ErrorKind::InvalidInput, "experiment '" + spec.id + "' is a " + std::string(to_string(spec.paradigm)) +
                                      " experiment, not " + std::string(to_string(paradigm)));
  }
  auto in = load_inputs(paradigm, options.results_dir);
  BundleWriter out(options.out_dir);
  std::ostringstream body;
  switch (paradigm) {
    case Paradigm::Flicker: analyze_flicker(spec, in, out, body); break;
    case Paradigm::Bubble: analyze_bubble(spec, in, out, body); break;
    case Paradigm::Gauge: analyze_gauge(spec, in, out, body, in.skipped); break;
    case Paradigm::Composition: analyze_composition(spec, in, options, out, body); break;
    case Paradigm::Perspective: analyze_perspective(spec, in, options, out, body, in.skipped); break;
  }

  std::ostringstream summary;
  summary << "pbench analyze " << to_string(paradigm) << "\n";
  summary << "experiment: " << spec.id << " (seed " << spec.seed << ")\n";
  summary << "seed: " << options.seed << "\n";
  summary << "offset-mode: " << to_string(options.offset_mode) << "\n";
  summary << "horizon-annotator: " << options.horizon_annotator.value_or("(median)") << "\n";
  summary << "bandwidth: " << (options.bandwidth ? num(*options.bandwidth) : std::string("(default)")) << "\n";
  summary << "inputs:\n";
  for (const auto& f : in.sessions) summary << "  parsed " << f.name << " (" << f.records.size() << " records)\n";
  for (const auto& f : in.descriptions) summary << "  parsed " << f.name << " (" << f.records.size() << " records)\n";
  for (const auto& [name, why] : in.skipped) summary << "  skipped " << name << ": " << why << "\n";
  summary << "results:\n" << body.str();
  out.write("summary.txt", summary.str());

  ReportBundle bundle;
  bundle.out_dir = options.out_dir;
  bundle.files = out.files();
  bundle.skipped = in.skipped;
  bundle.summary = summary.str();
  return bundle;
}

}  // namespace pbench
