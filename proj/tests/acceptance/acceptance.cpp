// Acceptance run: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "../support/fixture.hpp"
#include "../support/oracles.hpp"
#include "pbench/cli/analyze.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/results.hpp"
#include "pbench/geometry/delaunay.hpp"
#include "pbench/geometry/relief.hpp"
#include "pbench/service/http_server.hpp"
#include "pbench/stats/clicks.hpp"
#include "pbench/stats/elevation.hpp"
#include "pbench/stats/ttest.hpp"

using namespace pbench;
using fixture::TempDir;
using nlohmann::json;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<Point2> random_points(std::size_t n, std::uint64_t seed, double size) {
  Rng rng(seed);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {rng.uniform(0, size), rng.uniform(0, size)};
  return pts;
}

// ------------------------------------------------------------------ relief

Outcome relief_exactness() {
  const auto pts = random_points(64, 20240101, 512);
  const auto start = std::chrono::steady_clock::now();
  const auto tri = delaunay_triangulate(pts);
  std::vector<GradientSample> samples;
  for (std::size_t t = 0; t < tri.triangle_count(); ++t) samples.push_back({t, 0.3, -0.2});
  const auto surface = reconstruct_relief(tri, samples);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  double mean = 0;
  for (const auto& p : pts) mean += 0.3 * p.x - 0.2 * p.y;
  mean /= static_cast<double>(pts.size());
  double err = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(surface.depths[i] - (0.3 * pts[i].x - 0.2 * pts[i].y - mean)));
  return {err < 1e-9 && ms < 1000, "max|err| = " + num(err) + ", runtime = " + num(ms) + " ms"};
}

Outcome relief_oracle() {
  const auto pts = random_points(10, 99, 1);
  const auto tri = delaunay_triangulate(pts);
  Rng rng(100);
  std::vector<GradientSample> samples;
  std::vector<oracle::SparseRow> rows;
  for (std::size_t t = 0; t < tri.triangle_count(); ++t) {
    samples.push_back({t, rng.uniform(-1, 1), rng.uniform(-1, 1)});
    const auto& v = tri.triangles[t];
    for (int k : {1, 2}) {
      const double dx = pts[v[k]].x - pts[v[0]].x, dy = pts[v[k]].y - pts[v[0]].y;
      rows.push_back({{{v[k], 1.0}, {v[0], -1.0}}, samples.back().p * dx + samples.back().q * dy});
    }
  }
  const auto expected = oracle::constrained_least_squares(rows, pts.size());
  const auto got = reconstruct_relief(tri, samples).depths;
  double err = 0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - expected[i]));
  return {err < 1e-8, "max|z - z_oracle| = " + num(err) + " over " + std::to_string(tri.triangle_count()) + " triangles"};
}

Outcome relief_smoothness() {
  const auto pts = random_points(64, 314, 1);
  const auto tri = delaunay_triangulate(pts);
  const auto c = barycentres(tri);
  std::vector<GradientSample> samples;
  for (std::size_t t = 0; t < c.size(); ++t) {
    samples.push_back({t, pi * std::cos(pi * c[t].x) * std::sin(pi * c[t].y), pi * std::sin(pi * c[t].x) * std::cos(pi * c[t].y)});
  }
  std::vector<double> truth;
  for (const auto& p : pts) truth.push_back(std::sin(pi * p.x) * std::sin(pi * p.y));
  const double r = oracle::pearson(reconstruct_relief(tri, samples).depths, truth);
  return {r > 0.99, "Pearson r = " + std::to_string(r)};
}

// ------------------------------------------------------------------ perspective

Outcome horizon_ratio() {
  // Level pinhole camera, eye 2 body heights above the ground, focal 1000 px.
  constexpr double eye = 2.0, f = 1000, horizon = 300;
  Rng rng(2);
  std::vector<FigureAnnotation> figs;
  for (int i = 0; i < 12; ++i) {
    const double z = rng.uniform(10, 80);
    FigureAnnotation a;
    a.foot_x = a.head_x = rng.uniform(0, 900);
    a.foot_y = horizon + f * eye / z;
    a.head_y = horizon + f * (eye - 1) / z;
    figs.push_back(a);
  }
  const auto e = fit_elevation(figs, horizon, OffsetMode::ThroughOrigin);
  return {std::abs(e.h - 2.0) <= 1e-9, "slope = " + format_number(e.h) + ", |err| = " + num(std::abs(e.h - 2.0))};
}

Outcome trend_structure(const fs::path& work) {
  const auto d = synthetic_perspective(34);
  for (const auto& [s, csv] : d.results) fixture::write(work / "persp" / (s + ".csv"), csv);
  AnalyzeOptions opt;
  opt.results_dir = work / "persp";
  opt.out_dir = work / "persp-report";
  cmd_analyze(Paradigm::Perspective, d.spec, opt);
  const auto table = parse_trial_table(fixture::read(work / "persp-report" / "perspective_trend.csv"));
  const auto& row = table.rows().at(0);
  const double slope = parse_double(row[1]).value();
  const auto df = parse_int(row[4]).value();
  const bool ok = row[0] == "slope" && std::abs(slope + 0.10) <= 1e-12 && df == 32 && d.spec.stimuli.size() == 34;
  return {ok, "slope = " + row[1] + ", df = " + row[4] + " over " + std::to_string(d.spec.stimuli.size()) + " paintings"};
}

// ------------------------------------------------------------------ flicker statistics

Outcome ttest_checks() {
  // Reference values from mpmath at 50 digits.
  const std::vector<double> a{1, 2, 3}, b{2, 3, 4};
  const auto r = ttest_independent(a, b);
  const double p_ref = 0.2878641347266906620019903, t_ref = -1.2247448713915890491;
  const double p_rel = std::abs(r.p - p_ref) / p_ref, t_rel = std::abs(r.t - t_ref) / std::abs(t_ref);

  const auto flicker = synthetic_flicker(1);
  std::vector<FlickerRecord> records;
  for (const auto& [s, csv] : flicker.results) {
    for (const auto& rec : records_as<FlickerRecord>(parse_results(ResultSchema::Flicker, csv))) records.push_back(rec);
  }
  const auto valid = filter_valid_trials(records, flicker.spec);
  std::vector<double> easy, hard;
  for (const auto& v : valid) (flicker.spec.find_stimulus(v.image_name)->group == "easy" ? easy : hard).push_back(v.rt_ms / 1000);
  const int df = ttest_independent(easy, hard).df;

  Rng rng(1000);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> x(2 + rng.below(30)), y(2 + rng.below(30));
    for (auto& v : x) v = rng.normal() * 3 + 1;
    for (auto& v : y) v = rng.normal() * 2;
    const auto base = ttest_independent(x, y);
    const auto swapped = ttest_independent(y, x);
    const double shift = rng.uniform(-50, 50), scale = rng.uniform(0.1, 10);
    auto xs = x, ys = y;
    for (auto& v : xs) v = v * scale + shift;
    for (auto& v : ys) v = v * scale + shift;
    const auto moved = ttest_independent(xs, ys);
    const bool ok = std::abs(swapped.t + base.t) <= 1e-12 * std::max(1.0, std::abs(base.t)) &&
                    std::abs(swapped.p - base.p) <= 1e-12 * std::max(1e-300, base.p) &&
                    std::abs(moved.t - base.t) <= 1e-8 * std::max(1.0, std::abs(base.t)) &&
                    std::abs(moved.p - base.p) <= 1e-8 * std::max(1e-300, base.p);
    violations += !ok;
  }
  const bool pass = p_rel <= 1e-10 && t_rel <= 1e-10 && valid.size() == 271 && df == 269 && violations == 0;
  return {pass, "3v3 p rel.err = " + num(p_rel) + ", " + std::to_string(valid.size()) + " filtered trials -> t(" +
                    std::to_string(df) + "), invariant violations = " + std::to_string(violations) + "/1000"};
}

Outcome correctness_boundary() {
  const ImageSize img{1200, 800};
  const Point2 centre{600, 400};
  bool ok = true;
  std::string got;
  const std::vector<std::pair<double, bool>> cases{{0.0999, true}, {0.1, true}, {0.1001, false}};
  for (double angle : {0.0, pi / 2, 3 * pi / 4, 4.0}) {
    for (const auto& [d, expected] : cases) {
      const Point2 click{centre.x + d * img.width * std::cos(angle), centre.y + d * img.width * std::sin(angle)};
      const bool r = classify_click(click, centre, img);
      ok = ok && r == expected;
      if (angle == 0.0) got += std::string(got.empty() ? "" : "/") + (r ? "true" : "false");
    }
  }
  return {ok, "0.0999/0.1/0.1001 -> " + got + " (4 directions)"};
}

Outcome rt_pipeline(const fs::path& work) {
  const auto d = synthetic_flicker(8);
  for (const auto& [s, csv] : d.results) fixture::write(work / "flicker" / (s + ".csv"), csv);
  AnalyzeOptions opt;
  opt.results_dir = work / "flicker";
  opt.out_dir = work / "flicker-report";
  cmd_analyze(Paradigm::Flicker, d.spec, opt);
  const auto table = parse_trial_table(fixture::read(work / "flicker-report" / "flicker_ttest.csv"));
  const auto& row = table.rows().at(0);
  const double t = parse_double(row[table.column("t")]).value(), p = parse_double(row[table.column("p")]).value();
  const auto na = row[table.column("nA")], nb = row[table.column("nB")];
  return {t < 0 && p < 0.001 && row[0] == "easy" && na == "135" && nb == "136",
          "easy(n=" + na + ") vs hard(n=" + nb + "): t(" + row[table.column("df")] + ") = " + num(t) + ", p = " + num(p)};
}

// ------------------------------------------------------------------ end to end

std::vector<SyntheticDataset> all_datasets(std::uint64_t seed) {
  return {synthetic_flicker(seed), synthetic_bubble(seed), synthetic_gauge(seed), synthetic_composition(seed),
          synthetic_perspective(seed)};
}

Outcome end_to_end(const fs::path& work) {
  const auto datasets = all_datasets(9);
  for (const auto& d : datasets) fixture::install(work / "experiments", d.spec);
  ServiceConfig cfg;
  cfg.data_dir = work / "data";
  cfg.experiments_dir = work / "experiments";
  auto service = std::make_unique<CollectionService>(cfg);
  auto server = std::make_unique<HttpServer>(*service);
  const int port = server->bind("127.0.0.1", 0);
  std::thread thread([&] { server->serve(); });
  server->wait_until_ready();
  httplib::Client cli("127.0.0.1", port);

  std::vector<std::string> problems;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) problems.push_back(what);
  };
  std::map<fs::path, std::string> uploaded;
  std::size_t put_count = 0, form_count = 0;

  for (const auto& d : datasets) {
    std::size_t k = 0;
    for (const auto& [name, csv] : d.results) {
      auto r = cli.Post("/experiments/" + d.spec.id + "/sessions");
      if (!r || r->status != 201) {
        expect(false, d.spec.id + ": session creation failed");
        break;
      }
      const auto session = json::parse(r->body);
      const auto id = session["sessionId"].get<std::string>();
      // The service hands out the same assignment the generator assumed.
      expect(session["counter"] == k, d.spec.id + ": unexpected counter");
      expect(session["assignment"].get<std::vector<std::size_t>>() == randomize_trials(d.spec.trials, mix_seed(d.spec.seed, k)),
             d.spec.id + ": assignment differs");
      const auto body = fixture::rebind_session(csv, id);
      const auto dir = work / "data" / "results" / d.spec.id;
      const auto sidecar = d.descriptions.count(name) ? std::optional(fixture::rebind_session(d.descriptions.at(name), id)) : std::nullopt;

      if (k % 2 == 0) {
        r = cli.Get("/sessions/" + id + "/presign");
        const auto url = r && r->status == 200 ? json::parse(r->body)["uploadURL"].get<std::string>() : "";
        r = cli.Put(url, body, "text/csv");
        expect(r && r->status == 200, d.spec.id + ": PUT failed " + (r ? r->body : ""));
        ++put_count;
        if (sidecar) {
          r = cli.Get("/sessions/" + id + "/presign?part=descriptions");
          const auto durl = r && r->status == 200 ? json::parse(r->body)["uploadURL"].get<std::string>() : "";
          r = cli.Put(durl, *sidecar, "text/csv");
          expect(r && r->status == 200, d.spec.id + ": descriptions PUT failed");
          ++put_count;
        }
      } else {
        httplib::Params form{{"dataOutput", body}};
        if (sidecar) form.emplace("descriptionsOutput", *sidecar);
        r = cli.Post("/sessions/" + id + "/results", form);
        expect(r && r->status == 200, d.spec.id + ": form post failed " + (r ? std::to_string(r->status) + " " + r->body : httplib::to_string(r.error())));
        ++form_count;
      }
      uploaded[dir / (id + ".csv")] = body;
      if (sidecar) uploaded[dir / (id + ".descriptions.csv")] = *sidecar;
      ++k;
    }
  }

  std::size_t exact = 0;
  for (const auto& [path, body] : uploaded) exact += fixture::read(path) == body;
  expect(exact == uploaded.size(), "byte mismatch in stored files");

  // Injected crash between the staging write and the rename.
  const auto& victim_spec = datasets[0].spec;
  auto r = cli.Post("/experiments/" + victim_spec.id + "/sessions");
  const auto victim = json::parse(r->body)["sessionId"].get<std::string>();
  const auto victim_body = fixture::rebind_session(datasets[0].results.begin()->second, victim);
  const auto url = json::parse(cli.Get("/sessions/" + victim + "/presign")->body)["uploadURL"].get<std::string>();
  service->set_before_rename_hook([](const fs::path&) { throw std::runtime_error("simulated crash before rename"); });
  r = cli.Put(url, victim_body, "text/csv");
  expect(r && r->status == 500, "crash injection did not surface");
  const auto results_dir = work / "data" / "results" / victim_spec.id;
  expect(!fs::exists(results_dir / (victim + ".csv")), "partial file visible after crash");
  std::size_t complete = 0, listed = 0;
  for (const auto& f : fixture::list_files(work / "data" / "results")) {
    ++listed;
    const auto it = uploaded.find(work / "data" / "results" / f);
    complete += it != uploaded.end() && fixture::read(it->first) == it->second;
  }
  expect(listed == complete && listed == uploaded.size(), "results directory holds unexpected files");

  server->stop();
  thread.join();
  server.reset();
  service.reset();
  // Restart sweeps the staging area; the crashed session can still upload.
  CollectionService restarted(cfg);
  expect(fixture::list_files(work / "data" / "tmp").empty(), "staging not cleared on restart");
  const auto ticket = restarted.presign_upload(victim);
  restarted.store_result(ticket.upload_path.substr(9), victim_body);
  expect(fixture::read(results_dir / (victim + ".csv")) == victim_body, "retry after crash failed");

  // Full report bundle for every paradigm from what the service stored.
  std::size_t bundles = 0, files = 0;
  for (const auto& d : datasets) {
    AnalyzeOptions opt;
    opt.results_dir = work / "data" / "results" / d.spec.id;
    opt.out_dir = work / "bundles" / d.spec.id;
    try {
      const auto bundle = cmd_analyze(d.spec.paradigm, d.spec, opt);
      bundles += bundle.skipped.empty() && bundle.files.size() >= 4;
      files += bundle.files.size();
    } catch (const Error& e) {
      problems.push_back(d.spec.id + ": " + e.what());
    }
  }
  expect(bundles == datasets.size(), "incomplete report bundles");

  std::string detail = std::to_string(uploaded.size()) + " files (" + std::to_string(put_count) + " PUT, " +
                       std::to_string(form_count) + " form) byte-exact " + std::to_string(exact) + "/" +
                       std::to_string(uploaded.size()) + ", crash left no partial file, " + std::to_string(bundles) +
                       " bundles / " + std::to_string(files) + " files";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Outcome determinism(const fs::path& work) {
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& d : all_datasets(10)) {
    const auto name = std::string(to_string(d.spec.paradigm));
    const auto base = work / "det" / name;
    fixture::write(base / "experiment.json", experiment_to_json(d.spec));
    for (const auto& [s, csv] : d.results) fixture::write(base / "results" / (s + ".csv"), csv);
    for (const auto& [s, csv] : d.descriptions) fixture::write(base / "results" / (s + ".descriptions.csv"), csv);
    for (const char* run : {"a", "b"}) {
      const auto cmd = std::string(PBENCH_BIN) + " analyze " + name + " --experiment " + (base / "experiment.json").string() +
                       " --results " + (base / "results").string() + " --out " + (base / run).string() + " --seed 7 >/dev/null";
      if (std::system(cmd.c_str()) != 0) differing.push_back(name + " run " + run + " failed");
    }
    const auto fa = fixture::list_files(base / "a"), fb = fixture::list_files(base / "b");
    if (fa != fb || fa.empty()) differing.push_back(name + ": file lists differ");
    for (const auto& f : fa) {
      ++compared;
      if (fixture::read(base / "a" / f) != fixture::read(base / "b" / f)) differing.push_back(name + "/" + f);
    }
  }
  std::string detail = std::to_string(compared) + " files compared across 5 analyze subcommands";
  for (const auto& p : differing) detail += "; differs: " + p;
  return {differing.empty() && compared > 0, detail};
}

}  // namespace

int main() {
  TempDir work("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"relief exactness (64 points, constant gradient)", relief_exactness},
      {"relief matches dense normal-equation oracle (10 points)", relief_oracle},
      {"relief smoothness (sin x sin bump, 64 points)", relief_smoothness},
      {"horizon-ratio exactness (eye height 2.0, 12 figures)", horizon_ratio},
      {"trend structure (34 paintings, slope -0.10)", [&] { return trend_structure(work.path()); }},
      {"t-test oracle, df rule and invariants", ttest_checks},
      {"correctness criterion at the 0.1 radius", correctness_boundary},
      {"synthetic RT pipeline via analyze flicker", [&] { return rt_pipeline(work.path()); }},
      {"end-to-end headless collection and analysis", [&] { return end_to_end(work.path()); }},
      {"determinism of every analyze subcommand", [&] { return determinism(work.path()); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " | " << o.detail << std::endl;
  }
  std::cout << (failures ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failures) << "/"
            << criteria.size() << std::endl;
  return failures ? 1 : 0;
}
