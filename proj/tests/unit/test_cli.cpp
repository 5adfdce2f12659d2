#include "doctest.h"

#include <cstdlib>
#include <sys/wait.h>

#include "../support/fixture.hpp"
#include "pbench/cli/analyze.hpp"
#include "pbench/cli/authoring.hpp"
#include "pbench/cli/image_size.hpp"
#include "pbench/cli/serve_config.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/results.hpp"
#include "pbench/geometry/delaunay.hpp"

using namespace pbench;
using fixture::TempDir;
namespace fs = std::filesystem;

namespace {

std::string png_header(std::uint32_t w, std::uint32_t h) {
  std::string s = "\x89PNG\r\n\x1a\n";
  s += std::string("\0\0\0\x0dIHDR", 8);
  for (auto v : {w, h}) {
    for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xFF));
  }
  s += std::string("\x08\x02\0\0\0", 5);
  return s;
}

std::string jpeg_header(std::uint16_t w, std::uint16_t h) {
  std::string s("\xFF\xD8\xFF\xE0\x00\x10JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00", 20);
  s += std::string("\xFF\xC0\x00\x11\x08", 5);
  s.push_back(static_cast<char>(h >> 8));
  s.push_back(static_cast<char>(h & 0xFF));
  s.push_back(static_cast<char>(w >> 8));
  s.push_back(static_cast<char>(w & 0xFF));
  s += std::string("\x03\x01\x22\x00\x02\x11\x01\x03\x11\x01", 10);
  return s;
}

int run(const std::string& args) {
  const int status = std::system((std::string(PBENCH_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

AnalyzeOptions options(const fs::path& results, const fs::path& out) {
  AnalyzeOptions o;
  o.results_dir = results;
  o.out_dir = out;
  return o;
}

void write_dataset(const SyntheticDataset& d, const fs::path& dir) {
  for (const auto& [s, csv] : d.results) fixture::write(dir / (s + ".csv"), csv);
  for (const auto& [s, csv] : d.descriptions) fixture::write(dir / (s + ".descriptions.csv"), csv);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("image sizes from headers") {
    TempDir dir("img");
    fixture::write(dir / "a.png", png_header(640, 480));
    fixture::write(dir / "b.jpg", jpeg_header(1024, 768));
    fixture::write(dir / "c.gif", std::string("GIF89a\x20\x03\x58\x02\0\0", 12));
    fixture::write(dir / "d.pgm", "P5\n# comment\n17 9\n255\n");
    fixture::write(dir / "e.txt", "hello");
    CHECK(read_image_size(dir / "a.png").width == 640);
    CHECK(read_image_size(dir / "a.png").height == 480);
    CHECK(read_image_size(dir / "b.jpg").width == 1024);
    CHECK(read_image_size(dir / "b.jpg").height == 768);
    CHECK(read_image_size(dir / "c.gif").width == 800);
    CHECK(read_image_size(dir / "c.gif").height == 600);
    CHECK(read_image_size(dir / "d.pgm").width == 17);
    CHECK(read_image_size(dir / "d.pgm").height == 9);
    CHECK_THROWS_AS(read_image_size(dir / "e.txt"), Error);
    CHECK_THROWS_AS(read_image_size(dir / "missing.png"), Error);
  }

  TEST_CASE("serve config precedence: file < environment < flags") {
    TempDir dir("cfg");
    fixture::write(dir / "pbench.json", R"({"host": "127.0.0.1", "port": 9000, "dataDir": "d", "experimentsDir": "/abs/exp"})");
    ::unsetenv("PBENCH_PORT");
    ::unsetenv("PBENCH_HOST");
    ::unsetenv("PBENCH_DATA_DIR");
    ::unsetenv("PBENCH_EXPERIMENTS_DIR");
    ::unsetenv("PBENCH_STIMULI_DIR");
    auto c = resolve_serve_config(dir / "pbench.json", {});
    CHECK(c.host == "127.0.0.1");
    CHECK(c.port == 9000);
    CHECK(c.data_dir == dir / "d");
    CHECK(c.experiments_dir == "/abs/exp");
    CHECK(c.stimuli_dir == fs::path("/abs/exp/stimuli"));

    ::setenv("PBENCH_PORT", "9100", 1);
    c = resolve_serve_config(dir / "pbench.json", {});
    CHECK(c.port == 9100);
    ServeOverrides flags;
    flags.port = 9200;
    flags.stimuli_dir = "/s";
    c = resolve_serve_config(dir / "pbench.json", flags);
    CHECK(c.port == 9200);
    CHECK(c.stimuli_dir == "/s");
    ::setenv("PBENCH_PORT", "eighty", 1);
    CHECK_THROWS_AS(resolve_serve_config(std::nullopt, {}), Error);
    ::unsetenv("PBENCH_PORT");

    CHECK(resolve_serve_config(std::nullopt, {}).port == 8080);
    fixture::write(dir / "bad.json", R"({"prot": 1})");
    CHECK_THROWS_AS(resolve_serve_config(dir / "bad.json", {}), Error);
    fixture::write(dir / "bad2.json", R"({"port": 70000})");
    CHECK_THROWS_AS(resolve_serve_config(dir / "bad2.json", {}), Error);
  }

  TEST_CASE("best-candidate sampling is seeded and spread out") {
    const auto a = sample_points(64, {0, 0, 100, 100}, 3);
    CHECK(a == sample_points(64, {0, 0, 100, 100}, 3));
    CHECK(a != sample_points(64, {0, 0, 100, 100}, 4));
    double closest = 1e9;
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].x >= 0);
      CHECK(a[i].x < 100);
      for (std::size_t j = 0; j < i; ++j) closest = std::min(closest, std::hypot(a[i].x - a[j].x, a[i].y - a[j].y));
    }
    // Uniform sampling of 64 points typically leaves pairs under 1 px apart.
    CHECK(closest > 3.0);
    CHECK_THROWS_AS(sample_points(3, {0, 0, 0, 10}, 1), Error);
  }

  TEST_CASE("make-experiment from a manifest and from bare images") {
    TempDir dir("author");
    fixture::write(dir / "stimuli.csv",
                   "name,file,widthPx,heightPx,pairFile,targetCx,targetCy,targetRx,targetRy,group\n"
                   "kitchen,kitchen.png,800,600,kitchen-mod.png,0.4,0.5,0.05,0.05,easy\n"
                   "street,street.jpg,,,street-mod.jpg,0.7,0.2,0.04,0.06,hard\n");
    fixture::write(dir / "street.jpg", jpeg_header(1024, 768));
    MakeExperimentOptions opt;
    opt.id = "cb";
    opt.seed = 5;
    opt.parameters["reveal-ms"] = 30000;
    const auto spec = cmd_make_experiment(Paradigm::Flicker, dir.path(), opt);
    REQUIRE(spec.stimuli.size() == 2);
    CHECK(spec.stimuli[1].width_px == 1024);
    CHECK(spec.stimuli[1].pair_uri == "/stimuli/street-mod.jpg");
    CHECK(spec.stimuli[0].group == "easy");
    CHECK(spec.parameter("reveal-ms") == 30000);
    CHECK(spec.parameter("image-ms") == 240);
    CHECK(spec.trials.size() == 2);

    TempDir bare("author-bare");
    fixture::write(bare / "b.png", png_header(400, 300));
    fixture::write(bare / "a.png", png_header(200, 100));
    fixture::write(bare / "notes.txt", "ignored");
    opt.id = "gauge-demo";
    const auto gauge = cmd_make_experiment(Paradigm::Gauge, bare.path(), opt);
    CHECK(gauge.stimuli[0].name == "a.png");
    REQUIRE(gauge.triangulation.has_value());
    CHECK(gauge.triangulation->vertex_count() == 64);
    CHECK(gauge.trials.size() == gauge.triangulation->triangle_count());
    CHECK(gauge.trials.header() == std::vector<std::string>{"pointIndex", "px", "py"});
    for (const auto& p : gauge.triangulation->points) {
      CHECK(p.x >= 10);
      CHECK(p.x <= 190);
      CHECK(p.y >= 5);
      CHECK(p.y <= 95);
    }
    CHECK(experiment_from_json(experiment_to_json(gauge)) == gauge);

    fixture::write(dir / "stimuli.csv", "name,color\nx,red\n");
    CHECK_THROWS_AS(cmd_make_experiment(Paradigm::Bubble, dir.path(), opt), Error);
  }

  TEST_CASE("analyze writes a complete bundle for every paradigm") {
    struct Case {
      SyntheticDataset data;
      std::vector<std::string> must_have;
    };
    const std::vector<Case> cases{
        {synthetic_flicker(2), {"flicker_clicks.csv", "flicker_rt_by_image.csv", "flicker_ttest.csv", "summary.txt"}},
        {synthetic_bubble(2), {"bubble_maps.csv", "bubble_descriptions.csv", "bubble_density_harbour_png.csv", "bubble_density_harbour_png.pgm", "summary.txt"}},
        {synthetic_gauge(2), {"gauge_depth_ranges.csv", "triangulation.csv", "relief_synth-00.csv", "summary.txt"}},
        {synthetic_composition(2), {"composition_modes.csv", "composition_kde.csv", "composition_density.pgm", "summary.txt"}},
        {synthetic_perspective(2), {"perspective_elevations.csv", "perspective_fits.csv", "perspective_trend.csv", "summary.txt"}},
    };
    for (const auto& c : cases) {
      TempDir dir("analyze");
      write_dataset(c.data, dir / "results");
      AnalyzeOptions opt;
      opt.results_dir = dir / "results";
      opt.out_dir = dir / "out";
      const auto bundle = cmd_analyze(c.data.spec.paradigm, c.data.spec, opt);
      CAPTURE(c.data.spec.id);
      for (const auto& f : c.must_have) {
        CAPTURE(f);
        CHECK(std::find(bundle.files.begin(), bundle.files.end(), f) != bundle.files.end());
        CHECK(fs::exists(dir / "out" / f));
      }
      CHECK(bundle.skipped.empty());
      CHECK(fixture::read(dir / "out" / "summary.txt") == bundle.summary);
    }
  }

  TEST_CASE("gauge depth ranges follow the observers' scales") {
    const auto d = synthetic_gauge(6);
    TempDir dir("gauge-order");
    write_dataset(d, dir / "results");
    const auto opt = options(dir / "results", dir / "out");
    cmd_analyze(Paradigm::Gauge, d.spec, opt);
    const auto table = parse_trial_table(fixture::read(dir / "out" / "gauge_depth_ranges.csv"));
    std::vector<std::pair<double, std::string>> expected;
    for (const auto& [s, scale] : synthetic_gauge_scales(6)) expected.emplace_back(scale, s);
    std::sort(expected.begin(), expected.end());
    REQUIRE(table.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(table.rows()[i][1] == expected[i].second);
  }

  TEST_CASE("perspective report layout") {
    const auto d = synthetic_perspective(3);
    TempDir dir("persp");
    write_dataset(d, dir / "results");
    const auto opt = options(dir / "results", dir / "out");
    cmd_analyze(Paradigm::Perspective, d.spec, opt);
    const auto trend = parse_trial_table(fixture::read(dir / "out" / "perspective_trend.csv"));
    CHECK(trend.header() == std::vector<std::string>{"name", "estimate", "stderr", "t", "df", "p"});
    CHECK(trend.rows()[0][0] == "slope");
    CHECK(std::abs(*parse_double(trend.rows()[0][1]) + 0.1) < 1e-12);
    CHECK(trend.rows()[0][4] == "32");
    const auto elev = parse_trial_table(fixture::read(dir / "out" / "perspective_elevations.csv"));
    CHECK(elev.size() == 34);
  }

  TEST_CASE("bad result directories") {
    const auto flicker = synthetic_flicker(2);
    const auto bubble = synthetic_bubble(2);
    TempDir dir("bad-results");
    const auto opt = options(dir / "results", dir / "out");
    CHECK_THROWS_AS(cmd_analyze(Paradigm::Flicker, flicker.spec, opt), Error);  // missing directory
    fs::create_directories(dir / "results");
    CHECK_THROWS_WITH_AS(cmd_analyze(Paradigm::Flicker, flicker.spec, opt), doctest::Contains("no usable"), Error);
    fixture::write(dir / "results" / "junk.csv", "a,b\n1\n");
    CHECK_THROWS_WITH_AS(cmd_analyze(Paradigm::Flicker, flicker.spec, opt), doctest::Contains("no usable"), Error);
    write_dataset(flicker, dir / "results");
    const auto bundle = cmd_analyze(Paradigm::Flicker, flicker.spec, opt);
    REQUIRE(bundle.skipped.size() == 1);
    CHECK(bundle.skipped[0].first == "junk.csv");
    CHECK(bundle.summary.find("skipped junk.csv") != std::string::npos);
    fixture::write(dir / "results" / "zz.csv", bubble.results.begin()->second);
    CHECK_THROWS_WITH_AS(cmd_analyze(Paradigm::Flicker, flicker.spec, opt), doctest::Contains("mixed paradigms"), Error);
    CHECK_THROWS_AS(cmd_analyze(Paradigm::Bubble, flicker.spec, opt), Error);
  }

  TEST_CASE("file stems") {
    CHECK(safe_file_stem("chart, annotated.png") == "chart__annotated_png");
    CHECK(safe_file_stem("") == "_");
    CHECK(safe_file_stem("../etc") == "___etc");
  }

  TEST_CASE("command line exit codes") {
    TempDir dir("exit");
    const auto out = (dir / "sim").string();
    CHECK(run("simulate perspective --seed 3 --out " + out) == 0);
    CHECK(run("analyze perspective --experiment " + out + "/experiment.json --results " + out + "/results --out " +
              (dir / "report").string()) == 0);
    CHECK(fs::exists(dir / "report" / "perspective_trend.csv"));
    CHECK(run("analyze perspective --experiment " + out + "/experiment.json --results " + (dir / "none").string() +
              " --out " + (dir / "r2").string()) == 2);
    CHECK(run("analyze perspective --experiment " + (dir / "missing.json").string() + " --out x") == 2);
    CHECK(run("analyze perspective --experiment " + out + "/experiment.json --offset-mode sideways --results " + out +
              "/results") == 2);
    CHECK(run("frobnicate") != 0);
    CHECK(run("--help") == 0);
  }
}
