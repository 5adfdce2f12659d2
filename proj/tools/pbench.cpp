#include <csignal>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "pbench/cli/analyze.hpp"
#include "pbench/cli/authoring.hpp"
#include "pbench/cli/serve_config.hpp"
#include "pbench/cli/synthetic.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/geometry/triangulation_io.hpp"
#include "pbench/service/http_server.hpp"

namespace fs = std::filesystem;
using namespace pbench;

namespace {

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int exit_code(ErrorKind kind) { return kind == ErrorKind::Analysis ? 3 : 2; }

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + file.string());
  out << text;
  if (!out) fail(ErrorKind::Io, "cannot write " + file.string());
}

ParameterMap parse_params(const std::vector<std::string>& items) {
  ParameterMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    const auto value = eq == std::string::npos ? std::nullopt : parse_double(std::string_view(item).substr(eq + 1));
    if (!value) fail(ErrorKind::InvalidInput, "--param expects key=number, got '" + item + "'");
    out[item.substr(0, eq)] = *value;
  }
  return out;
}

SyntheticDataset simulate(Paradigm p, std::uint64_t seed) {
  switch (p) {
    case Paradigm::Flicker: return synthetic_flicker(seed);
    case Paradigm::Bubble: return synthetic_bubble(seed);
    case Paradigm::Gauge: return synthetic_gauge(seed);
    case Paradigm::Composition: return synthetic_composition(seed);
    case Paradigm::Perspective: return synthetic_perspective(seed);
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pbench: host, collect and analyse web psychophysics experiments"};
  app.require_subcommand(1);
  const std::vector<std::string> paradigms{"flicker", "bubble", "gauge", "composition", "perspective"};

  // serve
  auto* serve = app.add_subcommand("serve", "Run the collection service");
  std::optional<std::string> config_file;
  ServeOverrides overrides;
  serve->add_option("--config", config_file, "JSON config file");
  serve->add_option("--host", overrides.host, "Listen address");
  serve->add_option("--port", overrides.port, "Listen port (0 picks a free one)");
  serve->add_option("--data-dir", overrides.data_dir, "Session and result storage");
  serve->add_option("--experiments-dir", overrides.experiments_dir, "Directory of experiment JSON files");
  serve->add_option("--stimuli-dir", overrides.stimuli_dir, "Static stimulus files served under /stimuli");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyse collected results into a report bundle");
  std::string analyze_paradigm;
  fs::path experiment_file;
  std::optional<fs::path> results_dir;
  fs::path data_dir = "data";
  AnalyzeOptions opts;
  opts.out_dir = "report";
  std::string offset_mode = "through-origin";
  analyze->add_option("paradigm", analyze_paradigm, "Paradigm")->required()->check(CLI::IsMember(paradigms));
  analyze->add_option("--experiment", experiment_file, "Experiment JSON")->required();
  analyze->add_option("--results", results_dir, "Directory of session CSVs (default <data-dir>/results/<id>)");
  analyze->add_option("--data-dir", data_dir, "Service data directory");
  analyze->add_option("--out", opts.out_dir, "Output directory");
  analyze->add_option("--seed", opts.seed, "Seed recorded in the report");
  analyze->add_option("--bandwidth", opts.bandwidth, "Composition KDE bandwidth in pixels");
  analyze->add_option("--offset-mode", offset_mode, "Perspective fit: through-origin or free-offset");
  analyze->add_option("--horizon-annotator", opts.horizon_annotator, "Use only this session's horizon");

  // make-experiment
  auto* make = app.add_subcommand("make-experiment", "Author an experiment from a stimulus directory");
  std::string make_paradigm;
  fs::path stimuli_dir, out_file;
  MakeExperimentOptions mopts;
  std::vector<std::string> params;
  std::vector<double> region;
  make->add_option("paradigm", make_paradigm, "Paradigm")->required()->check(CLI::IsMember(paradigms));
  make->add_option("--stimuli", stimuli_dir, "Stimulus directory")->required();
  make->add_option("--id", mopts.id, "Experiment id")->required();
  make->add_option("--out", out_file, "Output experiment JSON")->required();
  make->add_option("--seed", mopts.seed, "Randomization seed");
  make->add_option("--points", mopts.gauge_points, "Gauge sample points");
  make->add_option("--region", region, "Gauge sampling rectangle x0 y0 x1 y1")->expected(4);
  make->add_option("--param", params, "Parameter override key=value");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Write a synthetic experiment with session results");
  std::string sim_paradigm;
  fs::path sim_out;
  std::uint64_t sim_seed = 1;
  sim->add_option("paradigm", sim_paradigm, "Paradigm")->required()->check(CLI::IsMember(paradigms));
  sim->add_option("--out", sim_out, "Output directory")->required();
  sim->add_option("--seed", sim_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) {
      const auto cfg = resolve_serve_config(config_file ? std::optional<fs::path>(*config_file) : std::nullopt, overrides);
      ServiceConfig sc;
      sc.data_dir = cfg.data_dir;
      sc.experiments_dir = cfg.experiments_dir;
      CollectionService service(sc);
      HttpServer server(service, cfg.stimuli_dir);
      const int port = server.bind(cfg.host, cfg.port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "pbench serving " << service.experiment_ids().size() << " experiment(s) on http://" << cfg.host
                << ":" << port << std::endl;
      server.serve();
      g_server = nullptr;
      return 0;
    }
    if (analyze->parsed()) {
      const auto spec = load_experiment(experiment_file);
      opts.offset_mode = offset_mode_from_string(offset_mode);
      opts.results_dir = results_dir ? *results_dir : data_dir / "results" / spec.id;
      const auto bundle = cmd_analyze(paradigm_from_string(analyze_paradigm), spec, opts);
      std::cout << bundle.summary;
      std::cout << "wrote " << bundle.files.size() << " file(s) to " << bundle.out_dir.string() << "\n";
      return 0;
    }
    if (make->parsed()) {
      if (!region.empty()) mopts.gauge_region = std::array<double, 4>{region[0], region[1], region[2], region[3]};
      mopts.parameters = parse_params(params);
      const auto spec = cmd_make_experiment(paradigm_from_string(make_paradigm), stimuli_dir, mopts);
      write_text(out_file, experiment_to_json(spec));
      if (spec.triangulation) {
        write_text(out_file.parent_path() / (spec.id + ".triangulation.csv"), write_triangulation_csv(*spec.triangulation));
      }
      std::cout << "wrote " << out_file.string() << " (" << spec.stimuli.size() << " stimuli, " << spec.trials.size()
                << " trials)\n";
      return 0;
    }
    if (sim->parsed()) {
      const auto data = simulate(paradigm_from_string(sim_paradigm), sim_seed);
      write_text(sim_out / "experiment.json", experiment_to_json(data.spec));
      for (const auto& [session, csv] : data.results) write_text(sim_out / "results" / (session + ".csv"), csv);
      for (const auto& [session, csv] : data.descriptions) {
        write_text(sim_out / "results" / (session + ".descriptions.csv"), csv);
      }
      std::cout << "wrote " << data.results.size() << " session(s) to " << sim_out.string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "pbench: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "pbench: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
