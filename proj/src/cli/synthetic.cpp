#include "pbench/cli/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pbench/cli/authoring.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"
#include "pbench/experiment/results.hpp"
#include "pbench/geometry/delaunay.hpp"
#include "pbench/geometry/gauge.hpp"

namespace pbench {

namespace {

using std::numbers::pi;

std::string session_name(std::size_t k) {
  std::string n = std::to_string(k);
  return "synth-" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n;
}

/// Presentation order the service would hand out to the k-th session.
std::vector<std::size_t> assignment(const ExperimentSpec& spec, std::size_t k) {
  return randomize_trials(spec.trials, mix_seed(spec.seed, k));
}

const std::string& trial_image(const ExperimentSpec& spec, std::size_t trial) {
  return spec.trials.rows()[trial][static_cast<std::size_t>(spec.trials.column("imageName"))];
}

TrialTable image_trials(const std::vector<StimulusRef>& stimuli, std::size_t repeats = 1) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < repeats; ++r) {
    for (const auto& s : stimuli) rows.push_back({s.name});
  }
  return TrialTable({"imageName"}, std::move(rows));
}

StimulusRef stimulus(std::string name, int w, int h) {
  StimulusRef s;
  s.uri = "/stimuli/" + name;
  s.name = std::move(name);
  s.width_px = w;
  s.height_px = h;
  return s;
}

std::string body(ResultSchema schema, const std::vector<ResultRecord>& records) {
  return serialize_results(schema, records);
}

double round_to(double v, double step) { return std::round(v / step) * step; }

}  // namespace

double draw_reaction_time_ms(Rng& rng, double mean_s, double sd_s, double cap_s) {
  if (!(mean_s > 0) || !(sd_s > 0) || !(cap_s > 0)) fail(ErrorKind::InvalidInput, "reaction time parameters must be positive");
  const double sigma2 = std::log1p((sd_s * sd_s) / (mean_s * mean_s));
  const double mu = std::log(mean_s) - sigma2 / 2;
  const double sigma = std::sqrt(sigma2);
  for (;;) {
    const double s = std::exp(mu + sigma * rng.normal());
    if (s <= cap_s) return std::round(s * 1000.0);
  }
}

SyntheticDataset synthetic_flicker(std::uint64_t seed, std::size_t valid_easy, std::size_t valid_hard) {
  constexpr std::size_t kPerGroup = 10;
  constexpr std::size_t kSessions = 15;
  if (valid_easy > kPerGroup * kSessions || valid_hard > kPerGroup * kSessions) {
    fail(ErrorKind::InvalidInput, "too many valid trials requested");
  }
  Rng rng(seed);
  SyntheticDataset d;
  auto& spec = d.spec;
  spec.id = "flicker-synthetic";
  spec.paradigm = Paradigm::Flicker;
  spec.seed = seed;
  spec.parameters = default_parameters(Paradigm::Flicker);
  for (const char* group : {"easy", "hard"}) {
    for (std::size_t i = 0; i < kPerGroup; ++i) {
      auto s = stimulus(std::string(group) + "-" + std::to_string(i) + ".png", 800, 600);
      s.pair_uri = "/stimuli/" + std::string(group) + "-" + std::to_string(i) + "-mod.png";
      s.target = TargetEllipse{round_to(rng.uniform(0.2, 0.8), 1e-3), round_to(rng.uniform(0.2, 0.8), 1e-3), 0.05, 0.06};
      s.group = group;
      spec.stimuli.push_back(std::move(s));
    }
  }
  spec.trials = image_trials(spec.stimuli);
  const double cap_s = spec.parameter("reveal-ms") / 1000.0;
  const double width = 800.0;

  // Pick which (session, trial) slots fail the validity filter.
  std::vector<bool> invalid(kSessions * spec.trials.size(), false);
  for (const auto& [group, keep] : {std::pair<std::string, std::size_t>{"easy", valid_easy}, {"hard", valid_hard}}) {
    std::vector<std::size_t> slots;
    for (std::size_t k = 0; k < kSessions; ++k) {
      for (std::size_t t = 0; t < spec.trials.size(); ++t) {
        if (spec.find_stimulus(trial_image(spec, t))->group == group) slots.push_back(k * spec.trials.size() + t);
      }
    }
    const auto order = randomize_trials(slots.size(), rng.next());
    for (std::size_t i = keep; i < slots.size(); ++i) invalid[slots[order[i]]] = true;
  }

  for (std::size_t k = 0; k < kSessions; ++k) {
    const auto id = session_name(k);
    std::vector<ResultRecord> records;
    for (const auto trial : assignment(spec, k)) {
      const auto& s = *spec.find_stimulus(trial_image(spec, trial));
      const bool easy = s.group == "easy";
      const double cx = s.target->cx * s.width_px, cy = s.target->cy * s.height_px;
      FlickerRecord r;
      r.session = id;
      r.trial = static_cast<std::int64_t>(trial);
      r.image_name = s.name;
      if (!invalid[k * spec.trials.size() + trial]) {
        const double radius = rng.uniform(0.0, 0.08) * width, angle = rng.uniform(0.0, 2 * pi);
        r.click_x = round_to(cx + radius * std::cos(angle), 0.5);
        r.click_y = round_to(cy + radius * std::sin(angle), 0.5);
        r.rt_ms = easy ? draw_reaction_time_ms(rng, 10.7, 14.1, cap_s) : draw_reaction_time_ms(rng, 25.1, 23.6, cap_s);
      } else if (rng.uniform() < 0.5) {
        r.revealed = true;
        r.rt_ms = spec.parameter("reveal-ms");
        r.click_x = cx;
        r.click_y = cy;
      } else {
        // Wrong object: mirror the click to the far side of the image.
        r.click_x = round_to(cx < width / 2 ? cx + 0.3 * width : cx - 0.3 * width, 0.5);
        r.click_y = round_to(cy, 0.5);
        r.rt_ms = draw_reaction_time_ms(rng, 15.0, 10.0, cap_s);
      }
      records.emplace_back(std::move(r));
    }
    d.results[id] = body(ResultSchema::Flicker, records);
  }
  return d;
}

SyntheticDataset synthetic_bubble(std::uint64_t seed) {
  constexpr std::size_t kSessions = 8;
  Rng rng(seed);
  SyntheticDataset d;
  auto& spec = d.spec;
  spec.id = "bubble-synthetic";
  spec.paradigm = Paradigm::Bubble;
  spec.seed = seed;
  spec.parameters = default_parameters(Paradigm::Bubble);
  spec.stimuli = {stimulus("chart, annotated.png", 300, 200), stimulus("harbour.png", 240, 180),
                  stimulus("portrait.png", 200, 260)};
  spec.trials = image_trials(spec.stimuli);
  const auto max_clicks = static_cast<std::size_t>(spec.parameter("max-clicks"));

  for (std::size_t k = 0; k < kSessions; ++k) {
    const auto id = session_name(k);
    std::vector<ResultRecord> clicks, texts;
    for (const auto trial : assignment(spec, k)) {
      const auto& s = *spec.find_stimulus(trial_image(spec, trial));
      const double w = s.width_px, h = s.height_px;
      const std::array<Point2, 2> hotspots{Point2{0.3 * w, 0.35 * h}, Point2{0.7 * w, 0.6 * h}};
      const std::size_t n = 5 + rng.below(max_clicks - 4);
      double t = 0;
      for (std::size_t c = 0; c < n; ++c) {
        const auto& spot = hotspots[rng.below(2)];
        BubbleRecord r;
        r.session = id;
        r.trial = static_cast<std::int64_t>(trial);
        r.image_name = s.name;
        r.click_index = static_cast<std::int64_t>(c);
        r.x = std::clamp(std::round(spot.x + 0.08 * w * rng.normal()), 0.0, w);
        r.y = std::clamp(std::round(spot.y + 0.08 * h * rng.normal()), 0.0, h);
        t += std::round(400 + 1200 * rng.uniform());
        r.t_ms = t;
        clicks.emplace_back(std::move(r));
      }
      texts.emplace_back(DescriptionRecord{id, s.name, "Viewer " + std::to_string(k) + " saw \"" + s.name + "\", twice\nthen left"});
    }
    d.results[id] = body(ResultSchema::Bubble, clicks);
    d.descriptions[id] = body(ResultSchema::Descriptions, texts);
  }
  return d;
}

std::map<std::string, double> synthetic_gauge_scales(std::uint64_t seed) {
  constexpr std::size_t kSessions = 6;
  Rng rng(mix_seed(seed, 0x9a06e));
  std::map<std::string, double> out;
  for (std::size_t k = 0; k < kSessions; ++k) out[session_name(k)] = round_to(rng.uniform(0.5, 3.0), 1e-3);
  return out;
}

SyntheticDataset synthetic_gauge(std::uint64_t seed) {
  constexpr double kSize = 400, kInset = 20, kAmplitude = 60;
  Rng rng(seed);
  SyntheticDataset d;
  auto& spec = d.spec;
  spec.id = "gauge-synthetic";
  spec.paradigm = Paradigm::Gauge;
  spec.seed = seed;
  spec.parameters = default_parameters(Paradigm::Gauge);
  spec.stimuli = {stimulus("torso.png", static_cast<int>(kSize), static_cast<int>(kSize))};
  const std::array<double, 4> region{kInset, kInset, kSize - kInset, kSize - kInset};
  auto points = sample_points(64, region, seed);
  for (auto& p : points) p = {round_to(p.x, 1e-3), round_to(p.y, 1e-3)};
  spec.triangulation = delaunay_triangulate(points);
  const auto centres = barycentres(*spec.triangulation);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < centres.size(); ++i) {
    rows.push_back({std::to_string(i), format_number(centres[i].x), format_number(centres[i].y)});
  }
  spec.trials = TrialTable({"pointIndex", "px", "py"}, std::move(rows));

  const double span = kSize - 2 * kInset;
  std::size_t k = 0;
  for (const auto& [id, scale] : synthetic_gauge_scales(seed)) {
    std::vector<ResultRecord> records;
    for (const auto trial : assignment(spec, k)) {
      const auto c = centres[trial];
      const double u = (c.x - kInset) / span, v = (c.y - kInset) / span;
      const double amp = scale * kAmplitude * pi / span;
      const Gradient g{amp * std::cos(pi * u) * std::sin(pi * v), amp * std::sin(pi * u) * std::cos(pi * v)};
      const auto st = gradient_to_slant_tilt(g.p, g.q);
      GaugeRecord r;
      r.session = id;
      r.trial = static_cast<std::int64_t>(trial);
      r.point_index = static_cast<std::int64_t>(trial);
      r.px = c.x;
      r.py = c.y;
      r.slant_deg = rad2deg(st.slant);
      r.tilt_deg = rad2deg(st.tilt);
      if (r.tilt_deg >= 360.0) r.tilt_deg = 0.0;
      r.rt_ms = std::round(500 + 2400 * rng.uniform());
      records.emplace_back(std::move(r));
    }
    d.results[id] = body(ResultSchema::Gauge, records);
    ++k;
  }
  return d;
}

SyntheticDataset synthetic_composition(std::uint64_t seed) {
  constexpr std::size_t kSessions = 16;
  Rng rng(seed);
  SyntheticDataset d;
  auto& spec = d.spec;
  spec.id = "composition-synthetic";
  spec.paradigm = Paradigm::Composition;
  spec.seed = seed;
  spec.parameters = default_parameters(Paradigm::Composition);
  spec.stimuli = {stimulus("canvas.png", 800, 400)};
  spec.trials = image_trials(spec.stimuli, 4);
  for (std::size_t k = 0; k < kSessions; ++k) {
    const auto id = session_name(k);
    std::vector<ResultRecord> records;
    for ([[maybe_unused]] const auto trial : assignment(spec, k)) {
      // Thirds preference with a few free placements.
      double x;
      const double pick = rng.uniform();
      if (pick < 0.45) x = 800.0 / 3 + 18 * rng.normal();
      else if (pick < 0.9) x = 1600.0 / 3 + 18 * rng.normal();
      else x = rng.uniform(0, 800);
      records.emplace_back(CompositionRecord{id, round_to(std::clamp(x, 0.0, 800.0), 0.5),
                                             round_to(std::clamp(200 + 40 * rng.normal(), 0.0, 400.0), 0.5)});
    }
    d.results[id] = body(ResultSchema::Composition, records);
  }
  return d;
}

SyntheticDataset synthetic_perspective(std::uint64_t seed) {
  constexpr std::size_t kPaintings = 34, kFigures = 12, kAnnotators = 2;
  constexpr double kWidth = 900, kHeight = 600, kHorizon = 240, kFirstYear = 1610;
  Rng rng(seed);
  SyntheticDataset d;
  auto& spec = d.spec;
  spec.id = "perspective-synthetic";
  spec.paradigm = Paradigm::Perspective;
  spec.seed = seed;
  spec.parameters = default_parameters(Paradigm::Perspective);
  for (std::size_t i = 0; i < kPaintings; ++i) {
    auto s = stimulus("painting-" + std::string(i < 10 ? "0" : "") + std::to_string(i) + ".jpg", static_cast<int>(kWidth), static_cast<int>(kHeight));
    s.year = kFirstYear + static_cast<double>(i);
    spec.stimuli.push_back(std::move(s));
  }
  spec.trials = image_trials(spec.stimuli);

  // Eye height h(year) falls by 0.1 body heights per year; a figure of image
  // height s stands with its feet h * s below the horizon.
  std::vector<std::vector<ResultRecord>> per_session(kAnnotators);
  for (std::size_t i = 0; i < kPaintings; ++i) {
    const auto& s = spec.stimuli[i];
    const double h = 0.1 * (kFirstYear + kPaintings + 1 - *s.year);
    const double max_s = std::min(80.0, (kHeight - kHorizon - 5) / h);
    for (std::size_t a = 0; a < kAnnotators; ++a) {
      per_session[a].emplace_back(PerspectiveRecord{session_name(a), s.name, AnnotationKind::Horizon, 0, kHorizon, kWidth, kHorizon});
    }
    for (std::size_t f = 0; f < kFigures; ++f) {
      const double size = round_to(rng.uniform(12, max_s), 0.25);
      const double foot_y = kHorizon + h * size;
      const double x = round_to(rng.uniform(20, kWidth - 20), 0.5);
      per_session[f % kAnnotators].emplace_back(
          PerspectiveRecord{session_name(f % kAnnotators), s.name, AnnotationKind::Figure, x, foot_y, x, foot_y - size});
    }
  }
  for (std::size_t a = 0; a < kAnnotators; ++a) {
    // Sessions record paintings in their own presentation order.
    std::vector<ResultRecord> ordered;
    for (const auto trial : assignment(spec, a)) {
      const auto& name = trial_image(spec, trial);
      for (const auto& r : per_session[a]) {
        if (std::get<PerspectiveRecord>(r).image_name == name) ordered.push_back(r);
      }
    }
    d.results[session_name(a)] = body(ResultSchema::Perspective, ordered);
  }
  return d;
}

}  // namespace pbench
