#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbench/experiment/csv.hpp"
#include "pbench/experiment/spec.hpp"

namespace pbench {

struct FlickerRecord {
  std::string session;
  std::int64_t trial = 0;
  std::string image_name;
  double click_x = 0.0;
  double click_y = 0.0;
  double rt_ms = 0.0;
  bool revealed = false;
  friend bool operator==(const FlickerRecord&, const FlickerRecord&) = default;
};

struct BubbleRecord {
  std::string session;
  std::int64_t trial = 0;
  std::string image_name;
  std::int64_t click_index = 0;
  double x = 0.0;
  double y = 0.0;
  double t_ms = 0.0;
  friend bool operator==(const BubbleRecord&, const BubbleRecord&) = default;
};

/// Sidecar row of a bubble session (descriptions.csv).
struct DescriptionRecord {
  std::string session;
  std::string image_name;
  std::string text;
  friend bool operator==(const DescriptionRecord&, const DescriptionRecord&) = default;
};

struct GaugeRecord {
  std::string session;
  std::int64_t trial = 0;
  std::int64_t point_index = 0;  // triangle index; (px, py) is its barycentre
  double px = 0.0;
  double py = 0.0;
  double slant_deg = 0.0;
  double tilt_deg = 0.0;
  double rt_ms = 0.0;
  friend bool operator==(const GaugeRecord&, const GaugeRecord&) = default;
};

struct CompositionRecord {
  std::string session;
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const CompositionRecord&, const CompositionRecord&) = default;
};

enum class AnnotationKind { Horizon, Figure };

/// Figure segments run feet (x1, y1) to head (x2, y2); horizons have y1 == y2.
struct PerspectiveRecord {
  std::string session;
  std::string image_name;
  AnnotationKind kind = AnnotationKind::Figure;
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;
  friend bool operator==(const PerspectiveRecord&, const PerspectiveRecord&) = default;
};

enum class ResultSchema { Flicker, Bubble, Descriptions, Gauge, Composition, Perspective };

using ResultRecord =
    std::variant<FlickerRecord, BubbleRecord, DescriptionRecord, GaugeRecord, CompositionRecord, PerspectiveRecord>;

ResultSchema schema_for(Paradigm p) noexcept;
ResultSchema schema_of(const ResultRecord& r) noexcept;
std::string_view to_string(ResultSchema s) noexcept;
/// Exact column names, in order.
const std::vector<std::string>& schema_header(ResultSchema s);

/// Throws InvalidInput if records mix schemas.
std::string serialize_results(std::span<const ResultRecord> records);
/// Same, with an explicit schema so an empty list yields a header-only CSV.
std::string serialize_results(ResultSchema schema, std::span<const ResultRecord> records);

/// Parses and type-checks a result CSV. Errors name the row (1-based, data
/// rows) and column.
std::vector<ResultRecord> parse_results(ResultSchema schema, std::string_view text);
/// Same, for an already parsed table.
std::vector<ResultRecord> parse_results(ResultSchema schema, const TrialTable& table);

template <class R>
std::vector<R> records_as(const std::vector<ResultRecord>& records) {
  std::vector<R> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(std::get<R>(r));
  return out;
}

}  // namespace pbench
