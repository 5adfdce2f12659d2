#include "pbench/experiment/results.hpp"

#include <cmath>

#include "pbench/error.hpp"
#include "pbench/experiment/number.hpp"

namespace pbench {

ResultSchema schema_for(Paradigm p) noexcept {
  switch (p) {
    case Paradigm::Flicker: return ResultSchema::Flicker;
    case Paradigm::Bubble: return ResultSchema::Bubble;
    case Paradigm::Gauge: return ResultSchema::Gauge;
    case Paradigm::Composition: return ResultSchema::Composition;
    case Paradigm::Perspective: return ResultSchema::Perspective;
  }
  return ResultSchema::Flicker;
}

ResultSchema schema_of(const ResultRecord& r) noexcept {
  // variant alternatives are declared in ResultSchema order
  return static_cast<ResultSchema>(r.index());
}

std::string_view to_string(ResultSchema s) noexcept {
  switch (s) {
    case ResultSchema::Flicker: return "flicker";
    case ResultSchema::Bubble: return "bubble";
    case ResultSchema::Descriptions: return "descriptions";
    case ResultSchema::Gauge: return "gauge";
    case ResultSchema::Composition: return "composition";
    case ResultSchema::Perspective: return "perspective";
  }
  return "unknown";
}

const std::vector<std::string>& schema_header(ResultSchema s) {
  static const std::vector<std::string> flicker{"session", "trial", "imageName", "clickX", "clickY", "rtMs", "revealed"};
  static const std::vector<std::string> bubble{"session", "trial", "imageName", "clickIndex", "x", "y", "tMs"};
  static const std::vector<std::string> descriptions{"session", "imageName", "text"};
  static const std::vector<std::string> gauge{"session", "trial", "pointIndex", "px", "py", "slantDeg", "tiltDeg", "rtMs"};
  static const std::vector<std::string> composition{"session", "x", "y"};
  static const std::vector<std::string> perspective{"session", "imageName", "kind", "x1", "y1", "x2", "y2"};
  switch (s) {
    case ResultSchema::Flicker: return flicker;
    case ResultSchema::Bubble: return bubble;
    case ResultSchema::Descriptions: return descriptions;
    case ResultSchema::Gauge: return gauge;
    case ResultSchema::Composition: return composition;
    case ResultSchema::Perspective: return perspective;
  }
  return flicker;
}

namespace {

using Fields = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return format_number(v); }

Fields to_fields(const FlickerRecord& r) {
  return {r.session, num(r.trial), r.image_name, num(r.click_x), num(r.click_y), num(r.rt_ms), r.revealed ? "1" : "0"};
}
Fields to_fields(const BubbleRecord& r) {
  return {r.session, num(r.trial), r.image_name, num(r.click_index), num(r.x), num(r.y), num(r.t_ms)};
}
Fields to_fields(const DescriptionRecord& r) { return {r.session, r.image_name, r.text}; }
Fields to_fields(const GaugeRecord& r) {
  return {r.session, num(r.trial), num(r.point_index), num(r.px), num(r.py), num(r.slant_deg), num(r.tilt_deg), num(r.rt_ms)};
}
Fields to_fields(const CompositionRecord& r) { return {r.session, num(r.x), num(r.y)}; }
Fields to_fields(const PerspectiveRecord& r) {
  return {r.session, r.image_name, r.kind == AnnotationKind::Horizon ? "horizon" : "figure",
          num(r.x1),  num(r.y1),     num(r.x2),
          num(r.y2)};
}

// Cursor over one parsed row that converts fields with row/column diagnostics.
class RowReader {
 public:
  RowReader(const std::vector<std::string>& header, const Fields& row, std::size_t row_number)
      : header_(header), row_(row), row_number_(row_number) {}

  const std::string& text() { return row_[next_++]; }

  std::string nonempty() {
    const auto& f = row_[next_];
    if (f.empty()) error("empty value");
    ++next_;
    return f;
  }

  double real() {
    const auto v = parse_double(row_[next_]);
    if (!v || !std::isfinite(*v)) error("expected a finite number, got '" + row_[next_] + "'");
    ++next_;
    return *v;
  }

  std::int64_t count() {
    const auto v = parse_int(row_[next_]);
    if (!v || *v < 0) error("expected a non-negative integer, got '" + row_[next_] + "'");
    ++next_;
    return *v;
  }

  bool flag() {
    const auto& f = row_[next_];
    bool v = false;
    if (f == "1" || f == "true") {
      v = true;
    } else if (f != "0" && f != "false") {
      error("expected 0/1/true/false, got '" + f + "'");
    }
    ++next_;
    return v;
  }

  AnnotationKind kind() {
    const auto& f = row_[next_];
    AnnotationKind k = AnnotationKind::Figure;
    if (f == "horizon") {
      k = AnnotationKind::Horizon;
    } else if (f != "figure") {
      error("expected horizon or figure, got '" + f + "'");
    }
    ++next_;
    return k;
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::InvalidInput, "result csv: row " + std::to_string(row_number_) + " column " +
                                      std::to_string(next_ + 1) + " (" + header_[next_] + "): " + what);
  }

 private:
  const std::vector<std::string>& header_;
  const Fields& row_;
  std::size_t row_number_;
  std::size_t next_ = 0;
};

ResultRecord read_record(ResultSchema schema, RowReader& in) {
  switch (schema) {
    case ResultSchema::Flicker: {
      FlickerRecord r;
      r.session = in.nonempty();
      r.trial = in.count();
      r.image_name = in.nonempty();
      r.click_x = in.real();
      r.click_y = in.real();
      r.rt_ms = in.real();
      if (r.rt_ms < 0) in.error("negative reaction time");
      r.revealed = in.flag();
      return r;
    }
    case ResultSchema::Bubble: {
      BubbleRecord r;
      r.session = in.nonempty();
      r.trial = in.count();
      r.image_name = in.nonempty();
      r.click_index = in.count();
      r.x = in.real();
      r.y = in.real();
      r.t_ms = in.real();
      if (r.t_ms < 0) in.error("negative time");
      return r;
    }
    case ResultSchema::Descriptions: {
      DescriptionRecord r;
      r.session = in.nonempty();
      r.image_name = in.nonempty();
      r.text = in.text();
      return r;
    }
    case ResultSchema::Gauge: {
      GaugeRecord r;
      r.session = in.nonempty();
      r.trial = in.count();
      r.point_index = in.count();
      r.px = in.real();
      r.py = in.real();
      r.slant_deg = in.real();
      r.tilt_deg = in.real();
      r.rt_ms = in.real();
      if (r.rt_ms < 0) in.error("negative reaction time");
      return r;
    }
    case ResultSchema::Composition: {
      CompositionRecord r;
      r.session = in.nonempty();
      r.x = in.real();
      r.y = in.real();
      return r;
    }
    case ResultSchema::Perspective: {
      PerspectiveRecord r;
      r.session = in.nonempty();
      r.image_name = in.nonempty();
      r.kind = in.kind();
      r.x1 = in.real();
      r.y1 = in.real();
      r.x2 = in.real();
      r.y2 = in.real();
      return r;
    }
  }
  fail(ErrorKind::InvalidInput, "unknown schema");
}

}  // namespace

std::string serialize_results(ResultSchema schema, std::span<const ResultRecord> records) {
  std::string out = write_csv_row(schema_header(schema));
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (schema_of(records[i]) != schema) {
      fail(ErrorKind::InvalidInput, "serialize_results: record " + std::to_string(i) + " has schema " +
                                        std::string(to_string(schema_of(records[i]))) + ", expected " +
                                        std::string(to_string(schema)));
    }
    out += write_csv_row(std::visit([](const auto& r) { return to_fields(r); }, records[i]));
  }
  return out;
}

std::string serialize_results(std::span<const ResultRecord> records) {
  if (records.empty()) fail(ErrorKind::InvalidInput, "serialize_results: empty list needs an explicit schema");
  return serialize_results(schema_of(records.front()), records);
}

std::vector<ResultRecord> parse_results(ResultSchema schema, const TrialTable& table) {
  const auto& expected = schema_header(schema);
  if (table.header() != expected) {
    std::string got;
    for (const auto& h : table.header()) got += (got.empty() ? "" : ",") + h;
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    fail(ErrorKind::InvalidInput, "result csv: row 0: header '" + got + "' does not match " +
                                      std::string(to_string(schema)) + " schema '" + want + "'");
  }
  std::vector<ResultRecord> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    RowReader in(table.header(), table.rows()[r], r + 1);
    out.push_back(read_record(schema, in));
  }
  return out;
}

std::vector<ResultRecord> parse_results(ResultSchema schema, std::string_view text) {
  return parse_results(schema, parse_trial_table(text));
}

}  // namespace pbench
