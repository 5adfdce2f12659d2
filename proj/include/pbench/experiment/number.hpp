#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pbench {

/// Shortest decimal that round-trips to the same double; "inf"/"-inf"/"nan"
/// for non-finite values. Locale independent.
std::string format_number(double v);
std::string format_number(std::int64_t v);

std::optional<double> parse_double(std::string_view s) noexcept;
std::optional<std::int64_t> parse_int(std::string_view s) noexcept;

}  // namespace pbench
