#pragma once

#include <filesystem>

#include "pbench/stats/clicks.hpp"

namespace pbench {

/// Pixel size from a PNG, JPEG, GIF or binary/ASCII PNM header. Throws
/// InvalidInput for unreadable or unsupported files.
ImageSize read_image_size(const std::filesystem::path& file);

}  // namespace pbench
