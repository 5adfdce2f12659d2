#include "pbench/cli/image_size.hpp"

#include <array>
#include <cctype>
#include <fstream>
#include <iterator>
#include <vector>

#include "pbench/error.hpp"

namespace pbench {

namespace {

using Bytes = std::vector<unsigned char>;

std::uint32_t be16(const Bytes& b, std::size_t i) { return (std::uint32_t{b[i]} << 8) | b[i + 1]; }
std::uint32_t be32(const Bytes& b, std::size_t i) { return (be16(b, i) << 16) | be16(b, i + 2); }
std::uint32_t le16(const Bytes& b, std::size_t i) { return (std::uint32_t{b[i + 1]} << 8) | b[i]; }

ImageSize checked(std::uint32_t w, std::uint32_t h, const std::filesystem::path& file) {
  if (w == 0 || h == 0 || w > 1'000'000 || h > 1'000'000) {
    fail(ErrorKind::InvalidInput, file.string() + ": implausible image size");
  }
  return {static_cast<int>(w), static_cast<int>(h)};
}

ImageSize jpeg_size(const Bytes& b, const std::filesystem::path& file) {
  std::size_t i = 2;
  while (i + 4 <= b.size()) {
    if (b[i] != 0xFF) break;
    const unsigned marker = b[i + 1];
    if (marker == 0xFF) {
      ++i;
      continue;
    }
    if (marker == 0xD8 || marker == 0x01 || (marker >= 0xD0 && marker <= 0xD7)) {
      i += 2;
      continue;
    }
    const std::size_t len = be16(b, i + 2);
    const bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
    if (sof && i + 9 <= b.size()) return checked(be16(b, i + 7), be16(b, i + 5), file);
    i += 2 + len;
  }
  fail(ErrorKind::InvalidInput, file.string() + ": no JPEG frame header");
}

ImageSize pnm_size(const Bytes& b, const std::filesystem::path& file) {
  std::size_t i = 2;
  std::array<std::uint32_t, 2> dims{};
  for (auto& d : dims) {
    for (;;) {
      while (i < b.size() && std::isspace(b[i])) ++i;
      if (i < b.size() && b[i] == '#') {
        while (i < b.size() && b[i] != '\n') ++i;
        continue;
      }
      break;
    }
    if (i >= b.size() || !std::isdigit(b[i])) fail(ErrorKind::InvalidInput, file.string() + ": bad PNM header");
    std::uint64_t v = 0;
    while (i < b.size() && std::isdigit(b[i]) && v < 10'000'000) v = v * 10 + (b[i++] - '0');
    d = static_cast<std::uint32_t>(v);
  }
  return checked(dims[0], dims[1], file);
}

}  // namespace

ImageSize read_image_size(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open image " + file.string());
  Bytes b(std::istreambuf_iterator<char>(in), {});
  if (b.size() >= 24 && b[0] == 0x89 && b[1] == 'P' && b[2] == 'N' && b[3] == 'G') {
    return checked(be32(b, 16), be32(b, 20), file);
  }
  if (b.size() >= 4 && b[0] == 0xFF && b[1] == 0xD8) return jpeg_size(b, file);
  if (b.size() >= 10 && b[0] == 'G' && b[1] == 'I' && b[2] == 'F') return checked(le16(b, 6), le16(b, 8), file);
  if (b.size() >= 3 && b[0] == 'P' && b[1] >= '1' && b[1] <= '6') return pnm_size(b, file);
  fail(ErrorKind::InvalidInput, file.string() + ": unsupported image format");
}

}  // namespace pbench
