#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

/// Grayscale frame, 8- or 16-bit, stored row-major in uint16 slots.
struct ImageFrame {
  int width{0};
  int height{0};
  int bit_depth{8};  // 8 or 16
  std::vector<std::uint16_t> pixels;
  Timestamp stamp;
  int camera_id{0};

  std::uint16_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint16_t maxValue() const { return bit_depth == 16 ? 65535 : 255; }

  static ImageFrame constant(int w, int h, std::uint16_t value, int bit_depth = 8) {
    ImageFrame f;
    f.width = w;
    f.height = h;
    f.bit_depth = bit_depth;
    f.pixels.assign(static_cast<std::size_t>(w) * h, value);
    return f;
  }
};

/// Binary PGM (P5), maxval 255 or 65535 (16-bit stored big-endian per spec).
void writePgm(const std::string& path, const ImageFrame& frame);
ImageFrame readPgm(const std::string& path);

}  // namespace relio
