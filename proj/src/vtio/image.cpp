#include "relio/vtio/image.hpp"

#include <fstream>

#include "relio/core/io.hpp"

namespace relio {

void writePgm(const std::string& path, const ImageFrame& frame) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FileError("writePgm: cannot open " + path);
  os << "P5\n" << frame.width << " " << frame.height << "\n" << frame.maxValue() << "\n";
  if (frame.bit_depth == 16) {
    for (std::uint16_t v : frame.pixels) {
      os.put(static_cast<char>(v >> 8));
      os.put(static_cast<char>(v & 0xff));
    }
  } else {
    for (std::uint16_t v : frame.pixels) os.put(static_cast<char>(v & 0xff));
  }
  if (!os) throw FileError("writePgm: write failed for " + path);
}

ImageFrame readPgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FileError("readPgm: cannot open " + path);
  std::string magic;
  is >> magic;
  if (magic != "P5") throw FileError("readPgm: not a binary PGM: " + path);
  int width = 0, height = 0, maxval = 0;
  is >> width >> height >> maxval;
  is.get();  // single whitespace after header
  ImageFrame frame;
  frame.width = width;
  frame.height = height;
  frame.bit_depth = maxval > 255 ? 16 : 8;
  frame.pixels.resize(static_cast<std::size_t>(width) * height);
  if (frame.bit_depth == 16) {
    for (auto& v : frame.pixels) {
      const int hi = is.get();
      const int lo = is.get();
      v = static_cast<std::uint16_t>((hi << 8) | lo);
    }
  } else {
    for (auto& v : frame.pixels) v = static_cast<std::uint16_t>(is.get());
  }
  if (!is) throw FileError("readPgm: truncated payload in " + path);
  return frame;
}

}  // namespace relio
