#pragma once

#include <string>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary little-endian PLY with fields x,y,z (double), intensity (float),
/// ring (ushort), time_offset (double). Round-trips coordinates bit-exactly.
void writePly(const std::string& path, const PointCloud& cloud);
PointCloud readPly(const std::string& path);

/// TUM trajectory lines: "t tx ty tz qx qy qz qw", t in seconds.
void writeTum(const std::string& path, const std::vector<PoseEstimate>& trajectory);
std::vector<PoseEstimate> readTum(const std::string& path);

}  // namespace relio
