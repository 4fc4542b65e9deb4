#include "relio/core/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace relio {

namespace {

template <typename T>
void putScalar(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T getScalar(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

}  // namespace

void writePly(const std::string& path, const PointCloud& cloud) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FileError("writePly: cannot open " + path);
  os << "ply\n"
     << "format binary_little_endian 1.0\n"
     << "comment frame " << (cloud.frame.empty() ? "unknown" : cloud.frame) << "\n"
     << "comment stamp_ns " << cloud.stamp.ns << "\n"
     << "element vertex " << cloud.points.size() << "\n"
     << "property double x\n"
     << "property double y\n"
     << "property double z\n"
     << "property float intensity\n"
     << "property ushort ring\n"
     << "property double time_offset\n"
     << "end_header\n";
  for (const Point& p : cloud.points) {
    putScalar(os, p.position.x());
    putScalar(os, p.position.y());
    putScalar(os, p.position.z());
    putScalar(os, p.intensity);
    putScalar(os, p.ring);
    putScalar(os, p.time_offset);
  }
  if (!os) throw FileError("writePly: write failed for " + path);
}

PointCloud readPly(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FileError("readPly: cannot open " + path);

  std::string line;
  std::getline(is, line);
  if (line != "ply") throw FileError("readPly: not a PLY file: " + path);

  std::size_t vertex_count = 0;
  PointCloud cloud;
  bool binary_le = false;
  std::vector<std::pair<std::string, std::string>> props;  // (type, name)
  while (std::getline(is, line)) {
    std::istringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "end_header") break;
    if (tok == "format") {
      std::string fmt;
      ss >> fmt;
      binary_le = (fmt == "binary_little_endian");
    } else if (tok == "comment") {
      std::string key;
      ss >> key;
      if (key == "stamp_ns") {
        std::int64_t ns = 0;
        ss >> ns;
        cloud.stamp = Timestamp(ns);
      } else if (key == "frame") {
        ss >> cloud.frame;
      }
    } else if (tok == "element") {
      std::string name;
      ss >> name >> vertex_count;
      if (name != "vertex") throw FileError("readPly: unsupported element " + name);
    } else if (tok == "property") {
      std::string type, name;
      ss >> type >> name;
      props.emplace_back(type, name);
    }
  }
  if (!binary_le) throw FileError("readPly: only binary_little_endian supported: " + path);

  cloud.points.resize(vertex_count);
  for (std::size_t i = 0; i < vertex_count; ++i) {
    Point& p = cloud.points[i];
    for (const auto& [type, name] : props) {
      double value = 0.0;
      if (type == "double") {
        value = getScalar<double>(is);
      } else if (type == "float") {
        value = static_cast<double>(getScalar<float>(is));
      } else if (type == "ushort") {
        value = static_cast<double>(getScalar<std::uint16_t>(is));
      } else if (type == "uint" || type == "int") {
        value = static_cast<double>(getScalar<std::uint32_t>(is));
      } else if (type == "uchar") {
        value = static_cast<double>(getScalar<std::uint8_t>(is));
      } else {
        throw FileError("readPly: unsupported property type " + type);
      }
      if (name == "x") p.position.x() = value;
      else if (name == "y") p.position.y() = value;
      else if (name == "z") p.position.z() = value;
      else if (name == "intensity") p.intensity = static_cast<float>(value);
      else if (name == "ring") p.ring = static_cast<std::uint16_t>(value);
      else if (name == "time_offset") p.time_offset = value;
    }
  }
  if (!is) throw FileError("readPly: truncated payload in " + path);
  return cloud;
}

void writeTum(const std::string& path, const std::vector<PoseEstimate>& trajectory) {
  std::ofstream os(path);
  if (!os) throw FileError("writeTum: cannot open " + path);
  char buf[320];
  for (const PoseEstimate& pose : trajectory) {
    const Eigen::Vector3d& t = pose.transform.translation();
    const Eigen::Quaterniond& q = pose.transform.rotation();
    std::snprintf(buf, sizeof(buf), "%.9f %.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  pose.stamp.seconds(), t.x(), t.y(), t.z(), q.x(), q.y(), q.z(), q.w());
    os << buf;
  }
  if (!os) throw FileError("writeTum: write failed for " + path);
}

std::vector<PoseEstimate> readTum(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FileError("readTum: cannot open " + path);
  std::vector<PoseEstimate> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double t, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> t >> tx >> ty >> tz >> qx >> qy >> qz >> qw)) {
      throw FileError("readTum: malformed line in " + path + ": " + line);
    }
    PoseEstimate pose;
    pose.stamp = Timestamp::fromSeconds(t);
    pose.transform = RigidTransform(Eigen::Quaterniond(qw, qx, qy, qz), Eigen::Vector3d(tx, ty, tz));
    pose.source = PoseSource::External;
    out.push_back(pose);
  }
  return out;
}

}  // namespace relio
