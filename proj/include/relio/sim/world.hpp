#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triangle {
  Eigen::Vector3d a, b, c;
  std::uint32_t surface{0};
};

struct RayHit {
  double range;
  Eigen::Vector3d point;
  std::uint32_t triangle;
  std::uint32_t surface;
};

enum class WorldPreset { StraightTunnel, Junction, Cave, Loop, NarrowPassage, BoxRoom };

WorldPreset parsePreset(const std::string& name);
std::string presetName(WorldPreset preset);

/// Animated box crossing the scene between two endpoints (moving-person analog).
struct DynamicBox {
  Eigen::Vector3d size{0.5, 0.5, 1.8};
  Eigen::Vector3d from;
  Eigen::Vector3d to;
  double t_start{0.0};
  double t_end{1.0};
};

/// Triangle-soup world with per-surface procedural intensity. Deterministic
/// for a fixed (preset, seed); raycasts go through a median-split BVH.
class WorldModel {
 public:
  WorldModel() = default;

  static WorldModel generate(WorldPreset preset, std::uint64_t seed);
  static WorldModel generate(const std::string& preset, std::uint64_t seed) {
    return generate(parsePreset(preset), seed);
  }
  /// Custom geometry (tests, bespoke scenes).
  static WorldModel fromTriangles(std::vector<Triangle> triangles, std::uint64_t seed = 0);
  static WorldModel axisAlignedBox(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                                   std::uint64_t seed = 0);

  const std::vector<Triangle>& triangles() const { return triangles_; }
  WorldPreset preset() const { return preset_; }
  std::uint64_t seed() const { return seed_; }

  /// Nearest surface hit along (origin, unit dir) within max_range, at time t
  /// (the dynamic box, when enabled, is evaluated at t).
  std::optional<RayHit> raycast(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                double max_range, double t = 0.0) const;

  /// Procedural surface intensity in [0, 1].
  double intensityAt(const Eigen::Vector3d& point, std::uint32_t surface) const;

  void setDynamicBox(const DynamicBox& box) { dynamic_box_ = box; }
  const std::optional<DynamicBox>& dynamicBox() const { return dynamic_box_; }

  /// Axis-aligned extent of the static geometry.
  void boundingBox(Eigen::Vector3d& lo, Eigen::Vector3d& hi) const;

  /// Regions rendered nearly black regardless of texture (camera degradation).
  void addDarkRegion(const Eigen::Vector3d& lo, const Eigen::Vector3d& hi) {
    dark_regions_.emplace_back(lo, hi);
  }
  bool inDarkRegion(const Eigen::Vector3d& p) const;

  /// Evenly samples points on all surfaces (ground-truth cloud for metrics).
  PointCloud sampleSurfacePoints(double spacing) const;

 private:
  friend class WorldBuilder;

  void buildBvh();
  std::optional<RayHit> raycastStatic(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                      double max_range) const;

  struct BvhNode {
    Eigen::Vector3d lo, hi;
    std::int32_t left{-1}, right{-1};
    std::uint32_t first{0}, count{0};  // leaf triangle range
  };

  std::vector<Triangle> triangles_;
  std::vector<std::uint32_t> tri_order_;
  std::vector<BvhNode> nodes_;
  std::vector<std::pair<Eigen::Vector3d, Eigen::Vector3d>> dark_regions_;
  std::optional<DynamicBox> dynamic_box_;
  WorldPreset preset_{WorldPreset::BoxRoom};
  std::uint64_t seed_{0};
};

}  // namespace relio
