#pragma once

#include <array>
#include <optional>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

inline constexpr int kBeamCount = 16;

/// One sweep of a spinning 16-beam sensor, grouped per ring and sorted by
/// azimuth (equivalently by time_offset for a rotating head).
struct OrganizedScan {
  std::array<std::vector<Point>, kBeamCount> rings;
  Timestamp stamp;
  double sweep_period{0.1};  // seconds

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rings) n += r.size();
    return n;
  }
  bool empty() const { return size() == 0; }

  PointCloud flatten() const {
    PointCloud cloud;
    cloud.stamp = stamp;
    cloud.frame = "sensor";
    cloud.points.reserve(size());
    for (const auto& r : rings) cloud.points.insert(cloud.points.end(), r.begin(), r.end());
    return cloud;
  }

  static OrganizedScan organize(const PointCloud& cloud, double sweep_period = 0.1);
};

/// Edge (line-like) and planar (surface-like) feature subsets of one scan.
struct FeatureSet {
  PointCloud edges;
  PointCloud planars;
  Timestamp stamp;

  bool empty() const { return edges.empty() && planars.empty(); }
  std::size_t size() const { return edges.size() + planars.size(); }
};

struct FeatureConfig {
  int half_window{5};            // smoothness neighborhood half width
  int sectors{6};                // azimuth sectors per ring
  int edges_per_sector{2};
  int planars_per_sector{4};
  // Thresholds calibrated for 0.2 deg azimuth resolution: smooth surfaces
  // score ~1e-4, right-angle corners ~2e-3..1e-2.
  double edge_threshold{1e-3};   // minimum smoothness for an edge point
  double planar_threshold{1e-4}; // maximum smoothness for a planar point
  int suppression_neighbors{5};  // neighbor indices masked around a pick
  double occlusion_gap{0.3};     // range gap (m) flagging an occlusion boundary
};

/// LOAM-style smoothness c = |sum_j (p_i - p_j)| / (count * |p_i|) over the
/// +-half_window azimuth neighborhood. Boundary points and zero-range points
/// are left unscored (negative sentinel).
std::vector<double> computeSmoothness(const std::vector<Point>& ring, int half_window);

namespace serial_ref {
std::vector<double> computeSmoothness(const std::vector<Point>& ring, int half_window);
}

/// Per ring and azimuth sector, picks the highest-smoothness points as edges
/// and the lowest as planars, with neighbor suppression and occlusion
/// filtering. Deterministic for a fixed scan and config.
FeatureSet extractFeatures(const OrganizedScan& scan, const FeatureConfig& cfg);

/// Maps each point by the motion interpolated at its time_offset and resets
/// all offsets to zero. `motion` is the sweep-start to sweep-end transform.
OrganizedScan undistortScan(const OrganizedScan& scan, const RigidTransform& motion);

}  // namespace relio
