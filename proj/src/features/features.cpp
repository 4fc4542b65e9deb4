#include "relio/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "relio/core/parallel.hpp"

namespace relio {

OrganizedScan OrganizedScan::organize(const PointCloud& cloud, double sweep_period) {
  OrganizedScan scan;
  scan.stamp = cloud.stamp;
  scan.sweep_period = sweep_period;
  for (const Point& p : cloud.points) {
    if (p.ring >= kBeamCount) continue;
    scan.rings[p.ring].push_back(p);
  }
  for (auto& ring : scan.rings) {
    std::stable_sort(ring.begin(), ring.end(), [](const Point& a, const Point& b) {
      return a.time_offset < b.time_offset;
    });
  }
  return scan;
}

namespace {

std::vector<double> smoothnessImpl(const std::vector<Point>& ring, int half_window) {
  const int n = static_cast<int>(ring.size());
  std::vector<double> c(ring.size(), -1.0);
  for (int i = half_window; i < n - half_window; ++i) {
    const Eigen::Vector3d& pi = ring[i].position;
    const double norm_pi = pi.norm();
    if (norm_pi <= 0.0) continue;  // sensor-origin point cannot be scored
    Eigen::Vector3d diff = Eigen::Vector3d::Zero();
    for (int j = i - half_window; j <= i + half_window; ++j) {
      if (j == i) continue;
      diff += pi - ring[j].position;
    }
    c[i] = diff.norm() / (2.0 * half_window * norm_pi);
  }
  return c;
}

}  // namespace

std::vector<double> computeSmoothness(const std::vector<Point>& ring, int half_window) {
  const int n = static_cast<int>(ring.size());
  std::vector<double> c(ring.size(), -1.0);
  if (n <= 2 * half_window) return c;
  parallelFor(static_cast<std::size_t>(n), [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    if (i < half_window || i >= n - half_window) return;
    const Eigen::Vector3d& pi = ring[i].position;
    const double norm_pi = pi.norm();
    if (norm_pi <= 0.0) return;
    Eigen::Vector3d diff = Eigen::Vector3d::Zero();
    for (int j = i - half_window; j <= i + half_window; ++j) {
      if (j == i) continue;
      diff += pi - ring[j].position;
    }
    c[idx] = diff.norm() / (2.0 * half_window * norm_pi);
  });
  return c;
}

namespace serial_ref {
std::vector<double> computeSmoothness(const std::vector<Point>& ring, int half_window) {
  if (static_cast<int>(ring.size()) <= 2 * half_window) {
    return std::vector<double>(ring.size(), -1.0);
  }
  return smoothnessImpl(ring, half_window);
}
}  // namespace serial_ref

FeatureSet extractFeatures(const OrganizedScan& scan, const FeatureConfig& cfg) {
  FeatureSet features;
  features.stamp = scan.stamp;
  features.edges.stamp = scan.stamp;
  features.planars.stamp = scan.stamp;
  features.edges.frame = features.planars.frame = "sensor";

  // Scored rings are independent; the merge below runs in ring order so the
  // output is deterministic regardless of thread count.
  std::array<std::vector<double>, kBeamCount> smoothness;
  std::array<std::vector<std::uint8_t>, kBeamCount> blocked;
  parallelFor(kBeamCount, [&](std::size_t r) {
    const std::vector<Point>& ring = scan.rings[r];
    smoothness[r] = computeSmoothness(ring, cfg.half_window);
    auto& mask = blocked[r];
    mask.assign(ring.size(), 0);
    // Occlusion filtering: at a range discontinuity the far side produces
    // phantom edges, so mask a few points on the far side of the gap.
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const double r0 = ring[i].position.norm();
      const double r1 = ring[i + 1].position.norm();
      if (r1 - r0 > cfg.occlusion_gap) {
        for (int j = 0; j <= cfg.suppression_neighbors && i + 1 + j < ring.size(); ++j) {
          mask[i + 1 + j] = 1;
        }
      } else if (r0 - r1 > cfg.occlusion_gap) {
        for (int j = 0; j <= cfg.suppression_neighbors && i >= static_cast<std::size_t>(j); ++j) {
          mask[i - j] = 1;
        }
      }
    }
  });

  for (int r = 0; r < kBeamCount; ++r) {
    const std::vector<Point>& ring = scan.rings[r];
    const std::vector<double>& c = smoothness[r];
    const int n = static_cast<int>(ring.size());
    if (n == 0) continue;
    std::vector<std::uint8_t> used(blocked[r].begin(), blocked[r].end());

    for (int s = 0; s < cfg.sectors; ++s) {
      const int begin = static_cast<int>(static_cast<std::int64_t>(n) * s / cfg.sectors);
      const int end = static_cast<int>(static_cast<std::int64_t>(n) * (s + 1) / cfg.sectors);
      if (end <= begin) continue;

      std::vector<int> idx(end - begin);
      std::iota(idx.begin(), idx.end(), begin);
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return c[a] > c[b]; });

      int edges_taken = 0;
      for (int i : idx) {
        if (edges_taken >= cfg.edges_per_sector) break;
        if (c[i] < cfg.edge_threshold) break;  // sorted descending
        if (used[i]) continue;
        features.edges.points.push_back(ring[i]);
        ++edges_taken;
        for (int j = std::max(0, i - cfg.suppression_neighbors);
             j <= std::min(n - 1, i + cfg.suppression_neighbors); ++j) {
          used[j] = 1;
        }
      }

      int planars_taken = 0;
      for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        const int i = *it;
        if (planars_taken >= cfg.planars_per_sector) break;
        if (c[i] < 0.0) continue;  // unscored
        if (c[i] > cfg.planar_threshold) break;  // sorted ascending from here
        if (used[i]) continue;
        features.planars.points.push_back(ring[i]);
        ++planars_taken;
        for (int j = std::max(0, i - cfg.suppression_neighbors);
             j <= std::min(n - 1, i + cfg.suppression_neighbors); ++j) {
          used[j] = 1;
        }
      }
    }
  }
  return features;
}

OrganizedScan undistortScan(const OrganizedScan& scan, const RigidTransform& motion) {
  OrganizedScan out = scan;
  const RigidTransform identity;
  parallelFor(kBeamCount, [&](std::size_t r) {
    for (Point& p : out.rings[r]) {
      const double alpha = scan.sweep_period > 0.0
                               ? std::clamp(p.time_offset / scan.sweep_period, 0.0, 1.0)
                               : 0.0;
      const RigidTransform pose = interpolate(identity, motion, alpha);
      p.position = pose * p.position;
      p.time_offset = 0.0;
    }
  });
  return out;
}

}  // namespace relio
