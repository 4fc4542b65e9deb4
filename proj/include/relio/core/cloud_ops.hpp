#pragma once

#include "relio/core/geometry.hpp"

namespace relio {

/// Maps every point position by T; intensity/ring/time_offset are preserved.
PointCloud transformCloud(const PointCloud& cloud, const RigidTransform& T);

namespace serial_ref {
/// Reference implementation used by the tests and the kernel benchmark.
PointCloud transformCloud(const PointCloud& cloud, const RigidTransform& T);
}  // namespace serial_ref

}  // namespace relio
