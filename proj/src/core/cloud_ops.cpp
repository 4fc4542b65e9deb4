#include "relio/core/cloud_ops.hpp"

#include "relio/core/parallel.hpp"

namespace relio {

PointCloud transformCloud(const PointCloud& cloud, const RigidTransform& T) {
  PointCloud out;
  out.stamp = cloud.stamp;
  out.frame = cloud.frame;
  out.points.resize(cloud.points.size());
  const Eigen::Matrix3d R = T.rotationMatrix();
  const Eigen::Vector3d t = T.translation();
  parallelFor(cloud.points.size(), [&](std::size_t i) {
    const Point& p = cloud.points[i];
    Point q = p;
    q.position = R * p.position + t;
    out.points[i] = q;
  });
  return out;
}

namespace serial_ref {

PointCloud transformCloud(const PointCloud& cloud, const RigidTransform& T) {
  PointCloud out;
  out.stamp = cloud.stamp;
  out.frame = cloud.frame;
  out.points.resize(cloud.points.size());
  const Eigen::Matrix3d R = T.rotationMatrix();
  const Eigen::Vector3d t = T.translation();
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point& p = cloud.points[i];
    Point q = p;
    q.position = R * p.position + t;
    out.points[i] = q;
  }
  return out;
}

}  // namespace serial_ref

}  // namespace relio
