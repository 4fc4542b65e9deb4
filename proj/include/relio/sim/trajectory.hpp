#pragma once

#include <Eigen/Core>

#include <memory>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

struct TrajectorySample {
  RigidTransform pose;                                      // world <- body
  Eigen::Vector3d velocity{Eigen::Vector3d::Zero()};        // world frame
  Eigen::Vector3d acceleration{Eigen::Vector3d::Zero()};    // world frame
  Eigen::Vector3d angular_velocity{Eigen::Vector3d::Zero()};  // body frame
};

class Trajectory {
 public:
  virtual ~Trajectory() = default;
  virtual TrajectorySample at(double t) const = 0;
  virtual double startTime() const = 0;
  virtual double endTime() const = 0;
  virtual std::vector<std::pair<double, double>> standstills() const { return {}; }
};

/// Natural cubic spline through (knot, value) pairs with analytic derivatives.
class CubicSpline1d {
 public:
  CubicSpline1d() = default;
  CubicSpline1d(std::vector<double> knots, std::vector<double> values);

  double value(double s) const;
  double derivative(double s) const;
  double secondDerivative(double s) const;

 private:
  std::size_t segmentOf(double s) const;
  std::vector<double> s_, y_, m_;  // knots, values, second derivatives
};

struct Waypoint {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  double yaw{0.0};
};

/// Piecewise trajectory of holds and spline moves. Move segments use a
/// chord-length cubic spline composited with a quintic time warp, so velocity
/// and acceleration vanish at every segment boundary (C2 overall). Yaw-only
/// orientation (roll = pitch = 0).
class SplineTrajectory final : public Trajectory {
 public:
  TrajectorySample at(double t) const override;
  double startTime() const override { return segments_.empty() ? 0.0 : segments_.front().t0; }
  double endTime() const override { return segments_.empty() ? 0.0 : segments_.back().t1; }
  std::vector<std::pair<double, double>> standstills() const override;

 private:
  friend class TrajectoryBuilder;

  struct Segment {
    double t0, t1;
    bool hold;
    Waypoint hold_pose;  // when hold
    CubicSpline1d x, y, z, yaw;
  };
  std::vector<Segment> segments_;
};

class TrajectoryBuilder {
 public:
  TrajectoryBuilder(const Eigen::Vector3d& start_position, double start_yaw,
                    double start_time = 0.0);

  TrajectoryBuilder& hold(double duration);
  /// Smooth move through the given waypoints, ending at the last one.
  TrajectoryBuilder& moveThrough(const std::vector<Waypoint>& waypoints, double duration);

  std::shared_ptr<SplineTrajectory> build();

 private:
  Waypoint cursor_;
  double time_;
  std::vector<SplineTrajectory::Segment> segments_;
};

}  // namespace relio
