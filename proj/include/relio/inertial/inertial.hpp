#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

#include "relio/core/geometry.hpp"

namespace relio {

inline constexpr double kGravityMagnitude = 9.81;  // m/s^2, fixed

struct ImuSample {
  Timestamp stamp;
  Eigen::Vector3d accel{Eigen::Vector3d::Zero()};  // specific force, m/s^2
  Eigen::Vector3d gyro{Eigen::Vector3d::Zero()};   // rad/s
};

struct ImuBias {
  Eigen::Vector3d accel{Eigen::Vector3d::Zero()};
  Eigen::Vector3d gyro{Eigen::Vector3d::Zero()};
};

struct ImuNoise {
  double gyro_noise_density{1e-3};   // rad/s/sqrt(Hz)
  double accel_noise_density{1e-2};  // m/s^2/sqrt(Hz)
  double gyro_bias_walk{1e-5};
  double accel_bias_walk{1e-4};
};

/// Gravity-free relative motion accumulated between two stamps, independent of
/// the absolute start pose and velocity. Error-state order [dtheta, dv, dp].
struct PreintegratedDelta {
  Eigen::Quaterniond rotation{Eigen::Quaterniond::Identity()};
  Eigen::Vector3d velocity{Eigen::Vector3d::Zero()};
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  double dt_total{0.0};
  ImuBias bias_used;
  Eigen::Matrix<double, 9, 9> covariance{Eigen::Matrix<double, 9, 9>::Zero()};
};

class OrderingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientWindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotStaticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Midpoint integration of bias-corrected samples into a gravity-free delta.
/// Requires >= 2 samples with strictly increasing stamps.
PreintegratedDelta preintegrate(std::span<const ImuSample> samples, const ImuBias& bias,
                                const ImuNoise& noise = ImuNoise{});

/// Re-adds gravity and the initial velocity: relative pose of the end stamp in
/// the start-stamp body frame.
RigidTransform predictRelativePose(const PreintegratedDelta& delta,
                                   const Eigen::Quaterniond& orientation_i,
                                   const Eigen::Vector3d& velocity_i,
                                   const Eigen::Vector3d& gravity_world);

struct StaticThresholds {
  double gyro_std{0.01};        // rad/s
  double accel_std{0.05};       // m/s^2
  double accel_mean_tol{0.3};   // | |mean accel| - g |, m/s^2
  double min_window{0.5};       // s
};

/// True iff gyro-magnitude and accel-magnitude stay quiet and the mean accel
/// magnitude is near gravity over the whole window (>= 0.5 s).
bool detectStatic(std::span<const ImuSample> samples, const StaticThresholds& thresholds = {});

struct RollPitch {
  double roll{0.0};
  double pitch{0.0};
};

/// Gravity-aligned attitude from a static-mean accelerometer reading.
/// roll = atan2(ay, az), pitch = atan2(-ax, sqrt(ay^2+az^2)) (ZYX convention).
RollPitch rollPitchFromGravity(const Eigen::Vector3d& mean_accel);

}  // namespace relio
