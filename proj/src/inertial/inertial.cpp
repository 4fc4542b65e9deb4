#include "relio/inertial/inertial.hpp"

#include <cmath>

namespace relio {

namespace {

Eigen::Quaterniond expQuat(const Eigen::Vector3d& omega) {
  const double angle = omega.norm();
  if (angle < 1e-14) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, omega / angle));
}

}  // namespace

PreintegratedDelta preintegrate(std::span<const ImuSample> samples, const ImuBias& bias,
                                const ImuNoise& noise) {
  if (samples.size() < 2) {
    throw OrderingError("preintegrate: need at least 2 samples");
  }
  PreintegratedDelta delta;
  delta.bias_used = bias;

  const double var_g = noise.gyro_noise_density * noise.gyro_noise_density;
  const double var_a = noise.accel_noise_density * noise.accel_noise_density;

  // Two midpoint substeps per sample interval over the linearly interpolated
  // signal; plain per-interval midpoint leaves a dt^2/12 position quadrature
  // term that misses the fine-integrator tolerance at walking dynamics.
  constexpr int kSubsteps = 2;

  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const ImuSample& s0 = samples[k];
    const ImuSample& s1 = samples[k + 1];
    if (s1.stamp <= s0.stamp) {
      throw OrderingError("preintegrate: non-monotone sample stamps");
    }
    const double dt_full = static_cast<double>(s1.stamp - s0.stamp) * 1e-9;
    const double dt = dt_full / kSubsteps;

    for (int sub = 0; sub < kSubsteps; ++sub) {
      const double f_mid = (sub + 0.5) / kSubsteps;
      const Eigen::Vector3d omega =
          ((1.0 - f_mid) * s0.gyro + f_mid * s1.gyro) - bias.gyro;
      const Eigen::Vector3d accel =
          ((1.0 - f_mid) * s0.accel + f_mid * s1.accel) - bias.accel;

      const Eigen::Matrix3d R_mid =
          (delta.rotation * expQuat(omega * (0.5 * dt))).toRotationMatrix();
      const Eigen::Quaterniond dR_step = expQuat(omega * dt);

      // Error-state transition for [dtheta, dv, dp].
      Eigen::Matrix<double, 9, 9> A = Eigen::Matrix<double, 9, 9>::Identity();
      A.block<3, 3>(0, 0) = dR_step.toRotationMatrix().transpose();
      A.block<3, 3>(3, 0) = -R_mid * skew(accel) * dt;
      A.block<3, 3>(6, 0) = -0.5 * R_mid * skew(accel) * dt * dt;
      A.block<3, 3>(6, 3) = Eigen::Matrix3d::Identity() * dt;

      Eigen::Matrix<double, 9, 6> B = Eigen::Matrix<double, 9, 6>::Zero();
      B.block<3, 3>(0, 0) = Eigen::Matrix3d::Identity() * dt;
      B.block<3, 3>(3, 3) = R_mid * dt;
      B.block<3, 3>(6, 3) = 0.5 * R_mid * dt * dt;

      Eigen::Matrix<double, 6, 6> Q = Eigen::Matrix<double, 6, 6>::Zero();
      Q.topLeftCorner<3, 3>() = Eigen::Matrix3d::Identity() * (var_g / dt);
      Q.bottomRightCorner<3, 3>() = Eigen::Matrix3d::Identity() * (var_a / dt);

      delta.covariance = A * delta.covariance * A.transpose() + B * Q * B.transpose();
      delta.covariance = (0.5 * (delta.covariance + delta.covariance.transpose())).eval();

      delta.position += delta.velocity * dt + 0.5 * (R_mid * accel) * dt * dt;
      delta.velocity += R_mid * accel * dt;
      delta.rotation = (delta.rotation * dR_step).normalized();
      delta.dt_total += dt;
    }
  }
  return delta;
}

RigidTransform predictRelativePose(const PreintegratedDelta& delta,
                                   const Eigen::Quaterniond& orientation_i,
                                   const Eigen::Vector3d& velocity_i,
                                   const Eigen::Vector3d& gravity_world) {
  const double dt = delta.dt_total;
  const Eigen::Matrix3d Ri_t = orientation_i.toRotationMatrix().transpose();
  const Eigen::Vector3d translation =
      Ri_t * (velocity_i * dt + 0.5 * gravity_world * dt * dt) + delta.position;
  return RigidTransform(delta.rotation, translation);
}

bool detectStatic(std::span<const ImuSample> samples, const StaticThresholds& thresholds) {
  if (samples.size() < 2 ||
      static_cast<double>(samples.back().stamp - samples.front().stamp) * 1e-9 <
          thresholds.min_window) {
    throw InsufficientWindowError("detectStatic: window shorter than required span");
  }
  const double n = static_cast<double>(samples.size());
  double gyro_sum = 0.0, gyro_sq = 0.0, accel_sum = 0.0, accel_sq = 0.0;
  for (const ImuSample& s : samples) {
    const double g = s.gyro.norm();
    const double a = s.accel.norm();
    gyro_sum += g;
    gyro_sq += g * g;
    accel_sum += a;
    accel_sq += a * a;
  }
  const double gyro_var = std::max(0.0, gyro_sq / n - (gyro_sum / n) * (gyro_sum / n));
  const double accel_var = std::max(0.0, accel_sq / n - (accel_sum / n) * (accel_sum / n));
  const double accel_mean = accel_sum / n;
  return gyro_var <= thresholds.gyro_std * thresholds.gyro_std &&
         accel_var <= thresholds.accel_std * thresholds.accel_std &&
         std::abs(accel_mean - kGravityMagnitude) <= thresholds.accel_mean_tol;
}

RollPitch rollPitchFromGravity(const Eigen::Vector3d& mean_accel) {
  const double norm = mean_accel.norm();
  if (std::abs(norm - kGravityMagnitude) > 0.2 * kGravityMagnitude) {
    throw NotStaticError("rollPitchFromGravity: accel magnitude outside 20% of g");
  }
  RollPitch rp;
  rp.roll = std::atan2(mean_accel.y(), mean_accel.z());
  rp.pitch = std::atan2(-mean_accel.x(),
                        std::sqrt(mean_accel.y() * mean_accel.y() + mean_accel.z() * mean_accel.z()));
  return rp;
}

}  // namespace relio
