#pragma once

#include <vector>

#include "relio/features/features.hpp"
#include "relio/inertial/inertial.hpp"
#include "relio/sim/trajectory.hpp"
#include "relio/sim/world.hpp"
#include "relio/vtio/image.hpp"

namespace relio {

struct LidarSpec {
  int beams{kBeamCount};
  double fov_up_deg{15.0};
  double fov_down_deg{-15.0};
  int azimuth_steps{1800};
  double rate{10.0};       // Hz
  double max_range{100.0};  // m
};

struct ImuSpec {
  double rate{400.0};  // Hz
  ImuNoise noise;
  ImuBias bias;
  bool noise_enabled{true};
};

struct CameraSpec {
  std::string name{"cam0"};
  int width{160};
  int height{120};
  double fx{120.0};
  double fy{120.0};
  double cx{79.5};
  double cy{59.5};
  double k1{0.0}, k2{0.0}, p1{0.0}, p2{0.0};  // radial-tangential
  int bit_depth{8};
  double rate{20.0};
  RigidTransform T_body_camera;  // camera z looks along body +x by default

  static RigidTransform defaultOpticalMount() {
    Eigen::Matrix3d R;
    // camera x = -body y (right), camera y = -body z (down), camera z = body x.
    R.col(0) = -Eigen::Vector3d::UnitY();
    R.col(1) = -Eigen::Vector3d::UnitZ();
    R.col(2) = Eigen::Vector3d::UnitX();
    return RigidTransform(Eigen::Quaterniond(R), Eigen::Vector3d(0.1, 0.0, 0.0));
  }
};

struct SensorRigSpec {
  LidarSpec lidar;
  ImuSpec imu;
  std::vector<CameraSpec> cameras;

  static SensorRigSpec standard() {
    SensorRigSpec rig;
    CameraSpec cam;
    cam.T_body_camera = CameraSpec::defaultOpticalMount();
    rig.cameras.push_back(cam);
    return rig;
  }
};

/// One rotating sweep: every (ring, azimuth) ray is cast from the pose at its
/// own firing time, so raw scans of a moving sensor carry motion distortion.
/// Points are in the sensor frame at each firing instant.
OrganizedScan simulateLidar(const WorldModel& world, const Trajectory& trajectory,
                            Timestamp sweep_start, const LidarSpec& spec);

namespace serial_ref {
OrganizedScan simulateLidar(const WorldModel& world, const Trajectory& trajectory,
                            Timestamp sweep_start, const LidarSpec& spec);
}

/// IMU stream over [t0, t1]: specific force and body rates from the trajectory
/// derivatives plus constant bias and seeded white noise.
std::vector<ImuSample> simulateImu(const Trajectory& trajectory, const ImuSpec& spec,
                                   std::uint64_t seed, double t0, double t1);

struct RenderEffects {
  bool transient_blobs{false};
  std::uint64_t seed{0};
  std::uint32_t frame{0};
  double blob_probability{0.25};

  /// Purely a function of (seed, frame): whether this frame carries a blob.
  bool blobPresent() const;
};

/// Pinhole render with inverse-square headlamp falloff over the world's
/// procedural texture; deterministic for fixed inputs.
ImageFrame renderCamera(const WorldModel& world, const RigidTransform& T_world_body,
                        const CameraSpec& cam, const RenderEffects& effects, double t = 0.0);

}  // namespace relio
