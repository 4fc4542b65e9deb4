#pragma once

#include <string>
#include <vector>

#include "relio/sim/scenario.hpp"

namespace relio {

struct DatasetWriterOptions {
  bool write_images{true};
  bool write_gt_map{true};
  double gt_map_spacing{0.25};
  std::uint64_t noise_seed{0};
  bool imu_noise{true};
  // Emulated leg odometry: ground truth + bounded drift + noise at 20 Hz.
  bool write_leg_odometry{true};
  double leg_rate{20.0};
  double leg_step_noise_trans{0.002};  // m per step
  double leg_step_noise_yaw{0.0015};   // rad per step
};

/// Writes the canonical dataset layout:
///   dir/scans/NNNNNN.ply, dir/imu.csv, dir/images/<cam>/NNNNNN.pgm,
///   dir/gt_trajectory.tum, dir/ext_leg.tum, dir/calib.cfg, dir/world.json,
///   dir/gt_map.ply
void writeDataset(const Scenario& scenario, const std::string& dir,
                  const DatasetWriterOptions& options = {});

/// IMU CSV: "t_ns,ax,ay,az,gx,gy,gz" per line.
void writeImuCsv(const std::string& path, const std::vector<ImuSample>& samples);
std::vector<ImuSample> readImuCsv(const std::string& path);

struct CalibFile {
  std::vector<CameraSpec> cameras;
  RigidTransform T_body_lidar;
};

void writeCalib(const std::string& path, const SensorRigSpec& rig);
CalibFile readCalib(const std::string& path);

}  // namespace relio
