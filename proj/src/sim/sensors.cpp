#include "relio/sim/sensors.hpp"

#include <cmath>

#include "relio/core/parallel.hpp"
#include "relio/core/rng.hpp"

namespace relio {

namespace {

template <bool Parallel>
OrganizedScan simulateLidarImpl(const WorldModel& world, const Trajectory& trajectory,
                                Timestamp sweep_start, const LidarSpec& spec) {
  OrganizedScan scan;
  scan.stamp = sweep_start;
  scan.sweep_period = 1.0 / spec.rate;
  const double t0 = sweep_start.seconds();
  const double col_dt = scan.sweep_period / spec.azimuth_steps;

  // Columns are independent; each writes its own slot, merged in column order.
  std::vector<std::vector<Point>> columns(spec.azimuth_steps);
  auto castColumn = [&](std::size_t a) {
    const double offset = static_cast<double>(a) * col_dt;
    const TrajectorySample state = trajectory.at(t0 + offset);
    const Eigen::Matrix3d R = state.pose.rotationMatrix();
    const Eigen::Vector3d origin = state.pose.translation();
    const double azimuth = 2.0 * M_PI * static_cast<double>(a) / spec.azimuth_steps;
    const double ca = std::cos(azimuth), sa = std::sin(azimuth);
    auto& out = columns[a];
    for (int r = 0; r < spec.beams; ++r) {
      const double elev_deg =
          spec.fov_down_deg +
          (spec.fov_up_deg - spec.fov_down_deg) * r / std::max(1, spec.beams - 1);
      const double elev = elev_deg * M_PI / 180.0;
      const double ce = std::cos(elev);
      const Eigen::Vector3d dir_sensor(ce * ca, ce * sa, std::sin(elev));
      const auto hit = world.raycast(origin, R * dir_sensor, spec.max_range, t0 + offset);
      if (!hit) continue;
      Point p;
      p.position = dir_sensor * hit->range;  // sensor frame at firing time
      p.intensity = static_cast<float>(world.intensityAt(hit->point, hit->surface));
      p.ring = static_cast<std::uint16_t>(r);
      p.time_offset = offset;
      out.push_back(p);
    }
  };

  if constexpr (Parallel) {
    parallelFor(static_cast<std::size_t>(spec.azimuth_steps), castColumn);
  } else {
    for (std::size_t a = 0; a < static_cast<std::size_t>(spec.azimuth_steps); ++a) castColumn(a);
  }

  for (const auto& col : columns) {
    for (const Point& p : col) scan.rings[p.ring].push_back(p);
  }
  return scan;
}

}  // namespace

OrganizedScan simulateLidar(const WorldModel& world, const Trajectory& trajectory,
                            Timestamp sweep_start, const LidarSpec& spec) {
  return simulateLidarImpl<true>(world, trajectory, sweep_start, spec);
}

namespace serial_ref {
OrganizedScan simulateLidar(const WorldModel& world, const Trajectory& trajectory,
                            Timestamp sweep_start, const LidarSpec& spec) {
  return simulateLidarImpl<false>(world, trajectory, sweep_start, spec);
}
}  // namespace serial_ref

std::vector<ImuSample> simulateImu(const Trajectory& trajectory, const ImuSpec& spec,
                                   std::uint64_t seed, double t0, double t1) {
  std::vector<ImuSample> samples;
  const Eigen::Vector3d gravity_world(0, 0, -kGravityMagnitude);
  const double dt = 1.0 / spec.rate;
  const double nd_g = spec.noise.gyro_noise_density * std::sqrt(spec.rate);
  const double nd_a = spec.noise.accel_noise_density * std::sqrt(spec.rate);
  CounterRng rng(seed, 11);
  const std::int64_t n = static_cast<std::int64_t>(std::floor((t1 - t0) / dt + 1e-9)) + 1;
  samples.reserve(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    const TrajectorySample s = trajectory.at(t);
    const Eigen::Matrix3d Rt = s.pose.rotationMatrix().transpose();
    ImuSample m;
    m.stamp = Timestamp::fromSeconds(t);
    m.accel = Rt * (s.acceleration - gravity_world) + spec.bias.accel;
    m.gyro = s.angular_velocity + spec.bias.gyro;
    if (spec.noise_enabled) {
      m.accel += Eigen::Vector3d(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian()) * nd_a;
      m.gyro += Eigen::Vector3d(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian()) * nd_g;
    }
    samples.push_back(m);
  }
  return samples;
}

bool RenderEffects::blobPresent() const {
  if (!transient_blobs) return false;
  const double u = static_cast<double>(CounterRng::mix(seed ^ 0xb10bull, frame) >> 11) * 0x1.0p-53;
  return u < blob_probability;
}

ImageFrame renderCamera(const WorldModel& world, const RigidTransform& T_world_body,
                        const CameraSpec& cam, const RenderEffects& effects, double t) {
  ImageFrame frame;
  frame.width = cam.width;
  frame.height = cam.height;
  frame.bit_depth = cam.bit_depth;
  frame.pixels.assign(static_cast<std::size_t>(cam.width) * cam.height, 0);

  const RigidTransform T_world_cam = T_world_body * cam.T_body_camera;
  const Eigen::Matrix3d R = T_world_cam.rotationMatrix();
  const Eigen::Vector3d origin = T_world_cam.translation();
  const double vmax = frame.maxValue();

  // Transient bright blob (dust analog): position pure in (seed, frame).
  const bool blob = effects.blobPresent();
  double bx = 0, by = 0, br = 0;
  if (blob) {
    CounterRng rng(effects.seed ^ 0xb10b2ull, effects.frame);
    bx = rng.nextUniform(0.15, 0.85) * cam.width;
    by = rng.nextUniform(0.15, 0.85) * cam.height;
    br = rng.nextUniform(0.08, 0.16) * cam.width;
  }

  parallelFor(static_cast<std::size_t>(cam.height), [&](std::size_t row) {
    for (int col = 0; col < cam.width; ++col) {
      const Eigen::Vector3d dir_cam((col - cam.cx) / cam.fx, (row - cam.cy) / cam.fy, 1.0);
      const Eigen::Vector3d dir = (R * dir_cam).normalized();
      double value = 0.02;  // ambient floor
      const auto hit = world.raycast(origin, dir, 200.0, t);
      if (hit) {
        const double texture = world.intensityAt(hit->point, hit->surface);
        const double falloff = 1.0 / (1.0 + (hit->range / 6.0) * (hit->range / 6.0));
        value = 0.02 + texture * falloff;
      }
      if (blob) {
        const double dx = col - bx, dy = static_cast<double>(row) - by;
        const double d2 = (dx * dx + dy * dy) / (br * br);
        if (d2 < 4.0) value = std::max(value, 0.95 * std::exp(-0.5 * d2));
      }
      frame.at(col, static_cast<int>(row)) =
          static_cast<std::uint16_t>(std::lround(std::clamp(value, 0.0, 1.0) * vmax));
    }
  });
  return frame;
}

}  // namespace relio
