#include "relio/sim/dataset.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relio/core/io.hpp"
#include "relio/core/rng.hpp"

namespace relio {

namespace fs = std::filesystem;
using nlohmann::json;

void writeImuCsv(const std::string& path, const std::vector<ImuSample>& samples) {
  std::ofstream os(path);
  if (!os) throw FileError("writeImuCsv: cannot open " + path);
  os << "t_ns,ax,ay,az,gx,gy,gz\n";
  char buf[256];
  for (const ImuSample& s : samples) {
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(s.stamp.ns), s.accel.x(), s.accel.y(), s.accel.z(),
                  s.gyro.x(), s.gyro.y(), s.gyro.z());
    os << buf;
  }
}

std::vector<ImuSample> readImuCsv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FileError("readImuCsv: cannot open " + path);
  std::vector<ImuSample> out;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ImuSample s;
    long long ns = 0;
    double ax, ay, az, gx, gy, gz;
    if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf,%lf,%lf,%lf", &ns, &ax, &ay, &az, &gx, &gy,
                    &gz) != 7) {
      throw FileError("readImuCsv: malformed line: " + line);
    }
    s.stamp = Timestamp(ns);
    s.accel = {ax, ay, az};
    s.gyro = {gx, gy, gz};
    out.push_back(s);
  }
  return out;
}

void writeCalib(const std::string& path, const SensorRigSpec& rig) {
  std::ofstream os(path);
  if (!os) throw FileError("writeCalib: cannot open " + path);
  auto pose = [](const RigidTransform& T) {
    std::ostringstream ss;
    const auto& t = T.translation();
    const auto& q = T.rotation();
    ss << t.x() << " " << t.y() << " " << t.z() << " " << q.x() << " " << q.y() << " " << q.z()
       << " " << q.w();
    return ss.str();
  };
  os << "[lidar]\n";
  os << "T_body_sensor = " << pose(RigidTransform()) << "\n\n";
  for (const CameraSpec& cam : rig.cameras) {
    os << "[" << cam.name << "]\n";
    os << "model = pinhole\n";
    os << "width = " << cam.width << "\n";
    os << "height = " << cam.height << "\n";
    os << "fx = " << cam.fx << "\nfy = " << cam.fy << "\ncx = " << cam.cx << "\ncy = " << cam.cy
       << "\n";
    os << "distortion_radtan = " << cam.k1 << " " << cam.k2 << " " << cam.p1 << " " << cam.p2
       << "\n";
    os << "bit_depth = " << cam.bit_depth << "\n";
    os << "rate = " << cam.rate << "\n";
    os << "T_body_camera = " << pose(cam.T_body_camera) << "\n\n";
  }
}

CalibFile readCalib(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw FileError("readCalib: cannot open " + path);
  CalibFile calib;
  CameraSpec cam;
  bool in_camera = false;
  std::string section;
  auto flush = [&]() {
    if (in_camera) calib.cameras.push_back(cam);
    in_camera = false;
  };
  std::string line;
  auto parsePose = [](const std::string& text) {
    std::istringstream ss(text);
    double tx, ty, tz, qx, qy, qz, qw;
    ss >> tx >> ty >> tz >> qx >> qy >> qz >> qw;
    return RigidTransform(Eigen::Quaterniond(qw, qx, qy, qz), Eigen::Vector3d(tx, ty, tz));
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      flush();
      section = line.substr(1, line.find(']') - 1);
      if (section != "lidar") {
        cam = CameraSpec{};
        cam.name = section;
        in_camera = true;
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    value.erase(0, value.find_first_not_of(" \t"));
    if (section == "lidar") {
      if (key == "T_body_sensor") calib.T_body_lidar = parsePose(value);
      continue;
    }
    std::istringstream vs(value);
    if (key == "width") vs >> cam.width;
    else if (key == "height") vs >> cam.height;
    else if (key == "fx") vs >> cam.fx;
    else if (key == "fy") vs >> cam.fy;
    else if (key == "cx") vs >> cam.cx;
    else if (key == "cy") vs >> cam.cy;
    else if (key == "distortion_radtan") vs >> cam.k1 >> cam.k2 >> cam.p1 >> cam.p2;
    else if (key == "bit_depth") vs >> cam.bit_depth;
    else if (key == "rate") vs >> cam.rate;
    else if (key == "T_body_camera") cam.T_body_camera = parsePose(value);
  }
  flush();
  return calib;
}

void writeDataset(const Scenario& scenario, const std::string& dir,
                  const DatasetWriterOptions& options) {
  fs::create_directories(fs::path(dir) / "scans");
  const Trajectory& traj = *scenario.trajectory;
  const double t0 = traj.startTime();
  const double t1 = traj.endTime();
  const double sweep_period = 1.0 / scenario.rig.lidar.rate;

  json manifest;
  manifest["preset"] = scenario.name;
  manifest["seed"] = scenario.seed;
  manifest["sweep_period"] = sweep_period;
  manifest["lidar"] = {{"beams", scenario.rig.lidar.beams},
                       {"azimuth_steps", scenario.rig.lidar.azimuth_steps},
                       {"max_range", scenario.rig.lidar.max_range},
                       {"rate", scenario.rig.lidar.rate}};
  manifest["imu_rate"] = scenario.rig.imu.rate;
  json standstills = json::array();
  for (auto [a, b] : traj.standstills()) standstills.push_back({a, b});
  manifest["standstills"] = standstills;
  if (scenario.world.dynamicBox()) manifest["moving_object"] = true;

  // LiDAR sweeps + ground-truth poses at sweep starts.
  std::vector<PoseEstimate> gt;
  json scans = json::array();
  int index = 0;
  for (double t = t0; t + sweep_period <= t1 + 1e-9; t += sweep_period, ++index) {
    const Timestamp stamp = Timestamp::fromSeconds(t);
    const OrganizedScan scan = simulateLidar(scenario.world, traj, stamp, scenario.rig.lidar);
    char name[64];
    std::snprintf(name, sizeof(name), "%06d.ply", index);
    const std::string rel = std::string("scans/") + name;
    writePly((fs::path(dir) / rel).string(), scan.flatten());
    scans.push_back({{"file", rel}, {"stamp_ns", stamp.ns}});

    PoseEstimate pose;
    pose.stamp = stamp;
    pose.transform = traj.at(t).pose;
    pose.source = PoseSource::External;
    gt.push_back(pose);
  }
  manifest["scans"] = scans;
  writeTum((fs::path(dir) / "gt_trajectory.tum").string(), gt);
  manifest["gt_trajectory"] = "gt_trajectory.tum";

  // IMU.
  ImuSpec imu = scenario.rig.imu;
  imu.noise_enabled = options.imu_noise;
  const auto samples = simulateImu(traj, imu, options.noise_seed, t0, t1);
  writeImuCsv((fs::path(dir) / "imu.csv").string(), samples);
  manifest["imu"] = "imu.csv";

  // Camera frames.
  if (options.write_images && !scenario.rig.cameras.empty()) {
    json cams = json::array();
    for (std::size_t ci = 0; ci < scenario.rig.cameras.size(); ++ci) {
      const CameraSpec& cam = scenario.rig.cameras[ci];
      fs::create_directories(fs::path(dir) / "images" / cam.name);
      json frames = json::array();
      const double frame_dt = 1.0 / cam.rate;
      int fi = 0;
      for (double t = t0; t <= t1 + 1e-9; t += frame_dt, ++fi) {
        RenderEffects effects;
        effects.transient_blobs = false;
        effects.seed = options.noise_seed;
        effects.frame = static_cast<std::uint32_t>(fi);
        ImageFrame frame = renderCamera(scenario.world, traj.at(t).pose, cam, effects, t);
        frame.stamp = Timestamp::fromSeconds(t);
        frame.camera_id = static_cast<int>(ci);
        char name[64];
        std::snprintf(name, sizeof(name), "%06d.pgm", fi);
        const std::string rel = std::string("images/") + cam.name + "/" + name;
        writePgm((fs::path(dir) / rel).string(), frame);
        frames.push_back({{"file", rel}, {"stamp_ns", frame.stamp.ns}});
      }
      cams.push_back({{"name", cam.name}, {"frames", frames}});
    }
    manifest["cameras"] = cams;
  }

  // Emulated leg odometry: per-step ground-truth relative motion perturbed by
  // seeded noise, integrated into a drifting absolute stream.
  if (options.write_leg_odometry) {
    std::vector<PoseEstimate> leg;
    CounterRng rng(options.noise_seed, 21);
    const double dt = 1.0 / options.leg_rate;
    RigidTransform acc = traj.at(t0).pose;
    RigidTransform prev_gt = acc;
    for (double t = t0; t <= t1 + 1e-9; t += dt) {
      const RigidTransform cur_gt = traj.at(t).pose;
      RigidTransform rel = prev_gt.inverse() * cur_gt;
      const Eigen::Vector3d tn(rng.nextGaussian(), rng.nextGaussian(), rng.nextGaussian());
      const double yn = rng.nextGaussian();
      rel = rel * RigidTransform(
                      Eigen::Quaterniond(Eigen::AngleAxisd(yn * options.leg_step_noise_yaw,
                                                           Eigen::Vector3d::UnitZ())),
                      tn * options.leg_step_noise_trans);
      acc = acc * rel;
      prev_gt = cur_gt;
      PoseEstimate p;
      p.stamp = Timestamp::fromSeconds(t);
      p.transform = acc;
      p.source = PoseSource::External;
      p.external_rank = 1;
      leg.push_back(p);
    }
    writeTum((fs::path(dir) / "ext_leg.tum").string(), leg);
    manifest["leg_odometry"] = {{"file", "ext_leg.tum"}, {"rate", options.leg_rate}};
  }

  writeCalib((fs::path(dir) / "calib.cfg").string(), scenario.rig);
  manifest["calib"] = "calib.cfg";

  if (options.write_gt_map) {
    writePly((fs::path(dir) / "gt_map.ply").string(),
             scenario.world.sampleSurfacePoints(options.gt_map_spacing));
    manifest["gt_map"] = "gt_map.ply";
  }

  std::ofstream os(fs::path(dir) / "world.json");
  os << manifest.dump(2) << "\n";
  if (!os) throw FileError("writeDataset: cannot write world.json");
}

}  // namespace relio
