#include "relio/sim/scenario.hpp"

#include <cmath>

namespace relio {

namespace {

constexpr double kSensorHeight = 0.6;

Waypoint wp(double x, double y, double yaw) { return Waypoint{{x, y, kSensorHeight}, yaw}; }

std::shared_ptr<Trajectory> boxRoomPath() {
  TrajectoryBuilder b({1.2, 0.0, kSensorHeight}, M_PI / 2);
  b.hold(0.6);
  b.moveThrough({wp(0.0, 1.2, M_PI), wp(-1.2, 0.0, 1.5 * M_PI), wp(0.0, -1.2, 2.0 * M_PI),
                 wp(1.2, 0.0, 2.5 * M_PI)},
                3.8);
  b.hold(0.6);
  return b.build();
}

std::shared_ptr<Trajectory> straightTunnelPath() {
  TrajectoryBuilder b({0.0, 0.0, kSensorHeight}, 0.0);
  b.hold(1.5);
  b.moveThrough({wp(25, 0, 0), wp(50, 0, 0), wp(75, 0, 0), wp(100, 0, 0)}, 50.0);
  b.hold(1.5);
  return b.build();
}

std::shared_ptr<Trajectory> junctionPath() {
  TrajectoryBuilder b({0.0, 0.0, kSensorHeight}, 0.0);
  b.hold(1.5);
  b.moveThrough({wp(8, 0, 0), wp(16, 0, 0), wp(19.5, 1.5, M_PI / 3), wp(20, 6, M_PI / 2),
                 wp(20, 16, M_PI / 2), wp(20, 26, M_PI / 2), wp(20, 35, M_PI / 2)},
                26.0);
  b.hold(1.5);
  return b.build();
}

std::shared_ptr<Trajectory> cavePath() {
  TrajectoryBuilder b({8.0, 8.0, kSensorHeight}, 0.0);
  b.hold(1.5);
  b.moveThrough({wp(20, 7, 0), wp(34, 9, M_PI / 4), wp(37, 17, M_PI / 2), wp(34, 24, 3 * M_PI / 4),
                 wp(20, 26, M_PI), wp(9, 23, 1.25 * M_PI), wp(7, 15, 1.5 * M_PI)},
                36.0);
  b.hold(1.5);
  return b.build();
}

std::shared_ptr<Trajectory> loopPath() {
  TrajectoryBuilder b({0.0, 0.0, kSensorHeight}, 0.0);
  b.hold(1.5);
  std::vector<Waypoint> pts;
  // Square centerline with pre-corner control points so the rounded spline
  // stays inside the corner opening.
  auto side = [&](double yaw, auto&&... w) { (pts.push_back(Waypoint{{w.x(), w.y(), kSensorHeight}, yaw}), ...); };
  side(0.0, Eigen::Vector2d(12, 0), Eigen::Vector2d(25, 0), Eigen::Vector2d(38, 0),
       Eigen::Vector2d(47, 0));
  side(M_PI / 2, Eigen::Vector2d(50, 3), Eigen::Vector2d(50, 12), Eigen::Vector2d(50, 25),
       Eigen::Vector2d(50, 38), Eigen::Vector2d(50, 47));
  side(M_PI, Eigen::Vector2d(47, 50), Eigen::Vector2d(38, 50), Eigen::Vector2d(25, 50),
       Eigen::Vector2d(12, 50), Eigen::Vector2d(3, 50));
  side(1.5 * M_PI, Eigen::Vector2d(0, 47), Eigen::Vector2d(0, 38), Eigen::Vector2d(0, 25),
       Eigen::Vector2d(0, 12), Eigen::Vector2d(0, 3));
  side(2.0 * M_PI, Eigen::Vector2d(0, 0));
  b.moveThrough(pts, 100.0);
  b.hold(1.5);
  return b.build();
}

std::shared_ptr<Trajectory> narrowPassagePath() {
  TrajectoryBuilder b({-2.0, 0.0, kSensorHeight}, 0.0);
  b.hold(1.5);
  b.moveThrough({wp(4, 0, 0), wp(11, 0, 0), wp(18, 0, 0), wp(23, 0, 0)}, 15.0);
  b.hold(1.5);
  return b.build();
}

}  // namespace

Scenario makeScenario(const std::string& preset, std::uint64_t seed,
                      const ScenarioOptions& options) {
  Scenario s;
  s.name = preset;
  s.seed = seed;
  s.world = WorldModel::generate(preset, seed);
  s.rig = SensorRigSpec::standard();
  switch (s.world.preset()) {
    case WorldPreset::BoxRoom: s.trajectory = boxRoomPath(); break;
    case WorldPreset::StraightTunnel: s.trajectory = straightTunnelPath(); break;
    case WorldPreset::Junction: s.trajectory = junctionPath(); break;
    case WorldPreset::Cave: s.trajectory = cavePath(); break;
    case WorldPreset::Loop: s.trajectory = loopPath(); break;
    case WorldPreset::NarrowPassage: s.trajectory = narrowPassagePath(); break;
  }
  if (options.moving_object) {
    Eigen::Vector3d lo, hi;
    s.world.boundingBox(lo, hi);
    DynamicBox box;
    box.from = Eigen::Vector3d(lo.x() + 2.0, (lo.y() + hi.y()) / 2 - 1.0, 0.9);
    box.to = Eigen::Vector3d(std::min(hi.x() - 2.0, lo.x() + 12.0), (lo.y() + hi.y()) / 2 + 1.0, 0.9);
    box.t_start = s.trajectory->startTime() + 2.0;
    box.t_end = box.t_start + 6.0;
    s.world.setDynamicBox(box);
  }
  return s;
}

}  // namespace relio
