#pragma once

#include <memory>
#include <string>

#include "relio/sim/sensors.hpp"
#include "relio/sim/trajectory.hpp"
#include "relio/sim/world.hpp"

namespace relio {

struct ScenarioOptions {
  bool moving_object{false};  // animated box crossing the scene
};

/// World + ground-truth trajectory + sensor rig for one named preset.
struct Scenario {
  std::string name;
  std::uint64_t seed{0};
  WorldModel world;
  std::shared_ptr<Trajectory> trajectory;
  SensorRigSpec rig;
};

Scenario makeScenario(const std::string& preset, std::uint64_t seed,
                      const ScenarioOptions& options = {});

}  // namespace relio
