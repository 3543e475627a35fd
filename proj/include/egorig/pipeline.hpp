#pragma once

// End-to-end simulation: motions chained and resampled, forward kinematics,
// every sensor mount simulated, frames rendered (optionally shutter-
// averaged), IMU streams synthesized, everything written under one output
// directory. The manifest is written last, so its presence certifies a
// complete run.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "egorig/config.hpp"

namespace egorig {

struct SensorRunRecord {
  std::string name;
  std::string joint;
  int frameCount = 0;
  int imuSamples = 0;
  std::vector<std::string> files;  // relative to the output directory
};

struct RunManifest {
  std::string version;
  uint64_t configHash = 0;
  uint64_t seed = 0;
  double fps = 0;
  int frameCount = 0;
  int blurSamples = 1;
  std::vector<SensorRunRecord> sensors;
};

// Runs the whole scenario. Progress lines go to `log` when given. Throws
// ConfigError/ParseError for bad inputs, StabilityError for an unstable
// spring, IoError when files cannot be read or written.
RunManifest runSimulation(const ScenarioConfig& config, std::ostream* log = nullptr);

void writeManifest(std::ostream& out, const RunManifest& manifest);

}  // namespace egorig
