#pragma once

// Scenario configuration: one sectioned key-value text file describes a
// full simulation run — the skeleton, the motion clips to chain, the static
// scene, and every sensor on the rig. The grammar is documented in the
// README; parsing is strict (unknown keys and malformed lines are errors,
// reported with line numbers).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "egorig/camera.hpp"
#include "egorig/imu.hpp"
#include "egorig/mount.hpp"
#include "egorig/scene.hpp"

namespace egorig {

// One [sensor] block: attachment, mount dynamics, camera and corruption.
// The joint is kept by name and resolved against the skeleton at run time;
// the noise seed is derived from the scenario seed, never configured.
struct SensorConfig {
  std::string name;
  std::string joint;
  MountKind mount = MountKind::Spring;
  RigidTransformd offset;
  SpringParams spring;
  int substeps = 8;
  CameraIntrinsics camera;
  NoiseModel noise;
};

struct ScenarioConfig {
  std::string skeletonPath;
  std::vector<std::string> motionPaths;  // chained in order
  double fps = 0;                        // 0 keeps the motion's native rate
  uint64_t seed = 0;
  int bridgeFrames = 10;
  int blurSamples = 1;
  double bodyRadius = 0.05;  // radius of the self-rendered bone capsules
  int bodySemantic = 1;      // their label; 0 removes the body from renders
  std::string outDir;        // may be empty when supplied on the command line
  std::vector<ScenePrimitive> scene;
  std::vector<SensorConfig> sensors;
  uint64_t configHash = 0;   // FNV-1a of the raw config text

  // Structural checks that need no file access: at least one motion and one
  // sensor, valid ranges, unique sensor names.
  void validate() const;
};

// Relative skeleton/motion/out_dir paths are resolved against `baseDir`.
ScenarioConfig parseScenarioConfig(std::istream& in, const std::string& baseDir);
ScenarioConfig loadScenarioConfig(const std::string& path);

// FNV-1a 64-bit over raw bytes.
uint64_t fnv1a64(std::string_view bytes);

}  // namespace egorig
