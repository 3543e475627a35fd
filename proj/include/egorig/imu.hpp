#pragma once

// Inertial measurement synthesis from a mount trajectory. The accelerometer
// reports specific force in the sensor frame (world acceleration minus
// gravity, rotated into the body), the gyroscope the body-frame angular
// rate. Both come from finite differences of the pose track, so samples
// exist only at interior frames.

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "egorig/mount.hpp"

namespace egorig {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

inline Eigen::Vector3d defaultGravity() { return {0.0, 0.0, -kStandardGravity}; }

struct ImuSample {
  double timestamp = 0;                 // seconds, frameIndex / fps
  Eigen::Vector3d linearAcceleration;   // m/s^2, body frame, gravity-reactive
  Eigen::Vector3d angularVelocity;      // rad/s, body frame
};

struct NoiseModel {
  double accelSigma = 0;       // Gaussian std-dev on each accel axis
  double gyroSigma = 0;        // Gaussian std-dev on each gyro axis
  double pixelDropoutRate = 0; // consumed by the render stage, kept here so
                               // one block describes a sensor's corruption
  uint64_t rngSeed = 0;

  void validate() const {
    if (!(accelSigma >= 0) || !(gyroSigma >= 0))
      throw InvalidArgument("noise: sigmas must be non-negative");
    if (!(pixelDropoutRate >= 0) || !(pixelDropoutRate <= 1))
      throw InvalidArgument("noise: pixel dropout rate must lie in [0, 1]");
  }
};

// One sample per interior frame i in [1, frameCount-2]: the world
// acceleration is the central second difference of position at i, the
// angular rate the rotation log between frames i and i+1 scaled by fps.
// Identical seeds reproduce identical noisy streams bit for bit.
std::vector<ImuSample> synthesizeImu(const MountTrajectory& trajectory,
                                     const Eigen::Vector3d& gravity = defaultGravity(),
                                     const NoiseModel& noise = {});

// CSV with header t,ax,ay,az,gx,gy,gz.
void writeImuCsv(std::ostream& out, std::span<const ImuSample> samples);
std::vector<ImuSample> readImuCsv(std::istream& in);

}  // namespace egorig
