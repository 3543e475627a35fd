#pragma once

// Sensor mounts: a fixed offset in some joint frame, tracked either rigidly
// or through a translational spring-damper with a first-order rotational
// pull. The damper acts on the velocity relative to the target (it sits in
// the linkage), so constant-velocity anchors are followed without lag. The
// spring integrates with semi-implicit Euler between frame anchors,
// interpolating the target linearly across each frame interval.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "egorig/error.hpp"
#include "egorig/rigid_transform.hpp"

namespace egorig {

enum class MountKind { Rigid, Spring };

struct SpringParams {
  double mass = 0.1;        // kg
  double stiffness = 200.0; // N/m
  double damping = 4.0;     // N*s/m
  // Rotational pull toward the rigid target, applied as an exact
  // exponential decay of the axis-angle error with rate rotStiffness /
  // rotDamping (1/s).
  double rotStiffness = 5.0;
  double rotDamping = 0.5;
  bool springRotation = true;  // false keeps the rotation rigidly on target

  void validate() const {
    if (!(mass > 0)) throw InvalidArgument("spring: mass must be positive");
    if (!(stiffness > 0)) throw InvalidArgument("spring: stiffness must be positive");
    if (!(damping >= 0)) throw InvalidArgument("spring: damping must be non-negative");
    if (springRotation && (!(rotStiffness > 0) || !(rotDamping > 0)))
      throw InvalidArgument("spring: rotational constants must be positive");
  }
};

struct MountSpec {
  int joint = 0;                 // index of the anchoring joint
  RigidTransformd offset;        // sensor pose in the joint frame
  MountKind kind = MountKind::Rigid;
  SpringParams spring;
};

// Instantaneous spring state; also usable to start the integration from a
// perturbed configuration instead of the rigid rest pose.
struct SpringState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
};

struct MountTrajectory {
  double fps = 0;
  std::vector<RigidTransformd> poses;

  int frameCount() const { return static_cast<int>(poses.size()); }
};

// Sensor poses when the mount is perfectly stiff: anchor ∘ offset per frame.
MountTrajectory simulateRigid(std::span<const RigidTransformd> anchors, const MountSpec& spec,
                              double fps);

// Spring-damper tracking of the rigid target. Each frame interval is split
// into `substeps` semi-implicit Euler steps against the linearly
// interpolated target. Starts at the rigid pose with zero velocity unless
// `initial` overrides it. `stateLog`, when given, receives the state at
// every frame boundary (including frame 0). Throws StabilityError when the
// step size exceeds the stable region 2*sqrt(mass/stiffness).
MountTrajectory simulateSpring(std::span<const RigidTransformd> anchors, const MountSpec& spec,
                               double fps, int substeps, const SpringState* initial = nullptr,
                               std::vector<SpringState>* stateLog = nullptr);

// Mean positional distance and mean rotational deviation ||Ra Rb^T - I||_F
// between two equally long trajectories.
struct TrajectoryError {
  double position = 0;
  double rotation = 0;
};

TrajectoryError trajectoryError(const MountTrajectory& a, const MountTrajectory& b);

}  // namespace egorig
