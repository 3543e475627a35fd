#include "egorig/mount.hpp"

#include <cmath>
#include <string>

#include "egorig/rotation.hpp"

namespace egorig {

namespace {

void checkCommon(std::span<const RigidTransformd> anchors, double fps) {
  if (anchors.empty()) throw InvalidArgument("mount simulation: no anchor frames");
  if (!(fps > 0)) throw InvalidArgument("mount simulation: fps must be positive");
}

}  // namespace

MountTrajectory simulateRigid(std::span<const RigidTransformd> anchors, const MountSpec& spec,
                              double fps) {
  checkCommon(anchors, fps);
  MountTrajectory out;
  out.fps = fps;
  out.poses.reserve(anchors.size());
  for (const auto& anchor : anchors) out.poses.push_back(anchor * spec.offset);
  return out;
}

MountTrajectory simulateSpring(std::span<const RigidTransformd> anchors, const MountSpec& spec,
                               double fps, int substeps, const SpringState* initial,
                               std::vector<SpringState>* stateLog) {
  checkCommon(anchors, fps);
  if (substeps < 1) throw InvalidArgument("simulateSpring: substeps must be >= 1");
  spec.spring.validate();

  const double m = spec.spring.mass;
  const double k = spec.spring.stiffness;
  const double c = spec.spring.damping;
  const double dt = 1.0 / (fps * double(substeps));
  const double dtMax = 2.0 * std::sqrt(m / k);
  if (dt > dtMax)
    throw StabilityError("simulateSpring: step " + std::to_string(dt) +
                         " s exceeds the stable limit " + std::to_string(dtMax) +
                         " s for this stiffness; increase substeps");

  // Rigid targets per frame.
  std::vector<RigidTransformd> target;
  target.reserve(anchors.size());
  for (const auto& anchor : anchors) target.push_back(anchor * spec.offset);

  SpringState st;
  if (initial) {
    st = *initial;
    st.rotation = sanitizeRotation(st.rotation);
  } else {
    st.position = target.front().translation;
    st.rotation = target.front().rotation;
  }

  MountTrajectory out;
  out.fps = fps;
  out.poses.reserve(anchors.size());
  out.poses.push_back({st.rotation, st.position});
  if (stateLog) stateLog->push_back(st);

  // Exact per-substep decay factor of the rotational error angle.
  const double rotGain =
      spec.spring.springRotation
          ? 1.0 - std::exp(-(spec.spring.rotStiffness / spec.spring.rotDamping) * dt)
          : 0.0;

  for (size_t i = 1; i < target.size(); ++i) {
    const RigidTransformd& prev = target[i - 1];
    const RigidTransformd& next = target[i];
    // The damper sits in the linkage, so it acts on the velocity relative to
    // the moving target; a constant-velocity anchor is followed without lag.
    const Eigen::Vector3d tvel = (next.translation - prev.translation) * fps;
    for (int s = 1; s <= substeps; ++s) {
      const double u = double(s) / double(substeps);
      const Eigen::Vector3d tpos = (1.0 - u) * prev.translation + u * next.translation;
      const Eigen::Vector3d accel = (-k * (st.position - tpos) - c * (st.velocity - tvel)) / m;
      st.velocity += accel * dt;
      st.position += st.velocity * dt;
      if (spec.spring.springRotation) {
        const Eigen::Matrix3d trot = slerpRotation(prev.rotation, next.rotation, u);
        const Eigen::Vector3d err = logRotation(st.rotation * trot.transpose());
        st.rotation = expRotation(-rotGain * err) * st.rotation;
      }
    }
    if (spec.spring.springRotation)
      st.rotation = nearestRotation(st.rotation);  // shed accumulated drift
    else
      st.rotation = next.rotation;
    out.poses.push_back({st.rotation, st.position});
    if (stateLog) stateLog->push_back(st);
  }
  return out;
}

TrajectoryError trajectoryError(const MountTrajectory& a, const MountTrajectory& b) {
  if (a.poses.size() != b.poses.size())
    throw InvalidArgument("trajectoryError: length mismatch (" +
                          std::to_string(a.poses.size()) + " vs " +
                          std::to_string(b.poses.size()) + ")");
  if (a.poses.empty()) throw InvalidArgument("trajectoryError: empty trajectories");
  TrajectoryError e;
  for (size_t i = 0; i < a.poses.size(); ++i) {
    e.position += (a.poses[i].translation - b.poses[i].translation).norm();
    e.rotation += (a.poses[i].rotation * b.poses[i].rotation.transpose() -
                   Eigen::Matrix3d::Identity())
                      .norm();
  }
  e.position /= double(a.poses.size());
  e.rotation /= double(a.poses.size());
  return e;
}

}  // namespace egorig
