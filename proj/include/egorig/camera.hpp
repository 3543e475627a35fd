#pragma once

// Pinhole camera model. Camera frame: x right, y down, z forward (optical
// axis). Pixel (x, y) spans [x, x+1) x [y, y+1) in continuous image
// coordinates, so its center sits at (x+0.5, y+0.5); a point on the optical
// axis projects to (width/2, height/2) and a point at the horizontal
// field-of-view edge lands on x = 0 or x = width.

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <optional>

#include "egorig/error.hpp"
#include "egorig/rigid_transform.hpp"

namespace egorig {

struct CameraIntrinsics {
  double fovDegrees = 118.0;  // horizontal field of view
  int width = 640;
  int height = 360;
  double nearClip = 0.05;  // meters along the optical axis

  void validate() const {
    if (!(fovDegrees > 0.0) || !(fovDegrees < 180.0))
      throw InvalidArgument("camera: fov must lie in (0, 180) degrees");
    if (width < 1 || height < 1) throw InvalidArgument("camera: resolution must be positive");
    if (!(nearClip >= 0.0) || !std::isfinite(nearClip))
      throw InvalidArgument("camera: nearClip must be non-negative");
  }

  double fovRadians() const { return fovDegrees * std::numbers::pi / 180.0; }
  double focalLength() const { return (width / 2.0) / std::tan(fovRadians() / 2.0); }
  Eigen::Vector2d principalPoint() const { return {width / 2.0, height / 2.0}; }

  // Unnormalized camera-frame ray direction through continuous image
  // coordinates (u, v); its z component is 1, so the ray parameter equals
  // metric depth along the optical axis.
  Eigen::Vector3d rayDirection(double u, double v) const {
    const double f = focalLength();
    return {(u - width / 2.0) / f, (v - height / 2.0) / f, 1.0};
  }
};

// Projects a world point through a camera posed at `cameraPose` (camera-to-
// world). Returns continuous image coordinates, or nullopt when the point
// lies at or behind the near plane.
inline std::optional<Eigen::Vector2d> projectPoint(const CameraIntrinsics& cam,
                                                   const RigidTransformd& cameraPose,
                                                   const Eigen::Vector3d& worldPoint) {
  cam.validate();
  const Eigen::Vector3d pc = cameraPose.inverse() * worldPoint;
  if (!(pc.z() > cam.nearClip)) return std::nullopt;
  const double f = cam.focalLength();
  return Eigen::Vector2d(f * pc.x() / pc.z() + cam.width / 2.0,
                         f * pc.y() / pc.z() + cam.height / 2.0);
}

}  // namespace egorig
