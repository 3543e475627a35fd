#pragma once

// Analytic scene primitives and ray intersection. Every primitive carries a
// semantic id >= 1; id 0 is reserved for background in the rendered label
// buffer.

#include <Eigen/Dense>
#include <optional>
#include <variant>
#include <vector>

#include "egorig/error.hpp"

namespace egorig {

struct Sphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
};

struct Capsule {
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d p1 = Eigen::Vector3d::UnitZ();
  double radius = 0.1;
};

struct Box {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d halfExtents = Eigen::Vector3d::Ones();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // box-to-world
};

struct Plane {
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // unit length, two-sided
};

struct ScenePrimitive {
  std::variant<Sphere, Capsule, Box, Plane> shape;
  int semanticId = 1;

  void validate() const;
};

struct RayHit {
  double t = 0;                 // ray parameter (metric depth for z=1 rays)
  Eigen::Vector3d normal;       // world frame, unit, facing the ray origin
  int semanticId = 0;
};

// Nearest intersection with t > tMin, or nullopt. `dir` need not be
// normalized; t is measured in units of |dir|.
std::optional<RayHit> intersectRay(const ScenePrimitive& prim, const Eigen::Vector3d& origin,
                                   const Eigen::Vector3d& dir, double tMin);

}  // namespace egorig
