#include "egorig/scene.hpp"

#include <cmath>

namespace egorig {

namespace {

constexpr double kParallelEps = 1e-12;

// Smallest quadratic root with t > tMin for a*t^2 + b*t + c = 0.
std::optional<double> quadraticRoot(double a, double b, double c, double tMin) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = (-b - sq) / (2.0 * a);
  if (t0 > tMin) return t0;
  const double t1 = (-b + sq) / (2.0 * a);
  if (t1 > tMin) return t1;
  return std::nullopt;
}

std::optional<RayHit> hitSphere(const Sphere& s, const Eigen::Vector3d& o,
                                const Eigen::Vector3d& d, double tMin) {
  const Eigen::Vector3d m = o - s.center;
  const double a = d.squaredNorm();
  const double b = 2.0 * m.dot(d);
  const double c = m.squaredNorm() - s.radius * s.radius;
  const auto t = quadraticRoot(a, b, c, tMin);
  if (!t) return std::nullopt;
  RayHit hit;
  hit.t = *t;
  hit.normal = (o + *t * d - s.center) / s.radius;
  return hit;
}

std::optional<RayHit> hitCapsule(const Capsule& cap, const Eigen::Vector3d& o,
                                 const Eigen::Vector3d& d, double tMin) {
  const Eigen::Vector3d axis = cap.p1 - cap.p0;
  const double len = axis.norm();
  if (len < kParallelEps) return hitSphere({cap.p0, cap.radius}, o, d, tMin);
  const Eigen::Vector3d u = axis / len;

  std::optional<RayHit> best;
  auto consider = [&](const std::optional<RayHit>& h) {
    if (h && (!best || h->t < best->t)) best = h;
  };

  // Infinite cylinder around the axis, restricted to the segment.
  const Eigen::Vector3d m = o - cap.p0;
  const Eigen::Vector3d dPerp = d - d.dot(u) * u;
  const Eigen::Vector3d mPerp = m - m.dot(u) * u;
  const double a = dPerp.squaredNorm();
  if (a > kParallelEps) {
    const double b = 2.0 * mPerp.dot(dPerp);
    const double c = mPerp.squaredNorm() - cap.radius * cap.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (const double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
        if (t <= tMin) continue;
        const double s = (m + t * d).dot(u);
        if (s < 0.0 || s > len) continue;
        RayHit hit;
        hit.t = t;
        hit.normal = (o + t * d - (cap.p0 + s * u)) / cap.radius;
        consider(hit);
        break;  // smaller valid root wins; the larger cannot beat it
      }
    }
  }
  consider(hitSphere({cap.p0, cap.radius}, o, d, tMin));
  consider(hitSphere({cap.p1, cap.radius}, o, d, tMin));
  return best;
}

std::optional<RayHit> hitBox(const Box& box, const Eigen::Vector3d& o, const Eigen::Vector3d& d,
                             double tMin) {
  // Slab test in the box frame.
  const Eigen::Vector3d ob = box.rotation.transpose() * (o - box.center);
  const Eigen::Vector3d db = box.rotation.transpose() * d;
  double tNear = -std::numeric_limits<double>::infinity();
  double tFar = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const double h = box.halfExtents[i];
    if (std::abs(db[i]) < kParallelEps) {
      if (std::abs(ob[i]) > h) return std::nullopt;
      continue;
    }
    double t1 = (-h - ob[i]) / db[i];
    double t2 = (h - ob[i]) / db[i];
    if (t1 > t2) std::swap(t1, t2);
    tNear = std::max(tNear, t1);
    tFar = std::min(tFar, t2);
    if (tNear > tFar) return std::nullopt;
  }
  double t = tNear;
  if (!(t > tMin)) t = tFar;  // origin inside the box, or near plane cuts entry
  if (!(t > tMin) || !std::isfinite(t)) return std::nullopt;

  const Eigen::Vector3d pb = ob + t * db;
  int axis = 0;
  double bestRatio = -1.0;
  for (int i = 0; i < 3; ++i) {
    const double ratio = std::abs(pb[i]) / box.halfExtents[i];
    if (ratio > bestRatio) {
      bestRatio = ratio;
      axis = i;
    }
  }
  Eigen::Vector3d nb = Eigen::Vector3d::Zero();
  nb[axis] = pb[axis] >= 0.0 ? 1.0 : -1.0;
  RayHit hit;
  hit.t = t;
  hit.normal = box.rotation * nb;
  return hit;
}

std::optional<RayHit> hitPlane(const Plane& plane, const Eigen::Vector3d& o,
                               const Eigen::Vector3d& d, double tMin) {
  const double denom = plane.normal.dot(d);
  if (std::abs(denom) < kParallelEps) return std::nullopt;
  const double t = plane.normal.dot(plane.point - o) / denom;
  if (!(t > tMin)) return std::nullopt;
  RayHit hit;
  hit.t = t;
  hit.normal = plane.normal;
  return hit;
}

}  // namespace

void ScenePrimitive::validate() const {
  if (semanticId < 1 || semanticId > 255)
    throw InvalidArgument("primitive: semantic id must lie in [1, 255]");
  std::visit(
      [](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Sphere>) {
          if (!(shape.radius > 0)) throw InvalidArgument("sphere: radius must be positive");
          if (!shape.center.allFinite()) throw InvalidArgument("sphere: non-finite center");
        } else if constexpr (std::is_same_v<T, Capsule>) {
          if (!(shape.radius > 0)) throw InvalidArgument("capsule: radius must be positive");
          if (!shape.p0.allFinite() || !shape.p1.allFinite())
            throw InvalidArgument("capsule: non-finite endpoints");
        } else if constexpr (std::is_same_v<T, Box>) {
          if (!(shape.halfExtents.minCoeff() > 0))
            throw InvalidArgument("box: half extents must be positive");
          if (!shape.center.allFinite() || !shape.rotation.allFinite())
            throw InvalidArgument("box: non-finite pose");
        } else {
          if (std::abs(shape.normal.norm() - 1.0) > 1e-6)
            throw InvalidArgument("plane: normal must be unit length");
          if (!shape.point.allFinite()) throw InvalidArgument("plane: non-finite point");
        }
      },
      shape);
}

std::optional<RayHit> intersectRay(const ScenePrimitive& prim, const Eigen::Vector3d& origin,
                                   const Eigen::Vector3d& dir, double tMin) {
  std::optional<RayHit> hit = std::visit(
      [&](const auto& shape) -> std::optional<RayHit> {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Sphere>) return hitSphere(shape, origin, dir, tMin);
        else if constexpr (std::is_same_v<T, Capsule>) return hitCapsule(shape, origin, dir, tMin);
        else if constexpr (std::is_same_v<T, Box>) return hitBox(shape, origin, dir, tMin);
        else return hitPlane(shape, origin, dir, tMin);
      },
      prim.shape);
  if (!hit) return std::nullopt;
  // Visible surfaces face the viewer.
  if (hit->normal.dot(dir) > 0.0) hit->normal = -hit->normal;
  hit->semanticId = prim.semanticId;
  return hit;
}

}  // namespace egorig
