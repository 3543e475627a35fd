#pragma once

// SE(3) element as an explicit rotation + translation pair. Kept deliberately
// plain: composition and inverse are the only algebra the simulator needs,
// and a struct of two Eigen blocks stays cheap to copy and store in vectors.

#include <Eigen/Dense>

namespace egorig {

template <typename S>
struct RigidTransform {
  Eigen::Matrix3<S> rotation = Eigen::Matrix3<S>::Identity();
  Eigen::Vector3<S> translation = Eigen::Vector3<S>::Zero();

  static RigidTransform Identity() { return {}; }

  // this ∘ other: apply `other` first, then this.
  RigidTransform operator*(const RigidTransform& other) const {
    return {rotation * other.rotation, rotation * other.translation + translation};
  }

  Eigen::Vector3<S> operator*(const Eigen::Vector3<S>& p) const {
    return rotation * p + translation;
  }

  RigidTransform inverse() const {
    RigidTransform inv;
    inv.rotation = rotation.transpose();
    inv.translation = -(inv.rotation * translation);
    return inv;
  }

  Eigen::Matrix4<S> matrix() const {
    Eigen::Matrix4<S> m = Eigen::Matrix4<S>::Identity();
    m.template topLeftCorner<3, 3>() = rotation;
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  bool isApprox(const RigidTransform& other, S tol) const {
    return (rotation - other.rotation).norm() <= tol &&
           (translation - other.translation).norm() <= tol;
  }
};

using RigidTransformd = RigidTransform<double>;
using RigidTransformf = RigidTransform<float>;

}  // namespace egorig
