#pragma once

// Rotation algebra used throughout the library. Rotations live as plain 3x3
// matrices; quaternions appear only inside spherical interpolation. The
// six-number encoding keeps the first two matrix columns (column-major) and
// decodes with Gram-Schmidt, which makes the decode exact on clean encodings
// and continuous everywhere else.

#include <Eigen/Dense>
#include <cmath>

#include "egorig/error.hpp"

namespace egorig {

// Tolerances shared by the sanitizers below.
inline constexpr double kOrthonormalTol = 1e-6;   // Frobenius norm of M^T M - I
inline constexpr double kDegenerateTol = 1e-8;    // column / residual norms
inline constexpr double kZeroQuaternionTol = 1e-8;

// Frobenius deviation of M^T M from the identity.
template <typename Derived>
typename Derived::Scalar orthonormalityDeviation(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  using Mat3 = Eigen::Matrix3<S>;
  const Mat3 g = m.transpose() * m;
  return (g - Mat3::Identity()).norm();
}

// Closest rotation in the Frobenius sense (polar factor via SVD, determinant
// forced positive).
template <typename Derived>
Eigen::Matrix3<typename Derived::Scalar> nearestRotation(const Eigen::MatrixBase<Derived>& m) {
  using S = typename Derived::Scalar;
  using Mat3 = Eigen::Matrix3<S>;
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < S(0)) {
    Eigen::Vector3<S> flip(S(1), S(1), S(-1));
    r = svd.matrixU() * flip.asDiagonal() * svd.matrixV().transpose();
  }
  return r;
}

// Checks that `m` is a rotation up to `tol` and returns the renormalized
// (polar) factor. Matrices beyond tolerance, or with a reflection in them,
// are rejected.
template <typename Derived>
Eigen::Matrix3<typename Derived::Scalar> sanitizeRotation(
    const Eigen::MatrixBase<Derived>& m,
    typename Derived::Scalar tol = typename Derived::Scalar(kOrthonormalTol)) {
  using S = typename Derived::Scalar;
  if (!m.allFinite()) throw InvalidArgument("invalid rotation: non-finite entries");
  const S dev = orthonormalityDeviation(m);
  if (dev > tol) throw InvalidArgument("invalid rotation: orthonormality deviation " + std::to_string(double(dev)));
  if (m.determinant() < S(0)) throw InvalidArgument("invalid rotation: negative determinant");
  return nearestRotation(m);
}

// First two columns of the (renormalized) rotation, stacked column-major:
// (r00, r10, r20, r01, r11, r21).
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, 6> rotationTo6d(const Eigen::MatrixBase<Derived>& r) {
  using S = typename Derived::Scalar;
  const Eigen::Matrix3<S> clean = sanitizeRotation(r);
  Eigen::Vector<S, 6> v;
  v.template head<3>() = clean.col(0);
  v.template tail<3>() = clean.col(1);
  return v;
}

// Gram-Schmidt decode of the six-number encoding. Throws on near-zero or
// near-parallel input columns.
template <typename Derived>
Eigen::Matrix3<typename Derived::Scalar> rotationFrom6d(const Eigen::MatrixBase<Derived>& v) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 6);
  using S = typename Derived::Scalar;
  using Vec3 = Eigen::Vector3<S>;
  if (!v.allFinite()) throw InvalidArgument("degenerate 6d encoding: non-finite entries");
  const Vec3 a = v.template head<3>();
  const Vec3 b = v.template tail<3>();
  const S na = a.norm();
  if (na <= S(kDegenerateTol)) throw InvalidArgument("degenerate 6d encoding: first column near zero");
  const Vec3 c0 = a / na;
  const Vec3 u = b - c0.dot(b) * c0;
  const S nu = u.norm();
  if (nu <= S(kDegenerateTol)) throw InvalidArgument("degenerate 6d encoding: columns near parallel");
  const Vec3 c1 = u / nu;
  Eigen::Matrix3<S> r;
  r.col(0) = c0;
  r.col(1) = c1;
  r.col(2) = c0.cross(c1);
  return r;
}

// Axis-angle logarithm of a rotation matrix (vector with norm = angle).
template <typename Derived>
Eigen::Vector3<typename Derived::Scalar> logRotation(const Eigen::MatrixBase<Derived>& r) {
  using S = typename Derived::Scalar;
  const Eigen::Matrix3<S> m = r;
  const Eigen::AngleAxis<S> aa(m);
  return aa.angle() * aa.axis();
}

// Rodrigues exponential of an axis-angle vector.
template <typename Derived>
Eigen::Matrix3<typename Derived::Scalar> expRotation(const Eigen::MatrixBase<Derived>& w) {
  EIGEN_STATIC_ASSERT_VECTOR_SPECIFIC_SIZE(Derived, 3);
  using S = typename Derived::Scalar;
  using Mat3 = Eigen::Matrix3<S>;
  const S angle = w.norm();
  if (angle < S(1e-12)) {
    Mat3 skew;
    skew << S(0), -w.z(), w.y(), w.z(), S(0), -w.x(), -w.y(), w.x(), S(0);
    return Mat3::Identity() + skew;
  }
  return Eigen::AngleAxis<S>(angle, Eigen::Vector3<S>(w / angle)).toRotationMatrix();
}

// Geodesic angle between two rotations, in radians within [0, pi].
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar geodesicAngle(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
  using S = typename DerivedA::Scalar;
  const S tr = (a.transpose() * b).trace();
  const S c = std::clamp((tr - S(1)) / S(2), S(-1), S(1));
  return std::acos(c);
}

// Spherical interpolation with hemisphere correction: the shorter of the two
// great-circle arcs is always taken. Falls back to normalized linear
// interpolation when the inputs are within ~1e-12 of parallel, which stays
// inside any reasonable constant-speed tolerance. Inputs need not be unit
// length, but near-zero quaternions are rejected.
template <typename S>
Eigen::Quaternion<S> slerp(const Eigen::Quaternion<S>& qa, const Eigen::Quaternion<S>& qb, S t) {
  const S normA = qa.norm();
  const S normB = qb.norm();
  if (normA <= S(kZeroQuaternionTol) || normB <= S(kZeroQuaternionTol))
    throw InvalidArgument("slerp: zero-length quaternion");
  Eigen::Vector4<S> a = qa.coeffs() / normA;
  Eigen::Vector4<S> b = qb.coeffs() / normB;
  S d = a.dot(b);
  if (d < S(0)) {
    b = -b;
    d = -d;
  }
  Eigen::Quaternion<S> out;
  if (d > S(1) - S(1e-12)) {
    out.coeffs() = (S(1) - t) * a + t * b;
    out.normalize();
    return out;
  }
  const S omega = std::acos(std::clamp(d, S(-1), S(1)));
  const S so = std::sin(omega);
  out.coeffs() = (std::sin((S(1) - t) * omega) * a + std::sin(t * omega) * b) / so;
  return out;
}

// slerp on rotation matrices; quaternions are an implementation detail here.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix3<typename DerivedA::Scalar> slerpRotation(const Eigen::MatrixBase<DerivedA>& ra,
                                                        const Eigen::MatrixBase<DerivedB>& rb,
                                                        typename DerivedA::Scalar t) {
  using S = typename DerivedA::Scalar;
  const Eigen::Matrix3<S> ma = ra;
  const Eigen::Matrix3<S> mb = rb;
  const Eigen::Quaternion<S> qa(ma);
  const Eigen::Quaternion<S> qb(mb);
  return slerp(qa, qb, t).toRotationMatrix();
}

}  // namespace egorig
