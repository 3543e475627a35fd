#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "egorig/error.hpp"
#include "egorig/mount.hpp"
#include "egorig/rotation.hpp"
#include "test_support.hpp"

using namespace egorig;
using egotest::randomTransform;
using egotest::rotZ;

namespace {

constexpr double kPi = std::numbers::pi;

// Closed-form underdamped step response: displacement x0 from a static
// target, released at rest.
double dampedResponse(double x0, double m, double k, double c, double t) {
  const double w0 = std::sqrt(k / m);
  const double zeta = c / (2.0 * std::sqrt(k * m));
  const double wd = w0 * std::sqrt(1.0 - zeta * zeta);
  return x0 * std::exp(-zeta * w0 * t) *
         (std::cos(wd * t) + zeta * w0 / wd * std::sin(wd * t));
}

std::vector<RigidTransformd> staticAnchors(int n) {
  return std::vector<RigidTransformd>(static_cast<size_t>(n), RigidTransformd::Identity());
}

MountSpec springSpec() {
  MountSpec spec;
  spec.kind = MountKind::Spring;
  return spec;
}

}  // namespace

TEST_SUITE("mounts") {

TEST_CASE("rigid mount composes anchor and offset exactly") {
  std::mt19937_64 rng(307);
  std::vector<RigidTransformd> anchors;
  for (int i = 0; i < 25; ++i) anchors.push_back(randomTransform(rng, 2.0));
  MountSpec spec;
  spec.offset = randomTransform(rng, 0.3);
  const MountTrajectory traj = simulateRigid(anchors, spec, 30.0);
  REQUIRE(traj.frameCount() == 25);
  CHECK(traj.fps == 30.0);
  for (int i = 0; i < 25; ++i) {
    const RigidTransformd expected = anchors[static_cast<size_t>(i)] * spec.offset;
    CHECK(traj.poses[static_cast<size_t>(i)].isApprox(expected, 1e-15));
  }
}

TEST_CASE("spring step response matches the damped-oscillator closed form") {
  const double fps = 100.0;
  const int frames = 101;  // one second
  const MountSpec spec = springSpec();  // defaults m=0.1, k=200, c=4

  SpringState init;
  init.position = Eigen::Vector3d(0.1, 0, 0);  // 10 cm displacement, at rest
  const MountTrajectory traj =
      simulateSpring(staticAnchors(frames), spec, fps, 50, &init);

  REQUIRE(traj.frameCount() == frames);
  for (int i = 0; i < frames; ++i) {
    const double t = i / fps;
    const double expected = dampedResponse(0.1, spec.spring.mass, spec.spring.stiffness,
                                           spec.spring.damping, t);
    CHECK(traj.poses[static_cast<size_t>(i)].translation.x() ==
          doctest::Approx(expected).epsilon(0.02).scale(0.1));
    CHECK(std::abs(traj.poses[static_cast<size_t>(i)].translation.y()) < 1e-12);
  }
}

TEST_CASE("spring energy never increases against a static target") {
  const double fps = 100.0;
  const MountSpec spec = springSpec();
  SpringState init;
  init.position = Eigen::Vector3d(0.08, -0.02, 0.05);
  init.velocity = Eigen::Vector3d(0.4, 0.2, -0.6);
  init.rotation = rotZ(0.5);

  std::vector<SpringState> log;
  simulateSpring(staticAnchors(200), spec, fps, 40, &init, &log);
  REQUIRE(log.size() == 200);

  auto energy = [&](const SpringState& st) {
    const double kinetic = 0.5 * spec.spring.mass * st.velocity.squaredNorm();
    const double potential = 0.5 * spec.spring.stiffness * st.position.squaredNorm();
    const double angle = logRotation(st.rotation).norm();
    const double rotational = 0.5 * spec.spring.rotStiffness * angle * angle;
    return kinetic + potential + rotational;
  };
  const double e0 = energy(log[0]);
  double prev = e0;
  for (size_t i = 1; i < log.size(); ++i) {
    const double e = energy(log[i]);
    CHECK(e <= prev + 1e-12 * e0);
    prev = e;
  }
  CHECK(prev < 1e-3 * e0);  // and it actually decays
}

TEST_CASE("stiff spring converges to the rigid trajectory") {
  // Slow sinusoidal anchor sweep, very stiff spring.
  const double fps = 100.0;
  const int frames = 200;
  std::vector<RigidTransformd> anchors;
  for (int i = 0; i < frames; ++i) {
    const double t = i / fps;
    RigidTransformd a;
    a.translation = Eigen::Vector3d(0.08 * std::sin(4.0 * kPi * t), 0, 0);
    a.rotation = rotZ(0.2 * std::sin(2.0 * kPi * t));
    anchors.push_back(a);
  }
  MountSpec spec = springSpec();
  spec.spring.stiffness = 1e6;
  spec.spring.rotStiffness = 500.0;  // fast rotational pull as well

  const MountTrajectory rigid = simulateRigid(anchors, spec, fps);
  const MountTrajectory spring = simulateSpring(anchors, spec, fps, 40);
  const TrajectoryError err = trajectoryError(spring, rigid);
  CHECK(err.position < 1e-3);
  CHECK(err.rotation < 2e-2);
}

TEST_CASE("unstable step size is rejected with a substep hint") {
  MountSpec spec = springSpec();
  spec.spring.stiffness = 1e6;
  CHECK_THROWS_WITH_AS(simulateSpring(staticAnchors(5), spec, 30.0, 1),
                       doctest::Contains("substeps"), StabilityError);
  // enough substeps brings it back into the stable region
  CHECK_NOTHROW(simulateSpring(staticAnchors(5), spec, 30.0, 60));
}

TEST_CASE("rotational error decays exponentially under the first-order pull") {
  const double fps = 50.0;
  const int frames = 26;  // half a second
  MountSpec spec = springSpec();
  const double rate = spec.spring.rotStiffness / spec.spring.rotDamping;  // 10 1/s

  SpringState init;
  init.rotation = rotZ(0.8);
  const MountTrajectory traj = simulateSpring(staticAnchors(frames), spec, fps, 20, &init);
  for (int i = 0; i < frames; ++i) {
    const double t = i / fps;
    const double expected = 0.8 * std::exp(-rate * t);
    const double angle = logRotation(traj.poses[static_cast<size_t>(i)].rotation).norm();
    CHECK(angle == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("springRotation=false follows the target orientation rigidly") {
  std::mt19937_64 rng(311);
  std::vector<RigidTransformd> anchors;
  for (int i = 0; i < 20; ++i) anchors.push_back(randomTransform(rng, 1.0));
  MountSpec spec = springSpec();
  spec.spring.springRotation = false;
  const MountTrajectory traj = simulateSpring(anchors, spec, 30.0, 20);
  const MountTrajectory rigid = simulateRigid(anchors, spec, 30.0);
  for (int i = 1; i < 20; ++i)
    CHECK((traj.poses[static_cast<size_t>(i)].rotation -
           rigid.poses[static_cast<size_t>(i)].rotation)
              .norm() == 0.0);
}

TEST_CASE("spring starts at the rigid pose unless an initial state is given") {
  std::mt19937_64 rng(313);
  std::vector<RigidTransformd> anchors;
  for (int i = 0; i < 6; ++i) anchors.push_back(randomTransform(rng, 1.0));
  MountSpec spec = springSpec();
  spec.offset = randomTransform(rng, 0.2);

  const MountTrajectory traj = simulateSpring(anchors, spec, 30.0, 30);
  const RigidTransformd rigid0 = anchors[0] * spec.offset;
  CHECK(traj.poses[0].isApprox(rigid0, 1e-12));

  SpringState init;
  init.position = Eigen::Vector3d(9, 9, 9);
  init.rotation = rotZ(1.0);
  const MountTrajectory traj2 = simulateSpring(anchors, spec, 30.0, 30, &init);
  CHECK((traj2.poses[0].translation - init.position).norm() == 0.0);
  CHECK((traj2.poses[0].rotation - init.rotation).norm() < 1e-12);
}

TEST_CASE("spring output rotations stay orthonormal over long runs") {
  std::mt19937_64 rng(317);
  std::vector<RigidTransformd> anchors;
  RigidTransformd cur = RigidTransformd::Identity();
  for (int i = 0; i < 600; ++i) {
    cur.rotation = cur.rotation * rotZ(0.02) * egotest::rotY(0.01);
    cur.translation += Eigen::Vector3d(0.01, 0, 0);
    anchors.push_back(cur);
  }
  const MountTrajectory traj = simulateSpring(anchors, springSpec(), 60.0, 20);
  for (const auto& pose : traj.poses) CHECK(orthonormalityDeviation(pose.rotation) < 1e-9);
}

TEST_CASE("parameter validation") {
  MountSpec spec = springSpec();
  spec.spring.mass = 0.0;
  CHECK_THROWS_AS(simulateSpring(staticAnchors(3), spec, 30.0, 10), InvalidArgument);
  spec = springSpec();
  spec.spring.stiffness = -1.0;
  CHECK_THROWS_AS(simulateSpring(staticAnchors(3), spec, 30.0, 10), InvalidArgument);
  spec = springSpec();
  CHECK_THROWS_AS(simulateSpring(staticAnchors(3), spec, 30.0, 0), InvalidArgument);
  CHECK_THROWS_AS(simulateSpring({}, spec, 30.0, 10), InvalidArgument);
  CHECK_THROWS_AS(simulateSpring(staticAnchors(3), spec, 0.0, 10), InvalidArgument);
}

TEST_CASE("trajectory error reports mean deviations") {
  MountTrajectory a, b;
  a.fps = b.fps = 30.0;
  for (int i = 0; i < 4; ++i) {
    a.poses.push_back(RigidTransformd::Identity());
    RigidTransformd shifted;
    shifted.translation = Eigen::Vector3d(0.3, 0, 0);
    shifted.rotation = rotZ(kPi / 2);
    b.poses.push_back(shifted);
  }
  const TrajectoryError err = trajectoryError(a, b);
  CHECK(err.position == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(err.rotation == doctest::Approx(2.0).epsilon(1e-12));  // ||Rz(90)-I||_F

  CHECK(trajectoryError(a, a).position == 0.0);
  MountTrajectory c = a;
  c.poses.pop_back();
  CHECK_THROWS_AS(trajectoryError(a, c), InvalidArgument);
}

}  // TEST_SUITE
