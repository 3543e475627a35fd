#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>
#include <random>
#include <sstream>

#include "egorig/error.hpp"
#include "egorig/skeleton.hpp"
#include "test_support.hpp"

using namespace egorig;
using egotest::chainSkeleton;
using egotest::randomRotation;
using egotest::randomTransform;
using egotest::rotZ;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: resolve the kinematic chain with explicit 4x4
// homogeneous matrix products.
std::vector<Eigen::Matrix4d> fkOracle(const Skeletond& skeleton, const JointPosed& pose) {
  std::vector<Eigen::Matrix4d> global(skeleton.joints.size());
  for (size_t i = 0; i < skeleton.joints.size(); ++i) {
    Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
    local.topLeftCorner<3, 3>() = pose.localRotations[i];
    local.topRightCorner<3, 1>() =
        skeleton.boneScales[static_cast<long>(i)] * skeleton.joints[i].restOffset;
    Eigen::Matrix4d parent = pose.root.matrix();
    if (skeleton.joints[i].parent >= 0) parent = global[skeleton.joints[i].parent];
    global[i] = parent * local;
  }
  return global;
}

}  // namespace

TEST_SUITE("kinematics") {

TEST_CASE("two-joint chain with a quarter turn at the root") {
  const Skeletond skeleton = chainSkeleton(2);
  JointPosed pose = JointPosed::Identity(2);
  pose.localRotations[0] = rotZ(kPi / 2);
  const auto global = forwardKinematics(skeleton, pose);
  CHECK((global[0].translation - Eigen::Vector3d::Zero()).norm() < 1e-15);
  CHECK((global[1].translation - Eigen::Vector3d(0, 1, 0)).norm() < 1e-15);
  CHECK((global[1].rotation - rotZ(kPi / 2)).norm() < 1e-15);
}

TEST_CASE("long chain matches the homogeneous-matrix oracle") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> scaleDist(0.5, 2.0);
  Skeletond skeleton = chainSkeleton(20);
  for (int i = 0; i < 20; ++i) {
    skeleton.boneScales[i] = scaleDist(rng);
    if (i > 0) skeleton.joints[i].restOffset = egotest::randomVector(rng, 1.0);
  }
  for (int trial = 0; trial < 50; ++trial) {
    JointPosed pose = JointPosed::Identity(20);
    pose.root = randomTransform(rng, 2.0);
    for (auto& r : pose.localRotations) r = randomRotation(rng);
    const auto fast = forwardKinematics(skeleton, pose);
    const auto oracle = fkOracle(skeleton, pose);
    for (int j = 0; j < 20; ++j)
      CHECK((fast[j].matrix() - oracle[j]).norm() < 1e-12);
  }
}

TEST_CASE("branching: siblings are independent") {
  Skeletond s;
  s.joints.push_back({"root", -1, Eigen::Vector3d::Zero()});
  s.joints.push_back({"left", 0, Eigen::Vector3d(0, 1, 0)});
  s.joints.push_back({"right", 0, Eigen::Vector3d(0, -1, 0)});
  s.boneScales = Eigen::VectorXd::Ones(3);
  JointPosed pose = JointPosed::Identity(3);
  const auto before = forwardKinematics(s, pose);
  pose.localRotations[1] = rotZ(0.7);
  const auto after = forwardKinematics(s, pose);
  CHECK((before[2].translation - after[2].translation).norm() == 0.0);
  CHECK((before[2].rotation - after[2].rotation).norm() == 0.0);
  CHECK((before[1].rotation - after[1].rotation).norm() > 0.1);
}

TEST_CASE("bone scale stretches the rest offset only") {
  Skeletond s = chainSkeleton(2);
  JointPosed pose = JointPosed::Identity(2);
  const auto base = forwardKinematics(s, pose);
  s.boneScales[1] = 2.5;
  const auto scaled = forwardKinematics(s, pose);
  CHECK((scaled[1].translation - Eigen::Vector3d(2.5, 0, 0)).norm() < 1e-15);
  CHECK((base[0].translation - scaled[0].translation).norm() == 0.0);
}

TEST_CASE("root transform moves the whole skeleton rigidly") {
  std::mt19937_64 rng(73);
  Skeletond s = chainSkeleton(5);
  JointPosed pose = JointPosed::Identity(5);
  for (auto& r : pose.localRotations) r = randomRotation(rng);
  const auto base = forwardKinematics(s, pose);
  const RigidTransformd move = randomTransform(rng, 3.0);
  pose.root = move;
  const auto moved = forwardKinematics(s, pose);
  for (int j = 0; j < 5; ++j) {
    const RigidTransformd expected = move * base[static_cast<size_t>(j)];
    CHECK(moved[static_cast<size_t>(j)].isApprox(expected, 1e-12));
  }
}

TEST_CASE("pose size mismatch is rejected") {
  const Skeletond s = chainSkeleton(3);
  const JointPosed pose = JointPosed::Identity(2);
  CHECK_THROWS_AS(forwardKinematics(s, pose), InvalidArgument);
}

TEST_CASE("accumulate and relativize invert each other") {
  std::mt19937_64 rng(79);
  std::vector<RigidTransformd> steps;
  for (int i = 0; i < 40; ++i) steps.push_back(randomTransform(rng));
  const RigidTransformd start = randomTransform(rng);
  const auto global = accumulateRoot<double>(steps, start);
  REQUIRE(global.size() == steps.size());
  const auto back = relativizeRoot<double>(global, start);
  for (size_t i = 0; i < steps.size(); ++i) CHECK(back[i].isApprox(steps[i], 1e-12));
}

TEST_CASE("accumulating identical steps composes a power") {
  const RigidTransformd step{rotZ(0.1), Eigen::Vector3d(0.2, 0, 0)};
  std::vector<RigidTransformd> steps(10, step);
  const auto global = accumulateRoot<double>(steps, RigidTransformd::Identity());
  RigidTransformd expected = RigidTransformd::Identity();
  for (int i = 0; i < 10; ++i) expected = expected * step;
  CHECK(global.back().isApprox(expected, 1e-12));
}

TEST_CASE("skeleton text format round trips") {
  std::istringstream in(
      "# test rig\n"
      "pelvis -1 0 0 0 1.0\n"
      "spine 0 0 0 0.25 1.1  # trailing comment\n"
      "\n"
      "head 1 0.0 0.0 0.35 0.9\n");
  const Skeletond s = parseSkeleton(in);
  REQUIRE(s.jointCount() == 3);
  CHECK(s.joints[0].name == "pelvis");
  CHECK(s.joints[2].parent == 1);
  CHECK(s.joints[2].restOffset.z() == 0.35);
  CHECK(s.boneScales[1] == 1.1);

  std::ostringstream out;
  writeSkeleton(out, s);
  std::istringstream in2(out.str());
  const Skeletond s2 = parseSkeleton(in2);
  REQUIRE(s2.jointCount() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(s2.joints[i].name == s.joints[i].name);
    CHECK(s2.joints[i].parent == s.joints[i].parent);
    CHECK(s2.joints[i].restOffset == s.joints[i].restOffset);
    CHECK(s2.boneScales[i] == s.boneScales[i]);
  }
}

TEST_CASE("skeleton parser rejects malformed input") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parseSkeleton(in);
  };
  // forward reference
  CHECK_THROWS_AS(parse("a -1 0 0 0 1\nb 2 0 0 0 1\nc 1 0 0 0 1\n"), ParseError);
  // second root
  CHECK_THROWS_AS(parse("a -1 0 0 0 1\nb -1 0 0 0 1\n"), ParseError);
  // root not first
  CHECK_THROWS_AS(parse("a 0 0 0 0 1\n"), ParseError);
  // wrong field count
  CHECK_THROWS_AS(parse("a -1 0 0 1\n"), ParseError);
  // bad number
  CHECK_THROWS_AS(parse("a -1 0 zero 0 1\n"), ParseError);
  // non-positive scale
  CHECK_THROWS_AS(parse("a -1 0 0 0 0\n"), ParseError);
  // duplicate names
  CHECK_THROWS_AS(parse("a -1 0 0 0 1\na 0 0 0 0 1\n"), ParseError);
  // empty file
  CHECK_THROWS_AS(parse("# nothing here\n"), ParseError);
}

}  // TEST_SUITE
