#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "egorig/error.hpp"
#include "egorig/motion.hpp"
#include "egorig/rotation.hpp"
#include "test_support.hpp"

using namespace egorig;
using egotest::chainSkeleton;
using egotest::randomRotation;
using egotest::rotZ;
using egotest::TempDir;

namespace {

constexpr double kPi = std::numbers::pi;

MotionSequence randomMotion(int joints, int frames, double fps, uint64_t seed) {
  std::mt19937_64 rng(seed);
  MotionSequence m;
  m.skeleton = chainSkeleton(joints);
  m.fps = fps;
  for (int i = 0; i < frames; ++i) {
    JointPosed pose = JointPosed::Identity(joints);
    pose.root = egotest::randomTransform(rng, 2.0);
    for (auto& r : pose.localRotations) r = randomRotation(rng);
    m.frames.push_back(std::move(pose));
  }
  return m;
}

// Single-frame sequence with the given root pose.
MotionSequence oneFrame(const Eigen::Matrix3d& rootRot, const Eigen::Vector3d& rootPos,
                        double fps = 30.0) {
  MotionSequence m;
  m.skeleton = chainSkeleton(2);
  m.fps = fps;
  JointPosed pose = JointPosed::Identity(2);
  pose.root = {rootRot, rootPos};
  m.frames.push_back(pose);
  return m;
}

double maxPoseDistance(const MotionSequence& a, const MotionSequence& b) {
  REQUIRE(a.frameCount() == b.frameCount());
  double worst = 0;
  for (int i = 0; i < a.frameCount(); ++i) {
    const auto& fa = a.frames[static_cast<size_t>(i)];
    const auto& fb = b.frames[static_cast<size_t>(i)];
    worst = std::max(worst, (fa.root.translation - fb.root.translation).norm());
    worst = std::max(worst, (fa.root.rotation - fb.root.rotation).norm());
    for (size_t j = 0; j < fa.localRotations.size(); ++j)
      worst = std::max(worst, (fa.localRotations[j] - fb.localRotations[j]).norm());
  }
  return worst;
}

}  // namespace

TEST_SUITE("motion") {

TEST_CASE("csv write-parse round trip preserves every pose") {
  const MotionSequence m = [] {
    MotionSequence s = randomMotion(3, 25, 30.0, 211);
    s.label = "trial";
    return s;
  }();
  std::ostringstream out;
  writeMotionCsv(out, m, "rig.skel");
  std::istringstream in(out.str());
  const MotionSequence back = parseMotionCsv(in, m.skeleton);
  CHECK(back.fps == m.fps);
  CHECK(back.label == "trial");
  CHECK(back.skeletonSource == "rig.skel");
  CHECK(maxPoseDistance(m, back) < 1e-9);
}

TEST_CASE("csv parser reports malformed input with line numbers") {
  const Skeletond skel = chainSkeleton(1);

  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return parseMotionCsv(in, skel);
  };
  const std::string header =
      "root_tx,root_ty,root_tz,root_r6_0,root_r6_1,root_r6_2,root_r6_3,root_r6_4,root_r6_5,"
      "j0_r6_0,j0_r6_1,j0_r6_2,j0_r6_3,j0_r6_4,j0_r6_5\n";
  const std::string row = "0,0,0,1,0,0,0,1,0,1,0,0,0,1,0\n";

  CHECK_NOTHROW(parse("fps=30\n" + header + row));
  // missing fps
  CHECK_THROWS_AS(parse(header + row), ParseError);
  // unknown joint name in header
  CHECK_THROWS_WITH_AS(
      parse("fps=30\n" + header.substr(0, header.find("j0_r6_0")) +
            "zz_r6_0,zz_r6_1,zz_r6_2,zz_r6_3,zz_r6_4,zz_r6_5\n" + row),
      doctest::Contains("unknown joint 'zz'"), ParseError);
  // short row, error names the line
  CHECK_THROWS_WITH_AS(parse("fps=30\n" + header + "0,0,0\n"), doctest::Contains("line 3"),
                       ParseError);
  // non-finite value
  CHECK_THROWS_AS(parse("fps=30\n" + header +
                        "0,0,nan,1,0,0,0,1,0,1,0,0,0,1,0\n"),
                  ParseError);
  // degenerate rotation encoding
  CHECK_THROWS_AS(parse("fps=30\n" + header +
                        "0,0,0,0,0,0,0,1,0,1,0,0,0,1,0\n"),
                  ParseError);
  // zero frames
  CHECK_THROWS_AS(parse("fps=30\n" + header), ParseError);
  // bad fps
  CHECK_THROWS_AS(parse("fps=0\n" + header + row), ParseError);
}

TEST_CASE("motion file resolves its own skeleton reference") {
  TempDir tmp("motion_ref");
  MotionSequence m = randomMotion(2, 5, 30.0, 223);
  {
    std::ofstream skel(tmp.file("rig.skel"));
    writeSkeleton(skel, m.skeleton);
    std::ofstream csv(tmp.file("clip.csv"));
    writeMotionCsv(csv, m, "rig.skel");
  }
  const MotionSequence loaded = loadMotionCsv(tmp.file("clip.csv"));
  CHECK(loaded.skeleton.jointCount() == 2);
  CHECK(maxPoseDistance(m, loaded) < 1e-9);
  CHECK(loaded.skeletonSource == tmp.file("rig.skel"));

  // Without a reference and without an explicit skeleton the load must fail.
  {
    std::ofstream csv(tmp.file("bare.csv"));
    writeMotionCsv(csv, m);
  }
  CHECK_THROWS_AS(loadMotionCsv(tmp.file("bare.csv")), ParseError);
  CHECK_NOTHROW(loadMotionCsv(tmp.file("bare.csv"), &m.skeleton));
  CHECK_THROWS_AS(loadMotionCsv(tmp.file("missing.csv")), IoError);
}

TEST_CASE("sampling blends bracketing frames") {
  MotionSequence m = oneFrame(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 1.0);
  JointPosed second = JointPosed::Identity(2);
  second.root = {rotZ(kPi / 2), Eigen::Vector3d(2, 0, 0)};
  m.frames.push_back(second);

  const JointPosed mid = sampleMotionAt(m, 0.5);
  CHECK((mid.root.rotation - rotZ(kPi / 4)).norm() < 1e-12);
  CHECK((mid.root.translation - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
  // clamped outside the span
  CHECK((sampleMotionAt(m, -1.0).root.translation - Eigen::Vector3d::Zero()).norm() == 0.0);
  CHECK((sampleMotionAt(m, 9.0).root.translation - Eigen::Vector3d(2, 0, 0)).norm() == 0.0);
}

TEST_CASE("concatenation inserts a slerp bridge and shifts the tail") {
  const MotionSequence a = oneFrame(Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 2, 3));
  const MotionSequence b = oneFrame(rotZ(kPi / 2), Eigen::Vector3d(50, 0, 0));
  const MotionSequence joined = concatenate(a, b, 10);

  CHECK(joined.frameCount() == 12);
  // tail lands exactly on a's final root position
  CHECK((joined.frames.back().root.translation - Eigen::Vector3d(1, 2, 3)).norm() == 0.0);
  // bridge rotations follow the closed-form arc
  for (int k = 1; k <= 10; ++k) {
    const double u = double(k) / 11.0;
    const auto& frame = joined.frames[static_cast<size_t>(k)];
    CHECK((frame.root.rotation - rotZ(u * kPi / 2)).norm() < 1e-6);
    CHECK((frame.root.translation - Eigen::Vector3d(1, 2, 3)).norm() < 1e-12);
  }
}

TEST_CASE("concatenation without a bridge keeps both parts verbatim") {
  const MotionSequence a = randomMotion(2, 7, 30.0, 229);
  const MotionSequence b = randomMotion(2, 5, 30.0, 233);
  const MotionSequence joined = concatenate(a, b, 0);
  REQUIRE(joined.frameCount() == 12);
  const Eigen::Vector3d delta =
      a.frames.back().root.translation - b.frames.front().root.translation;
  for (int i = 0; i < 7; ++i)
    CHECK(maxPoseDistance(a, a) == 0.0);  // sanity
  CHECK((joined.frames[7].root.translation - a.frames.back().root.translation).norm() < 1e-15);
  for (int i = 0; i < 5; ++i) {
    const auto& src = b.frames[static_cast<size_t>(i)];
    const auto& dst = joined.frames[static_cast<size_t>(7 + i)];
    CHECK((dst.root.translation - (src.root.translation + delta)).norm() < 1e-15);
    CHECK((dst.root.rotation - src.root.rotation).norm() == 0.0);
  }
}

TEST_CASE("concatenation rejects mismatched inputs") {
  const MotionSequence a = randomMotion(2, 3, 30.0, 239);
  MotionSequence b = randomMotion(3, 3, 30.0, 241);
  CHECK_THROWS_AS(concatenate(a, b, 5), InvalidArgument);
  MotionSequence c = randomMotion(2, 3, 25.0, 251);
  CHECK_THROWS_AS(concatenate(a, c, 5), InvalidArgument);
  CHECK_THROWS_AS(concatenate(a, a, -1), InvalidArgument);
}

TEST_CASE("resampling at the native rate reproduces the sequence") {
  const MotionSequence m = randomMotion(3, 30, 30.0, 257);
  const MotionSequence same = resample(m, 30.0);
  REQUIRE(same.frameCount() == 30);
  CHECK(maxPoseDistance(m, same) < 1e-9);
}

TEST_CASE("downsampling covers the span on the target grid") {
  const MotionSequence m = randomMotion(2, 30, 30.0, 263);
  const MotionSequence down = resample(m, 10.0);
  CHECK(down.fps == 10.0);
  CHECK(down.frameCount() == 10);  // span 29/30 s -> grid 0 .. 0.9 s
  for (int k = 0; k < 10; ++k) {
    // target grid point k/10 s lies on source frame 3k
    const auto& src = m.frames[static_cast<size_t>(3 * k)];
    const auto& dst = down.frames[static_cast<size_t>(k)];
    CHECK((dst.root.translation - src.root.translation).norm() < 1e-9);
    CHECK((dst.root.rotation - src.root.rotation).norm() < 1e-9);
  }
}

TEST_CASE("upsampling interpolates on the great-circle arc") {
  MotionSequence m = oneFrame(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero(), 1.0);
  JointPosed second = JointPosed::Identity(2);
  second.root = {rotZ(kPi / 2), Eigen::Vector3d(1, 0, 0)};
  m.frames.push_back(second);

  const MotionSequence doubled = resample(m, 2.0);
  REQUIRE(doubled.frameCount() == 3);
  CHECK((doubled.frames[1].root.rotation - rotZ(kPi / 4)).norm() < 1e-9);
  CHECK((doubled.frames[1].root.translation - Eigen::Vector3d(0.5, 0, 0)).norm() < 1e-12);

  const MotionSequence tripled = resample(m, 3.0);
  REQUIRE(tripled.frameCount() == 4);
  for (int k = 0; k < 4; ++k)
    CHECK((tripled.frames[static_cast<size_t>(k)].root.rotation - rotZ(k * kPi / 6)).norm() <
          1e-9);

  CHECK_THROWS_AS(resample(m, 0.0), InvalidArgument);
  CHECK_THROWS_AS(resample(m, -5.0), InvalidArgument);
}

TEST_CASE("finite-difference stencils are exact on polynomials") {
  // positions p(t) = (t^3, t^2, t) sampled at fps 10
  const double fps = 10.0;
  std::vector<Eigen::Vector3d> track;
  for (int i = 0; i < 12; ++i) {
    const double t = i / fps;
    track.emplace_back(t * t * t, t * t, t);
  }
  const auto vel = centralVelocity(track, fps);
  const auto acc = centralAcceleration(track, fps);
  const auto jerk = thirdDifferenceJerk(track, fps);
  CHECK(vel.firstFrame == 1);
  CHECK(acc.firstFrame == 1);
  CHECK(jerk.firstFrame == 2);
  CHECK(vel.samples.size() == 10);
  CHECK(jerk.samples.size() == 8);
  for (size_t i = 0; i < vel.samples.size(); ++i) {
    const double t = (vel.firstFrame + double(i)) / fps;
    // central first difference is exact on quadratics; on t^3 its error is h^2
    CHECK(vel.samples[i].y() == doctest::Approx(2 * t).epsilon(1e-12));
    CHECK(vel.samples[i].z() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(acc.samples[i].x() == doctest::Approx(6 * t).epsilon(1e-9));
    CHECK(acc.samples[i].y() == doctest::Approx(2.0).epsilon(1e-9));
  }
  for (const auto& j : jerk.samples) {
    CHECK(j.x() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(j.y() == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("four-sample jerk falls back to the one-sided stencil") {
  const double fps = 5.0;
  std::vector<Eigen::Vector3d> track;
  for (int i = 0; i < 4; ++i) {
    const double t = i / fps;
    track.emplace_back(t * t * t, 0, 0);
  }
  const auto jerk = thirdDifferenceJerk(track, fps);
  REQUIRE(jerk.samples.size() == 1);
  CHECK(jerk.samples[0].x() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("circular motion statistics match the analytic rates") {
  const double r = 0.5, omega = 2.0, fps = 100.0;
  MotionSequence m;
  m.skeleton = chainSkeleton(1);
  m.fps = fps;
  for (int i = 0; i < 200; ++i) {
    const double t = i / fps;
    JointPosed pose = JointPosed::Identity(1);
    pose.root.translation = {r * std::cos(omega * t), r * std::sin(omega * t), 0.0};
    m.frames.push_back(pose);
  }
  const auto stats = jointStatistics(m);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].joint == "j0");
  CHECK(stats[0].meanVelocity == doctest::Approx(r * omega).epsilon(0.01));
  CHECK(stats[0].meanAcceleration == doctest::Approx(r * omega * omega).epsilon(0.01));
  CHECK(stats[0].meanJerk == doctest::Approx(r * omega * omega * omega).epsilon(0.01));
  // uniform circular motion: constant magnitudes
  CHECK(stats[0].stdVelocity < 1e-6);
  CHECK(stats[0].stdAcceleration < 1e-4);
}

TEST_CASE("statistics require at least four frames and stay non-negative") {
  MotionSequence m = randomMotion(2, 3, 30.0, 269);
  CHECK_THROWS_AS(jointStatistics(m), InvalidArgument);
  const auto stats = jointStatistics(randomMotion(2, 12, 30.0, 271));
  for (const auto& s : stats) {
    CHECK(s.meanVelocity >= 0.0);
    CHECK(s.stdVelocity >= 0.0);
    CHECK(s.meanAcceleration >= 0.0);
    CHECK(s.stdAcceleration >= 0.0);
    CHECK(s.meanJerk >= 0.0);
    CHECK(s.stdJerk >= 0.0);
  }
}

TEST_CASE("stationary motion has zero statistics") {
  MotionSequence m;
  m.skeleton = chainSkeleton(2);
  m.fps = 30.0;
  for (int i = 0; i < 10; ++i) m.frames.push_back(JointPosed::Identity(2));
  const auto stats = jointStatistics(m);
  for (const auto& s : stats) {
    CHECK(s.meanVelocity == 0.0);
    CHECK(s.meanAcceleration == 0.0);
    CHECK(s.meanJerk == 0.0);
  }
}

}  // TEST_SUITE
