// Generates the bundled synthetic walk: a 15-joint biped covering 4 seconds
// at 30 fps with swinging arms, striding legs and a gentle vertical bob. The
// amplitudes are chosen so the per-joint acceleration ordering (wrists
// highest, then knees, then head/pelvis) is stable with a wide margin.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "egorig/motion.hpp"
#include "egorig/skeleton.hpp"

using namespace egorig;

namespace {

Skeletond buildSkeleton() {
  Skeletond s;
  auto add = [&s](const char* name, int parent, double x, double y, double z) {
    Skeletond::Joint j;
    j.name = name;
    j.parent = parent;
    j.restOffset = {x, y, z};
    s.joints.push_back(j);
  };
  // Axes: +x forward, +y left, +z up. Pelvis is the root.
  add("pelvis", -1, 0, 0, 0);
  add("spine", 0, 0, 0, 0.25);
  add("head", 1, 0, 0, 0.35);
  add("l_shoulder", 1, 0, 0.22, 0.20);
  add("l_elbow", 3, 0, 0.03, -0.28);
  add("l_wrist", 4, 0, 0.02, -0.26);
  add("r_shoulder", 1, 0, -0.22, 0.20);
  add("r_elbow", 6, 0, -0.03, -0.28);
  add("r_wrist", 7, 0, -0.02, -0.26);
  add("l_hip", 0, 0, 0.10, -0.05);
  add("l_knee", 9, 0, 0, -0.42);
  add("l_ankle", 10, 0, 0, -0.40);
  add("r_hip", 0, 0, -0.10, -0.05);
  add("r_knee", 12, 0, 0, -0.42);
  add("r_ankle", 13, 0, 0, -0.40);
  s.boneScales = Eigen::VectorXd::Ones(s.jointCount());
  return s;
}

Eigen::Matrix3d aboutY(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitY()).toRotationMatrix();
}

Eigen::Matrix3d aboutZ(double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

MotionSequence buildWalk(const Skeletond& skeleton) {
  MotionSequence motion;
  motion.skeleton = skeleton;
  motion.fps = 30;
  motion.label = "walk";

  const double omega = 6.0;  // stride frequency, rad/s
  const int frames = 121;    // 4 seconds inclusive
  for (int i = 0; i < frames; ++i) {
    const double t = i / motion.fps;
    JointPosed pose = JointPosed::Identity(skeleton.jointCount());

    pose.root.translation = {0.8 * t, 0.0, 0.95 + 0.02 * std::sin(2 * omega * t)};
    pose.root.rotation = aboutZ(0.05 * std::sin(omega * t));

    const double swing = std::sin(omega * t);
    const double flex = std::sin(2 * omega * t);

    pose.localRotations[1] = aboutY(0.04 * flex) * aboutZ(0.03 * swing);  // spine
    pose.localRotations[2] = aboutY(-0.02 * flex);                        // head
    pose.localRotations[3] = aboutY(0.35 * swing);                        // l_shoulder
    pose.localRotations[4] = aboutY(0.20 + 0.15 * flex);                  // l_elbow
    pose.localRotations[6] = aboutY(-0.35 * swing);                       // r_shoulder
    pose.localRotations[7] = aboutY(0.20 - 0.15 * flex);                  // r_elbow
    pose.localRotations[9] = aboutY(-0.30 * swing);                       // l_hip
    pose.localRotations[10] = aboutY(0.25 * (1 - std::cos(omega * t)));   // l_knee
    pose.localRotations[11] = aboutY(0.10 * swing);                       // l_ankle
    pose.localRotations[12] = aboutY(0.30 * swing);                       // r_hip
    pose.localRotations[13] = aboutY(0.25 * (1 + std::cos(omega * t)));   // r_knee
    pose.localRotations[14] = aboutY(-0.10 * swing);                      // r_ankle

    motion.frames.push_back(pose);
  }
  return motion;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_walk_asset <output-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];

  const Skeletond skeleton = buildSkeleton();
  skeleton.validate();
  const MotionSequence motion = buildWalk(skeleton);
  motion.validate();

  {
    std::ofstream out(dir + "/walk.skel", std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << dir << "/walk.skel\n";
      return 4;
    }
    writeSkeleton(out, skeleton);
  }
  {
    std::ofstream out(dir + "/walk.csv", std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << dir << "/walk.csv\n";
      return 4;
    }
    writeMotionCsv(out, motion, "walk.skel");
  }
  std::cout << "wrote " << dir << "/walk.skel and " << dir << "/walk.csv (" << motion.frameCount()
            << " frames at " << motion.fps << " fps)\n";
  return 0;
}
