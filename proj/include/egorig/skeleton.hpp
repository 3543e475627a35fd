#pragma once

// Articulated skeleton and forward kinematics. Joints are stored in file
// order; every parent precedes its children so a single forward sweep
// resolves all global transforms.

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "egorig/error.hpp"
#include "egorig/rigid_transform.hpp"

namespace egorig {

template <typename S>
struct Skeleton {
  struct Joint {
    std::string name;
    int parent = -1;                                     // -1 marks the root
    Eigen::Vector3<S> restOffset = Eigen::Vector3<S>::Zero();  // from parent, at scale 1
  };

  std::vector<Joint> joints;
  Eigen::VectorX<S> boneScales;  // per-joint multiplier on restOffset

  int jointCount() const { return static_cast<int>(joints.size()); }

  int indexOf(const std::string& name) const {
    for (int i = 0; i < jointCount(); ++i)
      if (joints[i].name == name) return i;
    return -1;
  }

  // Enforces the structural invariants: non-empty, joint 0 is the unique
  // root, every other parent index points at an earlier joint, bone scales
  // are positive and sized to match.
  void validate() const {
    if (joints.empty()) throw InvalidArgument("skeleton: no joints");
    if (boneScales.size() != jointCount())
      throw InvalidArgument("skeleton: bone scale count does not match joint count");
    for (int i = 0; i < jointCount(); ++i) {
      const Joint& j = joints[i];
      if (i == 0 && j.parent != -1)
        throw InvalidArgument("skeleton: joint 0 must be the root (parent -1)");
      if (i > 0 && j.parent == -1)
        throw InvalidArgument("skeleton: multiple roots ('" + j.name + "')");
      if (i > 0 && (j.parent < 0 || j.parent >= i))
        throw InvalidArgument("skeleton: joint '" + j.name + "' must appear after its parent");
      if (!(boneScales[i] > S(0)))
        throw InvalidArgument("skeleton: non-positive bone scale at joint '" + j.name + "'");
      if (!j.restOffset.allFinite())
        throw InvalidArgument("skeleton: non-finite rest offset at joint '" + j.name + "'");
      for (int k = 0; k < i; ++k)
        if (joints[k].name == j.name)
          throw InvalidArgument("skeleton: duplicate joint name '" + j.name + "'");
    }
  }
};

// One articulation frame: a local rotation per joint plus the root transform
// that places the whole skeleton in the world.
template <typename S>
struct JointPose {
  std::vector<Eigen::Matrix3<S>> localRotations;
  RigidTransform<S> root;

  static JointPose Identity(int jointCount) {
    JointPose p;
    p.localRotations.assign(static_cast<size_t>(jointCount), Eigen::Matrix3<S>::Identity());
    return p;
  }
};

using Skeletond = Skeleton<double>;
using JointPosed = JointPose<double>;

// Global transform per joint. Each joint contributes a fixed translation by
// its scaled rest offset followed by its local rotation; the root composes
// onto pose.root.
template <typename S>
std::vector<RigidTransform<S>> forwardKinematics(const Skeleton<S>& skeleton,
                                                 const JointPose<S>& pose) {
  const int n = skeleton.jointCount();
  if (static_cast<int>(pose.localRotations.size()) != n)
    throw InvalidArgument("forwardKinematics: pose has " +
                          std::to_string(pose.localRotations.size()) + " rotations for " +
                          std::to_string(n) + " joints");
  std::vector<RigidTransform<S>> global(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& joint = skeleton.joints[i];
    const RigidTransform<S> local{pose.localRotations[i],
                                  Eigen::Vector3<S>(skeleton.boneScales[i] * joint.restOffset)};
    const RigidTransform<S>& parent = joint.parent < 0 ? pose.root : global[joint.parent];
    global[i] = parent * local;
  }
  return global;
}

// Integrates per-frame relative root transforms into a global trajectory:
// out[i] = out[i-1] * relative[i], with out[-1] = start.
template <typename S>
std::vector<RigidTransform<S>> accumulateRoot(std::span<const RigidTransform<S>> relative,
                                              const RigidTransform<S>& start) {
  std::vector<RigidTransform<S>> out;
  out.reserve(relative.size());
  RigidTransform<S> acc = start;
  for (const auto& step : relative) {
    acc = acc * step;
    out.push_back(acc);
  }
  return out;
}

// Inverse of accumulateRoot: recovers the per-frame relative steps.
template <typename S>
std::vector<RigidTransform<S>> relativizeRoot(std::span<const RigidTransform<S>> global,
                                              const RigidTransform<S>& start) {
  std::vector<RigidTransform<S>> out;
  out.reserve(global.size());
  RigidTransform<S> prev = start;
  for (const auto& g : global) {
    out.push_back(prev.inverse() * g);
    prev = g;
  }
  return out;
}

// Text format, one joint per line: name parent_index ox oy oz scale.
// '#' starts a comment; blank lines are skipped.
Skeletond parseSkeleton(std::istream& in);
Skeletond loadSkeleton(const std::string& path);
void writeSkeleton(std::ostream& out, const Skeletond& skeleton);

}  // namespace egorig
