#pragma once

// Motion sequences: uniformly sampled joint poses with the skeleton they
// animate. Covers CSV ingestion, concatenation with an interpolated bridge,
// fps resampling, and finite-difference movement statistics.

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "egorig/skeleton.hpp"

namespace egorig {

struct MotionSequence {
  Skeletond skeleton;
  double fps = 0;
  std::vector<JointPosed> frames;
  std::string label;
  // Resolved path of the skeleton file this sequence was loaded against,
  // empty for synthetic sequences. Carried so downstream commands can refer
  // back to it.
  std::string skeletonSource;

  int frameCount() const { return static_cast<int>(frames.size()); }
  double duration() const { return frames.empty() ? 0.0 : (frameCount() - 1) / fps; }

  // Structural invariants: positive fps, at least one frame, every frame
  // sized to the skeleton.
  void validate() const;
};

// CSV layout: a 'fps=<f>' line, optional 'skeleton=<path>' and
// 'label=<text>' lines, a column header
//   root_tx,root_ty,root_tz,root_r6_0..root_r6_5,<joint>_r6_0..5,...
// with joints in skeleton order, then one row of numbers per frame.
MotionSequence parseMotionCsv(std::istream& in, const Skeletond& skeleton);

// Loads a motion file. With a null skeleton the file's own 'skeleton='
// reference is resolved relative to the CSV location.
MotionSequence loadMotionCsv(const std::string& path, const Skeletond* skeleton = nullptr);

// `skeletonRef` is emitted verbatim as the 'skeleton=' header when non-empty.
void writeMotionCsv(std::ostream& out, const MotionSequence& motion,
                    const std::string& skeletonRef = {});

// Pose at time t seconds: nearest bracketing frames blended with slerp on
// rotations and lerp on translations. t is clamped to the sequence span.
JointPosed sampleMotionAt(const MotionSequence& motion, double t);

// Joins two sequences over the same skeleton and fps. b is shifted so its
// first root position lands on a's last root position, and `bridgeFrames`
// interpolated frames are inserted between the two.
MotionSequence concatenate(const MotionSequence& a, const MotionSequence& b,
                           int bridgeFrames = 10);

// Resamples onto a uniform grid t_k = k / targetFps covering the original
// span. Resampling to the original rate reproduces the sequence.
MotionSequence resample(const MotionSequence& motion, double targetFps);

// Finite-difference derivative tracks. Velocity and acceleration use central
// stencils valid on frames [1, N-2]; jerk uses the five-point central stencil
// valid on [2, N-3], with a one-sided fallback when only 4 frames exist.
// `firstFrame` says which source frame samples[0] belongs to.
struct DerivativeTrack {
  int firstFrame = 0;
  std::vector<Eigen::Vector3d> samples;
};

DerivativeTrack centralVelocity(std::span<const Eigen::Vector3d> track, double fps);
DerivativeTrack centralAcceleration(std::span<const Eigen::Vector3d> track, double fps);
DerivativeTrack thirdDifferenceJerk(std::span<const Eigen::Vector3d> track, double fps);

// Movement statistics per joint: mean and population standard deviation of
// the per-frame speed, acceleration and jerk magnitudes, taken over global
// joint positions with boundary frames excluded.
struct JointStats {
  std::string joint;
  double meanVelocity = 0, stdVelocity = 0;
  double meanAcceleration = 0, stdAcceleration = 0;
  double meanJerk = 0, stdJerk = 0;
};

std::vector<JointStats> jointStatistics(const MotionSequence& motion);

}  // namespace egorig
