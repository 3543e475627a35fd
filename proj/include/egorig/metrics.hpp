#pragma once

// Evaluation of predicted against ground-truth pose sequences: positional
// and rotational error metrics, Procrustes-aligned error, smoothness, and
// the weighted training-loss breakdown.

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "egorig/motion.hpp"
#include "egorig/rigid_transform.hpp"

namespace egorig {

// Flat view of a motion for evaluation: global joint positions, local joint
// rotations and the global root transform per frame.
struct PoseSequence {
  double fps = 0;
  std::vector<Eigen::Matrix3Xd> jointPositions;              // 3 x J per frame
  std::vector<std::vector<Eigen::Matrix3d>> jointRotations;  // local, J per frame
  std::vector<RigidTransformd> roots;

  int frameCount() const { return static_cast<int>(jointPositions.size()); }
  int jointCount() const {
    return jointPositions.empty() ? 0 : static_cast<int>(jointPositions.front().cols());
  }
  void validate() const;
};

PoseSequence poseSequenceFromMotion(const MotionSequence& motion);

struct PoseSequencePair {
  PoseSequence predicted;
  PoseSequence groundTruth;
  void validate() const;  // matching frame counts, joint counts and fps
};

// Mean Euclidean distance between corresponding global joint positions.
double globalMpjpe(const PoseSequencePair& pair);

// Same, after the best per-frame similarity (or rigid, when withScale is
// false) alignment of the prediction onto the ground truth.
double paMpjpe(const PoseSequencePair& pair, bool withScale = true);

// Mean distance between root translations.
double mte(const PoseSequencePair& pair);

// Mean Frobenius deviation ||R_gt R_pred^T - I|| of the root orientations.
double mre(const PoseSequencePair& pair);

// Mean geodesic angle between corresponding local joint rotations, degrees.
double mjae(const PoseSequencePair& pair);

// Mean third-difference magnitude of global joint positions; a smoothness
// measure of a single sequence.
double jerkMetric(const PoseSequence& seq);

// Least-squares similarity fit source -> target (Umeyama). Throws when
// either point set is collinear (the rotation would be underdetermined).
struct SimilarityTransform {
  double scale = 1.0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Matrix3Xd apply(const Eigen::Matrix3Xd& points) const {
    return (scale * (rotation * points)).colwise() + translation;
  }
};

SimilarityTransform alignProcrustes(const Eigen::Matrix3Xd& source,
                                    const Eigen::Matrix3Xd& target, bool withScale = true);

struct LossWeights {
  double jointRotation = 10.0;    // local rotations, six-number L1
  double jointPosition = 25.0;    // global positions, elementwise L1
  double velocity = 40.0;         // frame-difference positions, L1
  double relTranslation = 25.0;   // per-frame root steps, L1
  double relRotation = 15.0;      // per-frame root steps, six-number L1
  double globTranslation = 1.0;   // accumulated root position, L1
  double globRotation = 0.025;    // accumulated root orientation, Frobenius
  double embedding = 0.0005;      // L2 norm of auxiliary embedding tokens
};

struct LossBreakdown {
  double jointRotation = 0;
  double jointPosition = 0;
  double velocity = 0;
  double relTranslation = 0;
  double relRotation = 0;
  double globTranslation = 0;
  double globRotation = 0;
  double embedding = 0;
  double total = 0;
};

// Every component is a mean over its elements, so values are comparable
// across sequence lengths; `total` is the weighted sum. The relative-root
// spans carry per-frame root steps (see relativizeRoot) and must match the
// pair's frame count. Embeddings may be empty.
LossBreakdown lossSuite(const PoseSequencePair& pair,
                        std::span<const RigidTransformd> predRelativeRoot,
                        std::span<const RigidTransformd> gtRelativeRoot,
                        std::span<const Eigen::VectorXd> embeddings,
                        const LossWeights& weights = {});

struct MetricsReport {
  double globalMpjpe = 0;
  double paMpjpe = 0;
  double mte = 0;
  double mre = 0;
  double mjaeDegrees = 0;
  double jerkPredicted = 0;
  double jerkGroundTruth = 0;
  LossBreakdown loss;
};

// All metrics plus the loss with derived relative roots and no embeddings.
MetricsReport evaluatePair(const PoseSequencePair& pair, const LossWeights& weights = {});

void writeMetricsText(std::ostream& out, const MetricsReport& report);
void writeMetricsCsv(std::ostream& out, const MetricsReport& report);

}  // namespace egorig
