#include "egorig/metrics.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>
#include <utility>

#include "egorig/rotation.hpp"
#include "egorig/skeleton.hpp"
#include "text_util.hpp"

namespace egorig {

namespace {

void checkRotations(const std::vector<std::vector<Eigen::Matrix3d>>& rotations) {
  for (const auto& frame : rotations)
    for (const auto& r : frame)
      if (orthonormalityDeviation(r) > kOrthonormalTol || r.determinant() < 0)
        throw InvalidArgument("pose sequence: invalid rotation");
}

// Means over elementwise absolute differences / norms.
double l1Mean(double absSum, long elements) {
  return elements > 0 ? absSum / double(elements) : 0.0;
}

void requireCollinearFree(const Eigen::Matrix3Xd& centered) {
  Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(centered);
  const auto& sv = svd.singularValues();
  if (sv[0] <= 0.0 || sv[1] <= 1e-9 * sv[0])
    throw InvalidArgument("alignProcrustes: degenerate (collinear) point set");
}

}  // namespace

void PoseSequence::validate() const {
  if (!(fps > 0)) throw InvalidArgument("pose sequence: fps must be positive");
  const size_t frames = jointPositions.size();
  if (frames == 0) throw InvalidArgument("pose sequence: no frames");
  if (jointRotations.size() != frames || roots.size() != frames)
    throw InvalidArgument("pose sequence: per-frame containers disagree on length");
  const long joints = jointPositions.front().cols();
  if (joints < 1) throw InvalidArgument("pose sequence: no joints");
  for (const auto& p : jointPositions)
    if (p.cols() != joints) throw InvalidArgument("pose sequence: joint count varies");
  for (const auto& r : jointRotations)
    if (static_cast<long>(r.size()) != joints)
      throw InvalidArgument("pose sequence: rotation count varies");
  checkRotations(jointRotations);
}

PoseSequence poseSequenceFromMotion(const MotionSequence& motion) {
  motion.validate();
  PoseSequence seq;
  seq.fps = motion.fps;
  const int joints = motion.skeleton.jointCount();
  seq.jointPositions.reserve(motion.frames.size());
  seq.jointRotations.reserve(motion.frames.size());
  seq.roots.reserve(motion.frames.size());
  for (const auto& frame : motion.frames) {
    const auto global = forwardKinematics(motion.skeleton, frame);
    Eigen::Matrix3Xd pos(3, joints);
    for (int j = 0; j < joints; ++j) pos.col(j) = global[static_cast<size_t>(j)].translation;
    seq.jointPositions.push_back(std::move(pos));
    seq.jointRotations.push_back(frame.localRotations);
    seq.roots.push_back(frame.root);
  }
  return seq;
}

void PoseSequencePair::validate() const {
  predicted.validate();
  groundTruth.validate();
  if (predicted.frameCount() != groundTruth.frameCount())
    throw InvalidArgument("pose pair: frame count mismatch (" +
                          std::to_string(predicted.frameCount()) + " vs " +
                          std::to_string(groundTruth.frameCount()) + ")");
  if (predicted.jointCount() != groundTruth.jointCount())
    throw InvalidArgument("pose pair: joint count mismatch");
  if (predicted.fps != groundTruth.fps) throw InvalidArgument("pose pair: fps mismatch");
}

double globalMpjpe(const PoseSequencePair& pair) {
  pair.validate();
  double sum = 0;
  long count = 0;
  for (int f = 0; f < pair.predicted.frameCount(); ++f) {
    const auto& p = pair.predicted.jointPositions[static_cast<size_t>(f)];
    const auto& g = pair.groundTruth.jointPositions[static_cast<size_t>(f)];
    sum += (p - g).colwise().norm().sum();
    count += p.cols();
  }
  return sum / double(count);
}

SimilarityTransform alignProcrustes(const Eigen::Matrix3Xd& source,
                                    const Eigen::Matrix3Xd& target, bool withScale) {
  if (source.cols() != target.cols())
    throw InvalidArgument("alignProcrustes: point count mismatch");
  const long n = source.cols();
  if (n < 3) throw InvalidArgument("alignProcrustes: need at least 3 points");

  const Eigen::Vector3d muS = source.rowwise().mean();
  const Eigen::Vector3d muT = target.rowwise().mean();
  const Eigen::Matrix3Xd X = source.colwise() - muS;
  const Eigen::Matrix3Xd Y = target.colwise() - muT;
  requireCollinearFree(X);
  requireCollinearFree(Y);

  const Eigen::Matrix3d sigma = Y * X.transpose() / double(n);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Vector3d flip = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0) flip[2] = -1.0;

  SimilarityTransform out;
  out.rotation = svd.matrixU() * flip.asDiagonal() * svd.matrixV().transpose();
  if (withScale) {
    const double varX = X.squaredNorm() / double(n);
    out.scale = svd.singularValues().dot(flip) / varX;
    if (!(out.scale > 0)) throw InvalidArgument("alignProcrustes: non-positive scale");
  }
  out.translation = muT - out.scale * (out.rotation * muS);
  return out;
}

double paMpjpe(const PoseSequencePair& pair, bool withScale) {
  pair.validate();
  if (pair.predicted.jointCount() < 3)
    throw InvalidArgument("paMpjpe: need at least 3 joints per frame");
  double sum = 0;
  long count = 0;
  for (int f = 0; f < pair.predicted.frameCount(); ++f) {
    const auto& p = pair.predicted.jointPositions[static_cast<size_t>(f)];
    const auto& g = pair.groundTruth.jointPositions[static_cast<size_t>(f)];
    const SimilarityTransform fit = alignProcrustes(p, g, withScale);
    sum += (fit.apply(p) - g).colwise().norm().sum();
    count += p.cols();
  }
  return sum / double(count);
}

double mte(const PoseSequencePair& pair) {
  pair.validate();
  double sum = 0;
  for (int f = 0; f < pair.predicted.frameCount(); ++f)
    sum += (pair.predicted.roots[static_cast<size_t>(f)].translation -
            pair.groundTruth.roots[static_cast<size_t>(f)].translation)
               .norm();
  return sum / double(pair.predicted.frameCount());
}

double mre(const PoseSequencePair& pair) {
  pair.validate();
  double sum = 0;
  for (int f = 0; f < pair.predicted.frameCount(); ++f) {
    const Eigen::Matrix3d d = pair.groundTruth.roots[static_cast<size_t>(f)].rotation *
                                  pair.predicted.roots[static_cast<size_t>(f)].rotation.transpose() -
                              Eigen::Matrix3d::Identity();
    sum += d.norm();
  }
  return sum / double(pair.predicted.frameCount());
}

double mjae(const PoseSequencePair& pair) {
  pair.validate();
  double sum = 0;
  long count = 0;
  for (int f = 0; f < pair.predicted.frameCount(); ++f) {
    const auto& p = pair.predicted.jointRotations[static_cast<size_t>(f)];
    const auto& g = pair.groundTruth.jointRotations[static_cast<size_t>(f)];
    for (size_t j = 0; j < p.size(); ++j) {
      sum += geodesicAngle(g[j], p[j]);
      ++count;
    }
  }
  return sum / double(count) * 180.0 / std::numbers::pi;
}

double jerkMetric(const PoseSequence& seq) {
  seq.validate();
  const int n = seq.frameCount();
  if (n < 4) throw InvalidArgument("jerkMetric: need at least 4 frames");
  const int joints = seq.jointCount();
  double sum = 0;
  long count = 0;
  std::vector<Eigen::Vector3d> track(static_cast<size_t>(n));
  for (int j = 0; j < joints; ++j) {
    for (int f = 0; f < n; ++f) track[static_cast<size_t>(f)] =
        seq.jointPositions[static_cast<size_t>(f)].col(j);
    const auto jerk = thirdDifferenceJerk(track, seq.fps);
    for (const auto& sample : jerk.samples) {
      sum += sample.norm();
      ++count;
    }
  }
  return sum / double(count);
}

LossBreakdown lossSuite(const PoseSequencePair& pair,
                        std::span<const RigidTransformd> predRelativeRoot,
                        std::span<const RigidTransformd> gtRelativeRoot,
                        std::span<const Eigen::VectorXd> embeddings,
                        const LossWeights& weights) {
  pair.validate();
  const int frames = pair.predicted.frameCount();
  const int joints = pair.predicted.jointCount();
  if (static_cast<int>(predRelativeRoot.size()) != frames ||
      static_cast<int>(gtRelativeRoot.size()) != frames)
    throw InvalidArgument("lossSuite: relative-root spans must match the frame count");

  LossBreakdown loss;

  // Local joint rotations, six-number encoding, elementwise L1.
  {
    double acc = 0;
    for (int f = 0; f < frames; ++f)
      for (int j = 0; j < joints; ++j)
        acc += (rotationTo6d(pair.predicted.jointRotations[static_cast<size_t>(f)][static_cast<size_t>(j)]) -
                rotationTo6d(pair.groundTruth.jointRotations[static_cast<size_t>(f)][static_cast<size_t>(j)]))
                   .cwiseAbs()
                   .sum();
    loss.jointRotation = l1Mean(acc, 6L * frames * joints);
  }

  // Global joint positions, elementwise L1.
  {
    double acc = 0;
    for (int f = 0; f < frames; ++f)
      acc += (pair.predicted.jointPositions[static_cast<size_t>(f)] -
              pair.groundTruth.jointPositions[static_cast<size_t>(f)])
                 .cwiseAbs()
                 .sum();
    loss.jointPosition = l1Mean(acc, 3L * frames * joints);
  }

  // Position frame differences, elementwise L1.
  {
    double acc = 0;
    for (int f = 1; f < frames; ++f) {
      const Eigen::Matrix3Xd dp = pair.predicted.jointPositions[static_cast<size_t>(f)] -
                                  pair.predicted.jointPositions[static_cast<size_t>(f - 1)];
      const Eigen::Matrix3Xd dg = pair.groundTruth.jointPositions[static_cast<size_t>(f)] -
                                  pair.groundTruth.jointPositions[static_cast<size_t>(f - 1)];
      acc += (dp - dg).cwiseAbs().sum();
    }
    loss.velocity = l1Mean(acc, 3L * (frames - 1) * joints);
  }

  // Per-frame root steps.
  {
    double accT = 0, accR = 0;
    for (int f = 0; f < frames; ++f) {
      accT += (predRelativeRoot[static_cast<size_t>(f)].translation -
               gtRelativeRoot[static_cast<size_t>(f)].translation)
                  .cwiseAbs()
                  .sum();
      accR += (rotationTo6d(predRelativeRoot[static_cast<size_t>(f)].rotation) -
               rotationTo6d(gtRelativeRoot[static_cast<size_t>(f)].rotation))
                  .cwiseAbs()
                  .sum();
    }
    loss.relTranslation = l1Mean(accT, 3L * frames);
    loss.relRotation = l1Mean(accR, 6L * frames);
  }

  // Accumulated root pose.
  {
    double accT = 0, accR = 0;
    for (int f = 0; f < frames; ++f) {
      accT += (pair.predicted.roots[static_cast<size_t>(f)].translation -
               pair.groundTruth.roots[static_cast<size_t>(f)].translation)
                  .cwiseAbs()
                  .sum();
      accR += (pair.predicted.roots[static_cast<size_t>(f)].rotation *
                   pair.groundTruth.roots[static_cast<size_t>(f)].rotation.transpose() -
               Eigen::Matrix3d::Identity())
                  .norm();
    }
    loss.globTranslation = l1Mean(accT, 3L * frames);
    loss.globRotation = l1Mean(accR, frames);
  }

  // Embedding magnitude.
  {
    double acc = 0;
    for (const auto& z : embeddings) acc += z.norm();
    loss.embedding = embeddings.empty() ? 0.0 : acc / double(embeddings.size());
  }

  loss.total = weights.jointRotation * loss.jointRotation +
               weights.jointPosition * loss.jointPosition + weights.velocity * loss.velocity +
               weights.relTranslation * loss.relTranslation +
               weights.relRotation * loss.relRotation +
               weights.globTranslation * loss.globTranslation +
               weights.globRotation * loss.globRotation + weights.embedding * loss.embedding;
  return loss;
}

MetricsReport evaluatePair(const PoseSequencePair& pair, const LossWeights& weights) {
  pair.validate();
  MetricsReport report;
  report.globalMpjpe = globalMpjpe(pair);
  report.paMpjpe = paMpjpe(pair);
  report.mte = mte(pair);
  report.mre = mre(pair);
  report.mjaeDegrees = mjae(pair);
  if (pair.predicted.frameCount() >= 4) {
    report.jerkPredicted = jerkMetric(pair.predicted);
    report.jerkGroundTruth = jerkMetric(pair.groundTruth);
  }
  const auto predRel = relativizeRoot<double>(pair.predicted.roots, RigidTransformd::Identity());
  const auto gtRel = relativizeRoot<double>(pair.groundTruth.roots, RigidTransformd::Identity());
  report.loss = lossSuite(pair, predRel, gtRel, {}, weights);
  return report;
}

namespace {

const std::pair<const char*, double MetricsReport::*> kScalarFields[] = {
    {"global_mpjpe", &MetricsReport::globalMpjpe},
    {"pa_mpjpe", &MetricsReport::paMpjpe},
    {"mte", &MetricsReport::mte},
    {"mre", &MetricsReport::mre},
    {"mjae_deg", &MetricsReport::mjaeDegrees},
    {"jerk_pred", &MetricsReport::jerkPredicted},
    {"jerk_gt", &MetricsReport::jerkGroundTruth},
};

const std::pair<const char*, double LossBreakdown::*> kLossFields[] = {
    {"loss_joint_rotation", &LossBreakdown::jointRotation},
    {"loss_joint_position", &LossBreakdown::jointPosition},
    {"loss_velocity", &LossBreakdown::velocity},
    {"loss_rel_translation", &LossBreakdown::relTranslation},
    {"loss_rel_rotation", &LossBreakdown::relRotation},
    {"loss_glob_translation", &LossBreakdown::globTranslation},
    {"loss_glob_rotation", &LossBreakdown::globRotation},
    {"loss_embedding", &LossBreakdown::embedding},
    {"loss_total", &LossBreakdown::total},
};

}  // namespace

void writeMetricsText(std::ostream& out, const MetricsReport& report) {
  for (const auto& [name, field] : kScalarFields)
    out << name << " = " << detail::formatDouble(report.*field) << '\n';
  for (const auto& [name, field] : kLossFields)
    out << name << " = " << detail::formatDouble(report.loss.*field) << '\n';
}

void writeMetricsCsv(std::ostream& out, const MetricsReport& report) {
  bool first = true;
  for (const auto& [name, field] : kScalarFields) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  for (const auto& [name, field] : kLossFields) out << ',' << name;
  out << '\n';
  first = true;
  for (const auto& [name, field] : kScalarFields) {
    out << (first ? "" : ",") << detail::formatDouble(report.*field);
    first = false;
  }
  for (const auto& [name, field] : kLossFields)
    out << ',' << detail::formatDouble(report.loss.*field);
  out << '\n';
}

}  // namespace egorig
