#include "egorig/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "text_util.hpp"

namespace egorig {

namespace {

namespace fs = std::filesystem;

// Loads the optional skeleton override, returning nullptr when no path was
// given so the motion file's own reference applies.
const Skeletond* loadOptionalSkeleton(const std::string& path, Skeletond& storage) {
  if (path.empty()) return nullptr;
  storage = loadSkeleton(path);
  return &storage;
}

std::ofstream openOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  return out;
}

void finishOutput(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failed on '" + path + "'");
}

}  // namespace

RunManifest cmdSimulate(const SimulateOptions& options, std::ostream& out) {
  ScenarioConfig config = loadScenarioConfig(options.configPath);
  if (!options.outDir.empty()) config.outDir = options.outDir;
  if (options.blurSamples > 0) config.blurSamples = options.blurSamples;
  return runSimulation(config, &out);
}

MetricsReport cmdEval(const EvalOptions& options, std::ostream& out) {
  Skeletond storage;
  const Skeletond* skeleton = loadOptionalSkeleton(options.skeletonPath, storage);
  const MotionSequence gt = loadMotionCsv(options.gtPath, skeleton);
  const MotionSequence pred = loadMotionCsv(options.predPath, &gt.skeleton);

  PoseSequencePair pair;
  pair.predicted = poseSequenceFromMotion(pred);
  pair.groundTruth = poseSequenceFromMotion(gt);
  const MetricsReport report = evaluatePair(pair);

  writeMetricsText(out, report);
  if (!options.reportPath.empty()) {
    std::ofstream file = openOutput(options.reportPath);
    writeMetricsCsv(file, report);
    finishOutput(file, options.reportPath);
    out << "report: " << options.reportPath << '\n';
  }
  return report;
}

std::vector<JointStats> cmdStats(const StatsOptions& options, std::ostream& out) {
  Skeletond storage;
  const Skeletond* skeleton = loadOptionalSkeleton(options.skeletonPath, storage);
  const MotionSequence motion = loadMotionCsv(options.motionPath, skeleton);
  const std::vector<JointStats> stats = jointStatistics(motion);

  char line[160];
  std::snprintf(line, sizeof(line), "%-16s %12s %12s %12s %12s %12s %12s\n", "joint", "mean_vel",
                "std_vel", "mean_acc", "std_acc", "mean_jerk", "std_jerk");
  out << line;
  for (const auto& s : stats) {
    std::snprintf(line, sizeof(line), "%-16s %12.6g %12.6g %12.6g %12.6g %12.6g %12.6g\n",
                  s.joint.c_str(), s.meanVelocity, s.stdVelocity, s.meanAcceleration,
                  s.stdAcceleration, s.meanJerk, s.stdJerk);
    out << line;
  }

  if (!options.reportPath.empty()) {
    std::ofstream file = openOutput(options.reportPath);
    file << "joint,mean_velocity,std_velocity,mean_acceleration,std_acceleration,"
            "mean_jerk,std_jerk\n";
    for (const auto& s : stats)
      file << s.joint << ',' << detail::formatDouble(s.meanVelocity) << ','
           << detail::formatDouble(s.stdVelocity) << ','
           << detail::formatDouble(s.meanAcceleration) << ','
           << detail::formatDouble(s.stdAcceleration) << ','
           << detail::formatDouble(s.meanJerk) << ',' << detail::formatDouble(s.stdJerk) << '\n';
    finishOutput(file, options.reportPath);
    out << "report: " << options.reportPath << '\n';
  }
  return stats;
}

MotionSequence cmdConcat(const ConcatOptions& options, std::ostream& out) {
  if (options.inputPaths.size() < 2)
    throw InvalidArgument("concat: need at least two input motions");
  if (options.bridgeFrames < 0)
    throw InvalidArgument("concat: bridge frame count must be non-negative");

  Skeletond storage;
  const Skeletond* skeleton = loadOptionalSkeleton(options.skeletonPath, storage);
  MotionSequence motion = loadMotionCsv(options.inputPaths.front(), skeleton);
  for (size_t i = 1; i < options.inputPaths.size(); ++i)
    motion = concatenate(motion, loadMotionCsv(options.inputPaths[i], &motion.skeleton),
                         options.bridgeFrames);

  std::string skeletonRef = motion.skeletonSource;
  if (!skeletonRef.empty()) {
    std::error_code ec;
    const fs::path rel =
        fs::proximate(skeletonRef, fs::path(options.outPath).parent_path(), ec);
    if (!ec && !rel.empty()) skeletonRef = rel.string();
  }

  std::ofstream file = openOutput(options.outPath);
  writeMotionCsv(file, motion, skeletonRef);
  finishOutput(file, options.outPath);
  out << "wrote " << motion.frameCount() << " frames to " << options.outPath << '\n';
  return motion;
}

int exitCodeFor(const Error& error) {
  if (dynamic_cast<const StabilityError*>(&error) != nullptr) return 3;
  if (dynamic_cast<const IoError*>(&error) != nullptr) return 4;
  return 2;  // parse, config and argument errors
}

}  // namespace egorig
