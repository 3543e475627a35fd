#pragma once

// Subcommand implementations behind the command-line front end, callable
// directly from tests. Flag parsing and exit-code mapping live in the tool;
// these functions communicate failure through the library exceptions.

#include <iosfwd>
#include <string>
#include <vector>

#include "egorig/metrics.hpp"
#include "egorig/motion.hpp"
#include "egorig/pipeline.hpp"

namespace egorig {

struct SimulateOptions {
  std::string configPath;
  std::string outDir;       // overrides the config's out_dir when non-empty
  int blurSamples = 0;      // > 0 overrides the config's blur_samples
};

RunManifest cmdSimulate(const SimulateOptions& options, std::ostream& out);

struct EvalOptions {
  std::string predPath;
  std::string gtPath;
  std::string reportPath;    // optional CSV output
  std::string skeletonPath;  // optional; otherwise the files must name one
};

MetricsReport cmdEval(const EvalOptions& options, std::ostream& out);

struct StatsOptions {
  std::string motionPath;
  std::string skeletonPath;  // optional
  std::string reportPath;    // optional CSV output
};

std::vector<JointStats> cmdStats(const StatsOptions& options, std::ostream& out);

struct ConcatOptions {
  std::vector<std::string> inputPaths;  // at least two
  std::string outPath;
  std::string skeletonPath;  // optional
  int bridgeFrames = 10;
};

MotionSequence cmdConcat(const ConcatOptions& options, std::ostream& out);

// Process exit code for a library error: 2 for configuration, parsing and
// argument problems, 3 for numerical instability, 4 for file I/O.
int exitCodeFor(const Error& error);

}  // namespace egorig
