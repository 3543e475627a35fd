#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "egorig/cli.hpp"
#include "egorig/version.hpp"

namespace {

int dispatch(const CLI::App& app, const egorig::SimulateOptions& simulate,
             const egorig::EvalOptions& eval, const egorig::StatsOptions& stats,
             const egorig::ConcatOptions& concat) {
  if (app.got_subcommand("simulate")) {
    egorig::cmdSimulate(simulate, std::cout);
  } else if (app.got_subcommand("eval")) {
    egorig::cmdEval(eval, std::cout);
  } else if (app.got_subcommand("stats")) {
    egorig::cmdStats(stats, std::cout);
  } else if (app.got_subcommand("concat")) {
    egorig::cmdConcat(concat, std::cout);
  } else {
    std::cerr << "error: a subcommand is required (see --help)\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"egorig: deterministic simulator for body-worn sensor rigs"};
  app.set_version_flag("--version", std::string(egorig::kVersion));
  app.require_subcommand(0, 1);

  egorig::SimulateOptions simulate;
  CLI::App* sim = app.add_subcommand("simulate", "run a scenario end to end");
  sim->add_option("--config", simulate.configPath, "scenario config file")->required();
  sim->add_option("--out", simulate.outDir, "output directory (overrides out_dir)");
  sim->add_option("--blur-samples", simulate.blurSamples,
                  "sub-frame samples per shutter (overrides blur_samples)")
      ->check(CLI::PositiveNumber);

  egorig::EvalOptions eval;
  CLI::App* ev = app.add_subcommand("eval", "score a predicted motion against ground truth");
  ev->add_option("--pred", eval.predPath, "predicted motion CSV")->required();
  ev->add_option("--gt", eval.gtPath, "ground-truth motion CSV")->required();
  ev->add_option("--report", eval.reportPath, "also write the metrics as CSV");
  ev->add_option("--skeleton", eval.skeletonPath,
                 "skeleton file (otherwise the motion files must reference one)");

  egorig::StatsOptions stats;
  CLI::App* st = app.add_subcommand("stats", "per-joint movement statistics of a motion");
  st->add_option("--motion", stats.motionPath, "motion CSV")->required();
  st->add_option("--skeleton", stats.skeletonPath, "skeleton file (optional)");
  st->add_option("--report", stats.reportPath, "also write the table as CSV");

  egorig::ConcatOptions concat;
  CLI::App* cc = app.add_subcommand("concat", "chain motion clips with interpolated bridges");
  cc->add_option("--out", concat.outPath, "output motion CSV")->required();
  cc->add_option("--bridge", concat.bridgeFrames, "bridge frames between clips")
      ->check(CLI::NonNegativeNumber);
  cc->add_option("--skeleton", concat.skeletonPath, "skeleton file (optional)");
  cc->add_option("inputs", concat.inputPaths, "input motion CSVs (two or more)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return dispatch(app, simulate, eval, stats, concat);
  } catch (const egorig::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return egorig::exitCodeFor(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
