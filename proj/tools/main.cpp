#include <cstdio>
#include <exception>
#include <string>

#include "frflow/errors.h"
#include "frflow/harness.h"

namespace {

int usage(std::FILE* to) {
  std::fprintf(to,
               "usage: frflow <command> ...\n"
               "  run <config-file>        run an experiment described by a config file\n"
               "  preset [<name>]          run a compiled-in experiment; no name lists them\n"
               "  snapshot-info <path>     print snapshot metadata\n"
               "  fit <series.csv> [tau]   fit decay exponents to an emitted series\n"
               "\n"
               "FRFLOW_OUTPUT_ROOT reroots relative output directories.\n"
               "Exit codes: 0 ok, 2 validation error, 3 numerical failure.\n");
  return to == stdout ? 0 : 2;
}

void report(const frflow::RunOutputs& out) {
  std::printf("wrote %zu diagnostic rows to %s\n", out.series.size(),
              out.directory.c_str());
}

int dispatch(int argc, char** argv) {
  const std::string cmd = argc > 1 ? argv[1] : "";
  if (cmd == "help" || cmd == "--help" || cmd == "-h") return usage(stdout);
  if (cmd == "run") {
    if (argc != 3) return usage(stderr);
    report(frflow::run_experiment(frflow::parse_config_file(argv[2])));
    return 0;
  }
  if (cmd == "preset") {
    if (argc == 2) {
      for (const auto& name : frflow::list_presets())
        std::printf("%s\n", name.c_str());
      return 0;
    }
    if (argc != 3) return usage(stderr);
    report(frflow::run_experiment(
        frflow::parse_config(frflow::preset_config_text(argv[2]))));
    return 0;
  }
  if (cmd == "snapshot-info") {
    if (argc != 3) return usage(stderr);
    frflow::Snapshot snap = frflow::read_snapshot(argv[2]);
    std::printf("n = %d\nbox = %.17g\nalpha = %.17g\nbeta = %.17g\ntime = %.17g\n",
                snap.params.grid.n, snap.params.grid.box_length,
                snap.params.alpha, snap.params.beta, snap.time);
    for (const auto& [name, values] : snap.fields) {
      double lo = values[0], hi = values[0];
      for (double v : values) {
        if (v < lo) lo = v;
        if (v > hi) hi = v;
      }
      std::printf("field %s: min = %.17g, max = %.17g\n", name.c_str(), lo, hi);
    }
    return 0;
  }
  if (cmd == "fit") {
    if (argc != 3 && !(argc == 4 && std::string(argv[3]) == "tau"))
      return usage(stderr);
    auto rows = frflow::read_series_csv(argv[2]);
    auto mode = argc == 4 ? frflow::FitMode::kTau : frflow::FitMode::kLog1pT;
    std::fputs(frflow::fit_csv_text(frflow::fit_series(rows, mode)).c_str(),
               stdout);
    return 0;
  }
  return usage(stderr);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const frflow::ValidationError& e) {
    std::fprintf(stderr, "frflow: %s\n", e.what());
    return 2;
  } catch (const frflow::NumericalError& e) {
    std::fprintf(stderr, "frflow: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "frflow: unexpected: %s\n", e.what());
    return 1;
  }
}
