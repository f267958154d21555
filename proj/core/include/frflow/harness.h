#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frflow/diagnostics.h"
#include "frflow/evolution.h"
#include "frflow/grid.h"

namespace frflow {

// Initial-condition request. Families: "gaussian", "dipole", "random"
// (band-limited Hermitian noise), "zero", and "snapshot" (resume from a file,
// in which case `path` is the only parameter that matters).
struct IcSpec {
  std::string family = "gaussian";
  double amplitude = 1.0;
  double sigma = 1.0;
  std::array<double, 2> center = {0.0, 0.0};
  int jmax = 8;
  unsigned seed = 1;
  std::string path;
};

// Fully resolved experiment description. parse_config is the only blessed
// constructor for external input; the fields are public so presets and tests
// can assemble configs directly.
struct RunConfig {
  Variant variant = Variant::kSqgPhysical;
  double alpha = 1.5;
  double beta = 1.0;
  int n = 128;
  double box_length = 64.0;
  double dt = 0.01;
  double t_end = 10.0;  // tau_end for scaled variants
  IcSpec ic;            // z, or w for the coupled system
  IcSpec ic_theta;      // coupled system only
  bool has_theta_ic = false;
  double cadence = 1.0;
  std::vector<double> profile_p = {1.0, 2.0};
  int expansion_order = -1;  // -1: resolve by variant (1 scalar, 2 coupled, 0 scaled)
  std::optional<std::array<double, 2>> profile_center;  // default: c.o.m. at start
  std::vector<double> snapshot_times;
  std::string output_dir;
  std::string label = "run";
};

// Line-oriented `key = value` text, `#` comments, fail-closed: unknown or
// duplicate keys and every out-of-range value are ValidationErrors carrying
// the offending line number.
RunConfig parse_config(const std::string& text);

// Reads the file and delegates to parse_config; the filename is prepended to
// error messages.
RunConfig parse_config_file(const std::string& path);

// Compiled-in experiment table ("smoke", "acceptance:..."). Returns the
// config text, so the CLI and the tests share one frozen source.
// ValidationError on unknown names; list_presets gives the valid ones.
std::string preset_config_text(const std::string& name);
std::vector<std::string> list_presets();

// On-disk state: magic "FRFL", version 1, little-endian metadata, then per
// field a tag byte and the n*n row-major real-space samples. The raw samples
// are kept verbatim so read-then-write reproduces a file byte for byte;
// state() synthesizes the spectral representation for resuming.
struct Snapshot {
  ModelParams params;
  double time = 0.0;
  std::vector<std::pair<std::string, std::vector<double>>> fields;

  SimState state() const;
};

void write_snapshot(const SimState& state, const ModelParams& params,
                    const std::string& path);
void write_snapshot(const Snapshot& snap, const std::string& path);
Snapshot read_snapshot(const std::string& path);

// One diagnostics row per observation time, in CSV column order.
struct SeriesRow {
  double time = 0.0;
  DiagnosticRecord rec;
};

struct RunOutputs {
  std::string directory;
  std::vector<SeriesRow> series;        // z or w
  std::vector<SeriesRow> series_theta;  // coupled system only
};

// Runs the experiment and writes series.csv, fit.csv, meta.txt, and any
// requested snapshots under the resolved output directory (the FRFLOW_OUTPUT_ROOT
// environment variable reroots relative directories). The coupled system gets
// a parallel series_theta.csv / fit_theta.csv pair. Deterministic per config;
// on any error a FAILED sentinel file with the message is left behind and the
// error is rethrown.
RunOutputs run_experiment(const RunConfig& cfg);

// Serialization helpers shared by run_experiment, the CLI `fit` command, and
// the tests. Values print with 17 significant digits; missing entries as nan.
std::string series_csv_header();
std::string series_csv_line(const SeriesRow& row);
std::vector<SeriesRow> read_series_csv(const std::string& path);

// Fits every decaying column of a series (l1, l2, linf, weighted_l2_2 and the
// profile errors when present) and reports one row per quantity; quantities
// that cannot be fitted carry the reason in `status` ("nonpositive values"
// for data touching zero) and NaN estimates.
struct FitRow {
  std::string quantity;
  DecayFit fit{};
  std::string status;  // "ok" or the rejection reason
};
std::vector<FitRow> fit_series(const std::vector<SeriesRow>& series, FitMode mode);
std::string fit_csv_text(const std::vector<FitRow>& rows);

}  // namespace frflow
