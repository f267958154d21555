#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frflow/grid.h"

namespace frflow {

// One telemetry row for a run. Norms are cell-area quadratures of the
// physical field. The profile errors measure the distance to the self-similar
// expansion and are NaN when the run has no profile to compare against; aux
// carries extras keyed by their output column name (u_max, low_shell_frac).
struct DiagnosticRecord {
  double time = 0.0;
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double weighted_l2_2 = 0.0;
  double profile_error_l1 = std::numeric_limits<double>::quiet_NaN();
  double profile_error_l2 = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, double> aux;
};

// Power-law fit of a norm series: exponent is the least-squares slope of
// log(value) against log(1+t), or against the time column itself for runs
// whose clock is already logarithmic. window is the time span of the samples
// the regression actually used.
struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double window_begin = 0.0;
  double window_end = 0.0;
};

enum class FitMode { kLog1pT, kTau };

struct TimeSample {
  double time = 0.0;
  double value = 0.0;
};

// L^p norm by grid sum times cell area. p must be 1, 2, or infinity; the sup
// norm is the raw grid max with no subgrid refinement.
double lp_norm(const ScalarField& f, double p);

// Norm with weight (1 + |x|^2)^m centered at the box center, m in {0, 1, 2}.
// m = 0 delegates to the plain L^2 norm bit for bit.
double weighted_l2m_norm(const ScalarField& f, int m);

// Quadrature centroid. Fields whose mass is below 1e-12 of their L^1 norm
// have no usable centroid and report the box center.
std::array<double, 2> center_of_mass(const ScalarField& f);

// L^p distance of z from the mass-weighted self-similar kernel at time t:
// z minus mass0 (1+t)^{-2/alpha} G(./(1+t)^{1/alpha}) centered at `center`.
// mass0 = 0 reduces to lp_norm(z, p). Appends a warning when the kernel scale
// (1+t)^{1/alpha} exceeds a third of the box and truncation starts to bite.
double profile_error_sqg(const ScalarField& z, double t, double mass0, double alpha,
                         double p, std::array<double, 2> center = {0.0, 0.0},
                         std::vector<std::string>* warnings = nullptr);

// Residual norms of the coupled system's expansion: the vorticity minus its
// two-term tail gamma2 (1+t)^{1-3/alpha} (d1 G) + gamma1 (1+t)^{-2/alpha} G,
// and the temperature minus gamma2 (1+t)^{-2/alpha} G, both in L^p and both
// centered at `center`. gamma1, gamma2 are the conserved initial masses of w
// and theta. Warning rule as in profile_error_sqg.
std::pair<double, double> profile_error_boussinesq(
    const ScalarField& w, const ScalarField& theta, double t, double gamma1,
    double gamma2, double alpha, double p, std::array<double, 2> center = {0.0, 0.0},
    std::vector<std::string>* warnings = nullptr);

// Ordinary least squares of log(value). Requires at least five samples with
// strictly increasing times and positive values. The default window keeps,
// among samples with t >= 1, the last 60% (widened to five when fewer would
// remain); a series that never reaches t = 1 is used whole. An explicit
// [begin, end] window overrides the default and must still cover five
// samples.
DecayFit fit_decay_exponent(const std::vector<TimeSample>& series, FitMode mode,
                            std::optional<std::pair<double, double>> window = std::nullopt);

// Sup over the grid of the advecting speed |u|, with u recovered from the
// field through the beta velocity law.
double max_speed(const SpectralField& z, double beta);

// Fraction of spectral energy in the shells max(|j1|, |j2|) <= 1. An empty
// spectrum reports 0.
double low_shell_fraction(const SpectralField& f);

}  // namespace frflow
