#include "frflow/semigroup.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <utility>

#include "frflow/errors.h"
#include "frflow/resample.h"
#include "frflow/transform.h"

namespace frflow {

void validate_semigroup_params(const SemigroupParams& p) {
  if (!(p.alpha > 1.0) || !(p.alpha <= 2.0))
    throw ValidationError("semigroup: alpha must lie in (1, 2], got " +
                          std::to_string(p.alpha));
  if (!(p.beta >= 0.0) || !(p.beta < 2.0))
    throw ValidationError("semigroup: beta must lie in [0, 2), got " +
                          std::to_string(p.beta));
  const double temp_shift = 1.0 - 1.0 / p.alpha;
  if (!(std::abs(p.shift) <= 1e-12 ||
        std::abs(p.shift - temp_shift) <= 1e-12))
    throw ValidationError(
        "semigroup: shift must be 0 or 1 - 1/alpha, got " +
        std::to_string(p.shift));
}

double semigroup_rate(const SemigroupParams& p) {
  return 1.0 - (3.0 - p.beta) / p.alpha;
}

double a_of_tau(double tau) {
  if (!(tau >= 0.0))
    throw ValidationError("a_of_tau: tau must be nonnegative");
  // -expm1 keeps a(tau) + exp(-tau) = 1 exact.
  return -std::expm1(-tau);
}

SpectralField apply_semigroup(const SpectralField& f, double tau,
                              const SemigroupParams& p,
                              std::vector<std::string>* warnings) {
  validate_semigroup_params(p);
  if (!(tau >= 0.0))
    throw ValidationError("apply_semigroup: tau must be nonnegative");
  if (tau == 0.0) return f;

  const GridSpec& g = f.grid;
  const double s = std::exp(-tau / p.alpha);
  const double a = a_of_tau(tau);
  const double pref = std::exp((semigroup_rate(p) + p.shift) * tau);

  const double guard = p.alpha * std::log(g.n / 8.0);
  if (tau > guard) {
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "apply_semigroup: tau=%g exceeds the resolution guard %.3g "
                  "for n=%d; the compressed spectrum falls inside the lowest "
                  "shells and accuracy degrades",
                  tau, guard, g.n);
    if (warnings)
      warnings->push_back(buf);
    else
      std::fprintf(stderr, "%s\n", buf);
  }

  SpectrumSampler sampler(f, p.alpha);
  SpectralField out = make_spectral_field(g);
  for (int a1 = 0; a1 < g.n; ++a1) {
    const double k1 = g.wavenumber(a1);
    for (int a2 = 0; a2 < g.n; ++a2) {
      const double k2 = g.wavenumber(a2);
      const double kk = std::hypot(k1, k2);
      const double env = std::exp(-a * std::pow(kk, p.alpha));
      out.at(a1, a2) = pref * env * sampler(s * k1, s * k2);
    }
  }
  return out;
}

GradientCommuted apply_semigroup_gradient_commuted(
    const SpectralField& f, double tau, const SemigroupParams& p, int axis,
    std::vector<std::string>* warnings) {
  SpectralField after =
      spectral_gradient(apply_semigroup(f, tau, p, warnings), axis);
  SpectralField before =
      apply_semigroup(spectral_gradient(f, axis), tau, p, warnings);
  const double scale = std::exp(tau / p.alpha);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < after.coeffs.size(); ++i) {
    const std::complex<double> d = after.coeffs[i] - scale * before.coeffs[i];
    num += std::norm(d);
    den += std::norm(after.coeffs[i]);
  }
  const double rel = den > 0.0 ? std::sqrt(num / den) : 0.0;
  return {std::move(after), rel};
}

ScalarField project_P0(const ScalarField& f, const KernelTable& kt) {
  // Spectral synthesis puts the profile's discrete mass at exactly 1, which
  // makes the projector idempotent to round-off rather than just to the
  // stated tolerance.
  ScalarField g = kernel_field(f.grid, kt.alpha, 1.0, KernelWhich::G);
  const double m = mass(f);
  for (double& v : g.values) v *= m;
  return g;
}

ScalarField project_Q0(const ScalarField& f, const KernelTable& kt) {
  ScalarField p0 = project_P0(f, kt);
  ScalarField out = f;
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] -= p0.values[i];
  return out;
}

namespace {

double probe_norm(const SpectralField& f, ProbeWeight weight) {
  if (weight == ProbeWeight::kL2) {
    double s = 0.0;
    for (const auto& c : f.coeffs) s += std::norm(c);
    return f.grid.box_length * std::sqrt(s);
  }
  const ScalarField phys = inverse_transform(f);
  const GridSpec& g = phys.grid;
  const double h2 = g.spacing() * g.spacing();
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double x1 = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      const double x2 = g.coord(j);
      const double w = 1.0 + x1 * x1 + x2 * x2;
      const double v = phys.at(i, j);
      s += w * w * v * v * h2;
    }
  }
  return std::sqrt(s);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= x.size();
  ym /= y.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - xm) * (y[i] - ym);
    den += (x[i] - xm) * (x[i] - xm);
  }
  if (den == 0.0)
    throw ValidationError("decay fit: tau samples must not coincide");
  return num / den;
}

// Box-Muller on raw uniforms so the stream does not depend on the standard
// library's normal_distribution implementation.
double std_normal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = 0.0;
  do {
    a = u(rng);
  } while (a <= 0.0);
  const double b = u(rng);
  return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
}

// Band-limited Hermitian noise shaped by a Gaussian envelope in physical
// space. Concentration keeps the off-lattice spectral interpolation in its
// accurate regime.
ScalarField random_concentrated(const GridSpec& grid, std::mt19937_64& rng,
                                int jmax, double sigma) {
  SpectralField coeffs = make_spectral_field(grid);
  const int n = grid.n;
  for (int j1 = -jmax; j1 <= jmax; ++j1) {
    for (int j2 = -jmax; j2 <= jmax; ++j2) {
      const bool upper = j1 > 0 || (j1 == 0 && j2 > 0);
      if (!upper) continue;
      const std::complex<double> z(std_normal(rng), std_normal(rng));
      const int a1 = j1 >= 0 ? j1 : j1 + n;
      const int a2 = j2 >= 0 ? j2 : j2 + n;
      const int b1 = -j1 >= 0 ? -j1 : -j1 + n;
      const int b2 = -j2 >= 0 ? -j2 : -j2 + n;
      coeffs.at(a1, a2) = z;
      coeffs.at(b1, b2) = std::conj(z);
    }
  }
  ScalarField field = inverse_transform(coeffs);
  for (int i = 0; i < n; ++i) {
    const double x1 = grid.coord(i);
    for (int j = 0; j < n; ++j) {
      const double x2 = grid.coord(j);
      field.at(i, j) *= std::exp(-(x1 * x1 + x2 * x2) / (2.0 * sigma * sigma));
    }
  }
  return field;
}

}  // namespace

double probe_decay_rate_of(const SpectralField& f, const SemigroupParams& p,
                           ProbeWeight weight,
                           const std::vector<double>& tau_samples) {
  validate_semigroup_params(p);
  if (tau_samples.size() < 2)
    throw ValidationError("probe_decay_rate: need at least two tau samples");
  std::vector<std::string> sink;
  std::vector<double> logs;
  logs.reserve(tau_samples.size());
  for (double tau : tau_samples) {
    const SpectralField out = apply_semigroup(f, tau, p, &sink);
    const double nrm = probe_norm(out, weight);
    if (!(nrm > 0.0) || !std::isfinite(std::log(nrm)))
      throw NumericalError("probe_decay_rate: norm underflow at tau=" +
                           std::to_string(tau));
    logs.push_back(std::log(nrm));
  }
  return fit_slope(tau_samples, logs);
}

double probe_decay_rate(const SemigroupParams& p, const GridSpec& grid,
                        bool mean_zero, ProbeWeight weight,
                        const std::vector<double>& tau_samples,
                        unsigned seed) {
  validate_semigroup_params(p);
  if (tau_samples.size() < 2)
    throw ValidationError("probe_decay_rate: need at least two tau samples");
  double tmin = tau_samples.front(), tmax = tau_samples.front();
  for (double t : tau_samples) {
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  if (tmin > 1.0 + 1e-9 || tmax < 6.0 - 1e-9)
    throw ValidationError("probe_decay_rate: tau samples must cover [1, 6]");

  const int jmax = std::min(8, grid.n / 4);

  // Lattice samples of the stable profile spectrum: the mass eigenmode.
  SpectralField profile = make_spectral_field(grid);
  {
    const double inv_l2 = 1.0 / (grid.box_length * grid.box_length);
    for (int a1 = 0; a1 < grid.n; ++a1) {
      const double k1 = grid.wavenumber(a1);
      for (int a2 = 0; a2 < grid.n; ++a2) {
        const double k2 = grid.wavenumber(a2);
        profile.at(a1, a2) =
            std::exp(-std::pow(std::hypot(k1, k2), p.alpha)) * inv_l2;
      }
    }
  }
  double prof_norm = 0.0;
  for (const auto& c : profile.coeffs) prof_norm += std::norm(c);
  prof_norm = std::sqrt(prof_norm);

  std::vector<SpectralField> members;
  for (int e = 0; e < 3; ++e) {
    std::mt19937_64 rng(seed + 7919u * static_cast<unsigned>(e));
    for (int rep = 0; rep < (mean_zero ? 2 : 1); ++rep) {
      SpectralField fl =
          forward_transform(random_concentrated(grid, rng, jmax, 2.5));
      if (mean_zero) {
        // Exact removal of the mass mode: subtracting the profile multiple
        // makes the sampled spectrum vanish smoothly at the origin. Zeroing
        // the single k=0 node instead leaves a one-node dip the interpolant
        // rightly smooths over, which fakes surviving mass.
        const std::complex<double> m = fl.coeffs[0] / profile.coeffs[0];
        SpectralField member = fl;
        for (std::size_t i = 0; i < member.coeffs.size(); ++i)
          member.coeffs[i] -= m * profile.coeffs[i];
        members.push_back(std::move(member));
      } else {
        // Profile plus an antithetic pair of fluctuations. Averaging the pair
        // cancels the profile-fluctuation cross term in the norm to first
        // order, so the fitted slope approaches the mass-mode rate from
        // below instead of wobbling around it with the seed.
        double fn = 0.0;
        for (const auto& c : fl.coeffs) fn += std::norm(c);
        const double scale =
            fn > 0.0 ? 0.3 * prof_norm / std::sqrt(fn) : 0.0;
        SpectralField plus = profile, minus = profile;
        for (std::size_t i = 0; i < plus.coeffs.size(); ++i) {
          plus.coeffs[i] += scale * fl.coeffs[i];
          minus.coeffs[i] -= scale * fl.coeffs[i];
        }
        members.push_back(std::move(plus));
        members.push_back(std::move(minus));
      }
    }
  }

  std::vector<double> mean_logs(tau_samples.size(), 0.0);
  std::vector<std::string> sink;
  for (const SpectralField& member : members) {
    for (std::size_t t = 0; t < tau_samples.size(); ++t) {
      const SpectralField out = apply_semigroup(member, tau_samples[t], p, &sink);
      const double nrm = probe_norm(out, weight);
      if (!(nrm > 0.0) || !std::isfinite(std::log(nrm)))
        throw NumericalError("probe_decay_rate: norm underflow at tau=" +
                             std::to_string(tau_samples[t]));
      mean_logs[t] += std::log(nrm) / members.size();
    }
  }
  return fit_slope(tau_samples, mean_logs);
}

}  // namespace frflow
