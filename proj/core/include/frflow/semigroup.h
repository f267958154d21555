#pragma once

#include <string>
#include <vector>

#include "frflow/grid.h"
#include "frflow/kernels.h"

namespace frflow {

// Parameters of the linear evolution in self-similar variables. The drift
// eigenvalue lambda0 = 1 - (3 - beta)/alpha governs the mass mode; shift is
// an additive spectral offset used by the temperature equation of the coupled
// system and must be either 0 or 1 - 1/alpha.
struct SemigroupParams {
  double alpha = 1.5;
  double beta = 1.0;
  double shift = 0.0;
};

void validate_semigroup_params(const SemigroupParams& p);

// lambda0 without the shift contribution.
double semigroup_rate(const SemigroupParams& p);

// Envelope exponent a(tau) = 1 - exp(-tau). Satisfies the composition
// identity a(t1) + exp(-t1) a(t2) = a(t1 + t2) and a(tau) + exp(-tau) = 1 at
// round-off. Rejects negative tau.
double a_of_tau(double tau);

// Exact propagator: out(k) = e^{(lambda0 + shift) tau} e^{-a(tau)|k|^alpha}
// F(e^{-tau/alpha} k), with the compressed-argument evaluation delegated to
// SpectrumSampler. tau = 0 returns the input unchanged. When tau exceeds
// alpha ln(n/8) the compressed spectrum collapses into the first few shells
// and a warning is appended to `warnings` (or written to stderr when null);
// the value is still computed.
SpectralField apply_semigroup(const SpectralField& f, double tau,
                              const SemigroupParams& p,
                              std::vector<std::string>* warnings = nullptr);

struct GradientCommuted {
  SpectralField field;      // derivative applied after the propagator
  double rel_discrepancy;   // vs e^{tau/alpha} (propagator after derivative)
};

// Checks the commutation relation grad e^{tau L} = e^{tau/alpha} e^{tau L}
// grad by evaluating both orderings; returns the derivative-after route and
// the relative l2 gap between the two.
GradientCommuted apply_semigroup_gradient_commuted(
    const SpectralField& f, double tau, const SemigroupParams& p, int axis,
    std::vector<std::string>* warnings = nullptr);

// Spectral projection onto the mass mode: P0 f = mass(f) * G on the grid,
// with G synthesized spectrally so its discrete mass is exactly 1; Q0 is the
// complement. The pair is idempotent and complementary to round-off.
ScalarField project_P0(const ScalarField& f, const KernelTable& kt);
ScalarField project_Q0(const ScalarField& f, const KernelTable& kt);

enum class ProbeWeight { kL2, kL2Weighted2 };

// Least-squares slope of log-norm against tau for one field pushed through
// the propagator at the given sample times. Throws NumericalError if a norm
// underflows.
double probe_decay_rate_of(const SpectralField& f, const SemigroupParams& p,
                           ProbeWeight weight,
                           const std::vector<double>& tau_samples);

// Ensemble version used by the acceptance checks: builds seeded random
// initial data concentrated well inside the box (a mass-carrying bump plus a
// smaller fluctuation; the bump is dropped and the spectral mean removed when
// mean_zero is set), averages log-norms over members, and fits the decay
// slope. tau_samples must cover [1, 6].
double probe_decay_rate(const SemigroupParams& p, const GridSpec& grid,
                        bool mean_zero, ProbeWeight weight,
                        const std::vector<double>& tau_samples,
                        unsigned seed = 20240901u);

}  // namespace frflow
