#pragma once

#include <utility>

#include "frflow/grid.h"

namespace frflow {

// Forward and inverse transforms between the conventions documented in grid.h.
// Plans are FFTW_ESTIMATE only and cached per (n, direction); results are
// bit-reproducible across runs on the same build. Single threaded.
SpectralField forward_transform(const ScalarField& f);
ScalarField inverse_transform(const SpectralField& f);

// Fourier multipliers. All of them leave k = 0 untouched unless stated.
enum class SymbolKind {
  fractional_laplacian,  // |k|^alpha
  riesz_component,       // -i k_axis / |k|, 0 at k = 0
  neg_power,             // |k|^{-beta}, 0 at k = 0
  biot_savart_perp,      // axis 1: +i k_2 |k|^{-beta-1}; axis 2: -i k_1 |k|^{-beta-1}; 0 at k = 0
};

struct SymbolSpec {
  SymbolKind kind;
  double alpha = 0.0;  // fractional_laplacian, in (0, 2]
  double beta = 0.0;   // neg_power / biot_savart_perp, in [0, 2)
  int axis = 1;        // riesz_component / biot_savart_perp, 1 or 2
};

SpectralField apply_symbol(const SpectralField& f, const SymbolSpec& spec);

// d/dx_axis as the multiplier i k_axis. The Nyquist row/column of the factor is
// zeroed so real fields map to real fields; band-limited data is unaffected.
SpectralField spectral_gradient(const SpectralField& f, int axis);

// u = perp-gradient of the inverse |k|^{beta+1} power of z. With our sign
// conventions u_1 = +i k_2 |k|^{-beta-1} z, u_2 = -i k_1 |k|^{-beta-1} z, so at
// beta = 1 the scalar z is recovered as the curl d_1 u_2 - d_2 u_1.
std::pair<SpectralField, SpectralField> biot_savart_velocity(const SpectralField& z, double beta);

// Two-thirds rule: zeroes every mode with max(|j1|, |j2|) > n/3.
SpectralField dealias(const SpectralField& f);
void dealias_inplace(SpectralField& f);

}  // namespace frflow
