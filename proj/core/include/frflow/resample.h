#pragma once

#include <array>
#include <complex>
#include <vector>

#include "frflow/grid.h"

namespace frflow {

// Evaluates a lattice spectrum between its nodes. The smooth part of the
// spectrum is interpolated by 8x8 tensor Lagrange stencils directly on the
// coarse lattice; the |q|^alpha cusp that every field with nonzero mass
// carries at the origin is captured separately by fitting localized radial
// templates |q|^{m alpha}, m = 1..4, over the low shells and adding them back
// analytically at the evaluation point. Lattice nodes reproduce exactly, in
// particular q = 0, which is what keeps the mass transport law at round-off.
//
// Trigonometric interpolation (zero-padded refinement) is the wrong tool
// here: it converges to the box-windowed transform, which for heavy-tailed
// fields differs from the smooth spectrum by the mass outside the box, far
// above the tolerances this project needs. Polynomial stencils converge to
// the smooth spectrum itself; their error scales with the spatial
// concentration of the field, so callers should keep fields well inside the
// box (physical extent within roughly a tenth of the box is comfortable).
//
// Valid evaluation points satisfy |q_i| <= (n/2 - 1) dk per component.
class SpectrumSampler {
 public:
  SpectrumSampler(const SpectralField& f, double alpha);

  std::complex<double> operator()(double q1, double q2) const;

 private:
  int n_ = 0;
  double dk_ = 0.0;
  double alpha_ = 0.0;
  double fit_radius_ = 0.0;       // lattice units
  double localizer_width_ = 0.0;  // lattice units
  bool use_cusp_ = false;
  std::array<std::complex<double>, 4> cusp_{};
  std::vector<std::complex<double>> node_;    // centered layout, raw values
  std::vector<std::complex<double>> smooth_;  // centered layout, cusp removed

  std::complex<double> node_at(int j1, int j2) const;
  void fit_cusp();
};

}  // namespace frflow
