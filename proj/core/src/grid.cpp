#include "frflow/grid.h"

#include <cmath>
#include <string>

#include "frflow/errors.h"

namespace frflow {

GridSpec make_grid(int n, double box_length) {
  if (n < 8 || n % 2 != 0)
    throw ValidationError("grid n must be even and at least 8, got " + std::to_string(n));
  if (!(box_length > 0.0))
    throw ValidationError("box_length must be positive, got " + std::to_string(box_length));
  return GridSpec{n, box_length};
}

ScalarField make_scalar_field(const GridSpec& grid) {
  return ScalarField{grid, std::vector<double>(static_cast<size_t>(grid.n) * grid.n, 0.0)};
}

SpectralField make_spectral_field(const GridSpec& grid) {
  return SpectralField{grid,
                       std::vector<std::complex<double>>(static_cast<size_t>(grid.n) * grid.n)};
}

double mass(const ScalarField& f) {
  // Plain Riemann sum; exact for band-limited data because the e^{ikx} sum
  // over the lattice vanishes for every nonzero representable k.
  double s = 0.0;
  for (double v : f.values) s += v;
  double h = f.grid.spacing();
  return s * h * h;
}

double mass(const SpectralField& f) {
  return f.coeffs[0].real() * f.grid.box_length * f.grid.box_length;
}

bool all_finite(const ScalarField& f) {
  for (double v : f.values)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

}  // namespace frflow
