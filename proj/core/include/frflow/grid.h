#pragma once

#include <complex>
#include <vector>

namespace frflow {

// Uniform n x n grid on the square [-L/2, L/2)^2, periodic in both directions.
// Physical sample (i, j) sits at (i*L/n - L/2, j*L/n - L/2). Spectral storage
// follows the usual FFT layout: slot a of a given axis holds the integer
// frequency j1 = a for a <= n/2 - 1 and j1 = a - n above that, with
// wavenumber k = (2*pi/L) * j1.
struct GridSpec {
  int n = 0;
  double box_length = 0.0;

  double spacing() const { return box_length / n; }
  double coord(int i) const { return i * spacing() - 0.5 * box_length; }
  int freq(int a) const { return a <= n / 2 - 1 ? a : a - n; }
  double wavenumber(int a) const { return 2.0 * 3.14159265358979323846 / box_length * freq(a); }

  bool operator==(const GridSpec&) const = default;
};

// Throws ValidationError unless n is even, n >= 8, and box_length > 0.
GridSpec make_grid(int n, double box_length);

// Real samples, row major: values[i * n + j] at (coord(i), coord(j)).
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  double& at(int i, int j) { return values[static_cast<size_t>(i) * grid.n + j]; }
  double at(int i, int j) const { return values[static_cast<size_t>(i) * grid.n + j]; }
};

// Fourier coefficients c_k of f(x) = sum_k c_k exp(i k . x), with
// c_k = L^{-2} integral of f(x) exp(-i k . x). Storage coeffs[a * n + b]
// holds the mode with frequencies (freq(a), freq(b)).
struct SpectralField {
  GridSpec grid;
  std::vector<std::complex<double>> coeffs;

  std::complex<double>& at(int a, int b) { return coeffs[static_cast<size_t>(a) * grid.n + b]; }
  std::complex<double> at(int a, int b) const { return coeffs[static_cast<size_t>(a) * grid.n + b]; }
};

ScalarField make_scalar_field(const GridSpec& grid);
SpectralField make_spectral_field(const GridSpec& grid);

// Integral of the field over the box. Spectrally this is L^2 * c_0.
double mass(const ScalarField& f);
double mass(const SpectralField& f);

// True when every entry is finite.
bool all_finite(const ScalarField& f);
bool all_finite(const SpectralField& f);

}  // namespace frflow
