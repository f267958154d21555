#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <vector>

#include "frflow/grid.h"

namespace frflow {

// Radial table of the alpha-stable profile G, the inverse transform of
// exp(-|p|^alpha). Values come from Hankel quadrature at construction; between
// nodes we use cubic Hermite in log r with the exact slopes r G'(r). Beyond
// r_M = 100 a fitted two-term power tail C1 r^{-2-alpha} + C2 r^{-2-2alpha}
// takes over; truncating to zero there would corrupt the weighted norms.
struct KernelTable {
  double alpha = 0.0;
  std::vector<double> radii;           // r0 = 0, then log-spaced to 100
  std::vector<double> g_values;        // G(r_i)
  std::vector<double> g_prime_values;  // G'(r_i)
  double tail_exponent = 0.0;          // 2 + alpha
  double tail_constant = 0.0;          // C1, leading tail coefficient
  double tail_constant2 = 0.0;         // C2, next correction
  std::array<double, 4> small_r_moments{};  // M_1, M_3, M_5, M_7 for the r -> 0 series
  std::vector<double> g_prime_slopes;  // d(G')/d(ln r) at nodes, for interpolation
};

// Shared immutable table for this alpha, built on first use. alpha must lie in
// (1, 2]; alpha = 2 is the Gaussian reference case.
const KernelTable& kernel_table(double alpha);

// Profile value G(|xi|) at radius r and its radial derivative. Absolute error
// stays below 1e-8 for r <= 50 (in practice around 1e-11).
double eval_G(double r, double alpha);
double eval_dG(double r, double alpha);

enum class KernelWhich { G, dG1 };

// Samples of t^{-2/alpha} G(x / t^{1/alpha}), or of its first partial for
// dG1, centered at `center` on the torus. kernel_field synthesizes through the
// spectrum of exp(-t |k|^alpha), which periodizes the kernel and keeps its
// mass exactly one; kernel_field_table samples the radial table directly with
// minimum-image distances. The two agree away from the box edges to within the
// mass the kernel leaves outside the box.
ScalarField kernel_field(const GridSpec& grid, double alpha, double t_scale, KernelWhich which,
                         std::array<double, 2> center = {0.0, 0.0});
ScalarField kernel_field_table(const GridSpec& grid, double alpha, double t_scale,
                               KernelWhich which, std::array<double, 2> center = {0.0, 0.0});

// L^p norm of (1 + r^2)^{weight_power/2} G over the plane, radial quadrature
// on [0, radial_cutoff]. p may be infinity. weight_power 3 is a test-only
// extension whose norm diverges as the cutoff grows when alpha < 2; with the
// default infinite cutoff such divergent combinations return infinity.
double kernel_moment_norm(double alpha, double p, int weight_power,
                          double radial_cutoff = std::numeric_limits<double>::infinity());

// Plain text dump: "# alpha=<val>" header then "r value derivative" lines.
void dump_kernel_table(const KernelTable& table, std::ostream& os);

}  // namespace frflow
