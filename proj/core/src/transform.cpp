#include "frflow/transform.h"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "frflow/errors.h"

namespace frflow {
namespace {

// One cached plan pair per grid size, executed against plan-owned buffers so
// alignment never depends on caller allocations. FFTW_ESTIMATE keeps the plan
// (and therefore every transform result) reproducible across runs. The mutex
// covers planning and execution; the project is single threaded by design and
// this just keeps the cache safe if tests ever parallelize.
struct PlanEntry {
  fftw_complex* buf_in = nullptr;
  fftw_complex* buf_out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  size_t count = 0;
};

std::mutex plan_mutex;

PlanEntry& plan_for(int n) {
  static std::map<int, PlanEntry> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  PlanEntry e;
  e.count = static_cast<size_t>(n) * n;
  e.buf_in = fftw_alloc_complex(e.count);
  e.buf_out = fftw_alloc_complex(e.count);
  e.forward = fftw_plan_dft_2d(n, n, e.buf_in, e.buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
  e.backward = fftw_plan_dft_2d(n, n, e.buf_in, e.buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return cache.emplace(n, e).first->second;
}

inline double parity(int a, int b) { return ((a + b) & 1) ? -1.0 : 1.0; }

}  // namespace

SpectralField forward_transform(const ScalarField& f) {
  const int n = f.grid.n;
  auto out = make_spectral_field(f.grid);
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanEntry& e = plan_for(n);
  for (size_t i = 0; i < e.count; ++i) {
    e.buf_in[i][0] = f.values[i];
    e.buf_in[i][1] = 0.0;
  }
  fftw_execute(e.forward);
  // The lattice sits at x = m h - L/2; the half-box offset contributes the
  // (-1)^{j1+j2} phase, and 1/n^2 turns the DFT sum into trapezoid coefficients.
  const double scale = 1.0 / (static_cast<double>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      size_t idx = static_cast<size_t>(a) * n + b;
      double s = scale * parity(a, b);
      out.coeffs[idx] = std::complex<double>(e.buf_out[idx][0] * s, e.buf_out[idx][1] * s);
    }
  return out;
}

ScalarField inverse_transform(const SpectralField& f) {
  const int n = f.grid.n;
  auto out = make_scalar_field(f.grid);
  std::lock_guard<std::mutex> lock(plan_mutex);
  PlanEntry& e = plan_for(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      size_t idx = static_cast<size_t>(a) * n + b;
      double s = parity(a, b);
      e.buf_in[idx][0] = f.coeffs[idx].real() * s;
      e.buf_in[idx][1] = f.coeffs[idx].imag() * s;
    }
  fftw_execute(e.backward);
  // Hermitian inputs produce an imaginary part at round-off level; drop it.
  for (size_t i = 0; i < e.count; ++i) out.values[i] = e.buf_out[i][0];
  return out;
}

namespace {

// Wavenumber for multiplication by i k. Zeroed on the Nyquist slot so odd
// multipliers keep real fields real; band-limited data never sees the
// difference.
inline double odd_wavenumber(const GridSpec& g, int a) {
  if (a == g.n / 2) return 0.0;
  return g.wavenumber(a);
}

void validate_symbol(const SymbolSpec& s) {
  switch (s.kind) {
    case SymbolKind::fractional_laplacian:
      if (!(s.alpha > 0.0 && s.alpha <= 2.0))
        throw ValidationError("fractional_laplacian alpha must lie in (0, 2], got " +
                              std::to_string(s.alpha));
      return;
    case SymbolKind::riesz_component:
      if (s.axis != 1 && s.axis != 2)
        throw ValidationError("riesz_component axis must be 1 or 2");
      return;
    case SymbolKind::neg_power:
      if (!(s.beta >= 0.0 && s.beta < 2.0))
        throw ValidationError("neg_power beta must lie in [0, 2), got " + std::to_string(s.beta));
      return;
    case SymbolKind::biot_savart_perp:
      if (!(s.beta >= 0.0 && s.beta < 2.0))
        throw ValidationError("biot_savart_perp beta must lie in [0, 2), got " +
                              std::to_string(s.beta));
      if (s.axis != 1 && s.axis != 2)
        throw ValidationError("biot_savart_perp axis must be 1 or 2");
      return;
  }
  throw ValidationError("unknown symbol kind");
}

}  // namespace

SpectralField apply_symbol(const SpectralField& f, const SymbolSpec& spec) {
  validate_symbol(spec);
  const int n = f.grid.n;
  auto out = make_spectral_field(f.grid);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double k1 = f.grid.wavenumber(a);
      double k2 = f.grid.wavenumber(b);
      double kk = std::hypot(k1, k2);
      std::complex<double> m;
      switch (spec.kind) {
        case SymbolKind::fractional_laplacian:
          m = std::pow(kk, spec.alpha);
          break;
        case SymbolKind::riesz_component: {
          if (kk == 0.0) break;
          double kc = odd_wavenumber(f.grid, spec.axis == 1 ? a : b);
          m = std::complex<double>(0.0, -kc / kk);
          break;
        }
        case SymbolKind::neg_power:
          if (kk == 0.0) break;
          m = std::pow(kk, -spec.beta);
          break;
        case SymbolKind::biot_savart_perp: {
          if (kk == 0.0) break;
          double w = std::pow(kk, -spec.beta - 1.0);
          if (spec.axis == 1)
            m = std::complex<double>(0.0, odd_wavenumber(f.grid, b) * w);
          else
            m = std::complex<double>(0.0, -odd_wavenumber(f.grid, a) * w);
          break;
        }
      }
      out.at(a, b) = m * f.at(a, b);
    }
  }
  return out;
}

SpectralField spectral_gradient(const SpectralField& f, int axis) {
  if (axis != 1 && axis != 2) throw ValidationError("gradient axis must be 1 or 2");
  const int n = f.grid.n;
  auto out = make_spectral_field(f.grid);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double kc = odd_wavenumber(f.grid, axis == 1 ? a : b);
      out.at(a, b) = std::complex<double>(0.0, kc) * f.at(a, b);
    }
  }
  return out;
}

std::pair<SpectralField, SpectralField> biot_savart_velocity(const SpectralField& z, double beta) {
  SymbolSpec s1{SymbolKind::biot_savart_perp, 0.0, beta, 1};
  SymbolSpec s2{SymbolKind::biot_savart_perp, 0.0, beta, 2};
  return {apply_symbol(z, s1), apply_symbol(z, s2)};
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_inplace(out);
  return out;
}

void dealias_inplace(SpectralField& f) {
  const int n = f.grid.n;
  for (int a = 0; a < n; ++a) {
    int j1 = std::abs(f.grid.freq(a));
    for (int b = 0; b < n; ++b) {
      int j2 = std::abs(f.grid.freq(b));
      if (3 * std::max(j1, j2) > n) f.at(a, b) = 0.0;
    }
  }
}

}  // namespace frflow
