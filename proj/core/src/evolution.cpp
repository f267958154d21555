#include "frflow/evolution.h"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "frflow/errors.h"
#include "frflow/transform.h"

namespace frflow {
namespace {

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[256];
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

std::vector<std::string> prognostics(const ModelParams& p) {
  if (is_boussinesq(p.variant)) return {"w", "theta"};
  return {"z"};
}

// Zeroth-order constant folded into the integrating factor. Folding all of it
// (including the -2/alpha picked up by writing the drift in divergence form)
// leaves the explicit right-hand side with an exactly zero mean, so the mass
// laws of the scaled equations hold at the semi-discrete level.
double diag_rate(const ModelParams& p, const std::string& name) {
  switch (p.variant) {
    case Variant::kSqgPhysical:
    case Variant::kBoussinesqPhysical:
      return 0.0;
    case Variant::kSqgScaled:
    case Variant::kLinearScaled:
      return 1.0 - (3.0 - p.beta) / p.alpha;
    case Variant::kBoussinesqScaled:
      return name == "w" ? 1.0 - 2.0 / p.alpha : 2.0 - 3.0 / p.alpha;
  }
  throw ValidationError("evolution: unknown variant");
}

// e^{h (c - |k|^alpha)} tables, cached per grid/exponent/step so long runs do
// not rebuild them every step. References into the map stay valid.
const std::vector<double>& envelope(const GridSpec& g, double alpha, double c,
                                    double h) {
  using Key = std::tuple<int, double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, std::vector<double>> cache;
  Key key{g.n, g.box_length, alpha, c, h};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> env(static_cast<size_t>(g.n) * g.n);
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      double kk = std::hypot(g.wavenumber(a), g.wavenumber(b));
      env[static_cast<size_t>(a) * g.n + b] = std::exp(h * (c - std::pow(kk, alpha)));
    }
  }
  return cache.emplace(key, std::move(env)).first->second;
}

void check_state(const SimState& s, const ModelParams& p) {
  auto names = prognostics(p);
  if (s.fields.size() != names.size())
    throw ValidationError(format("evolution: expected %zu field(s), got %zu",
                                 names.size(), s.fields.size()));
  for (const auto& name : names) {
    auto it = s.fields.find(name);
    if (it == s.fields.end())
      throw ValidationError("evolution: state is missing field '" + name + "'");
    if (!(it->second.grid == p.grid))
      throw ValidationError("evolution: field '" + name +
                            "' does not live on the model grid");
    if (!all_finite(it->second))
      throw NumericalError(format(
          "evolution: non-finite data in field '%s' at time %.17g (step %lld)",
          name.c_str(), s.time, s.step_count));
  }
}

struct NlOut {
  std::map<std::string, SpectralField> terms;
  double v_max = 0.0;  // advective speed including the drift, for the CFL check
};

// Divergence-form right-hand side. For scaled variants the drift is absorbed
// into the advecting velocity v = u - xi/alpha, so each component is a pure
// divergence plus (for the coupled system) the temperature gradient, and its
// k = 0 coefficient vanishes identically.
NlOut nonlinear_with_speed(const SimState& state, const ModelParams& p) {
  const GridSpec& g = p.grid;
  const int n = g.n;
  const size_t total = static_cast<size_t>(n) * n;
  const bool bsq = is_boussinesq(p.variant);
  const bool scaled = is_scaled(p.variant);

  std::vector<double> v1(total, 0.0), v2(total, 0.0);
  if (p.variant != Variant::kLinearScaled) {
    const SpectralField& active = bsq ? state.fields.at("w") : state.fields.at("z");
    auto [U1, U2] = biot_savart_velocity(active, p.beta);
    ScalarField u1 = inverse_transform(U1);
    ScalarField u2 = inverse_transform(U2);
    v1 = std::move(u1.values);
    v2 = std::move(u2.values);
  }
  if (scaled) {
    const double inv_alpha = 1.0 / p.alpha;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        v1[static_cast<size_t>(i) * n + j] -= g.coord(i) * inv_alpha;
        v2[static_cast<size_t>(i) * n + j] -= g.coord(j) * inv_alpha;
      }
    }
  }
  double v_max = 0.0;
  for (size_t i = 0; i < total; ++i)
    v_max = std::max(v_max, std::max(std::abs(v1[i]), std::abs(v2[i])));

  NlOut out;
  out.v_max = v_max;
  for (const auto& name : prognostics(p)) {
    ScalarField q = inverse_transform(state.fields.at(name));
    ScalarField p1 = make_scalar_field(g);
    ScalarField p2 = make_scalar_field(g);
    for (size_t i = 0; i < total; ++i) {
      p1.values[i] = v1[i] * q.values[i];
      p2.values[i] = v2[i] * q.values[i];
    }
    SpectralField d1 = spectral_gradient(forward_transform(p1), 1);
    SpectralField d2 = spectral_gradient(forward_transform(p2), 2);
    SpectralField term = make_spectral_field(g);
    for (size_t i = 0; i < total; ++i) term.coeffs[i] = -(d1.coeffs[i] + d2.coeffs[i]);
    if (bsq && name == "w") {
      SpectralField dtheta = spectral_gradient(state.fields.at("theta"), 1);
      for (size_t i = 0; i < total; ++i) term.coeffs[i] += dtheta.coeffs[i];
    }
    dealias_inplace(term);
    out.terms.emplace(name, std::move(term));
  }
  return out;
}

double exponent_of(ScalingKind kind, double alpha, double beta) {
  switch (kind) {
    case ScalingKind::kSqgZ:
      return 1.0 + (beta - 1.0) / alpha;
    case ScalingKind::kVorticity:
      return 1.0;
    case ScalingKind::kTemperature:
      return 2.0 - 1.0 / alpha;
  }
  throw ValidationError("evolution: unknown scaling kind");
}

// Zero-padded spectrum on a 4x finer grid of the same box; exact for
// band-limited data up to transform round-off.
ScalarField refine4(const ScalarField& f) {
  const int n = f.grid.n;
  const int m = 4 * n;
  SpectralField coarse = forward_transform(f);
  SpectralField fine = make_spectral_field(make_grid(m, f.grid.box_length));
  for (int a = 0; a < n; ++a) {
    int j1 = f.grid.freq(a);
    int s1 = j1 >= 0 ? j1 : j1 + m;
    for (int b = 0; b < n; ++b) {
      int j2 = f.grid.freq(b);
      int s2 = j2 >= 0 ? j2 : j2 + m;
      fine.at(s1, s2) = coarse.at(a, b);
    }
  }
  return inverse_transform(fine);
}

// Periodic 8-point Lagrange interpolation in each direction. The scaled
// field narrows as t grows, so the stencil order carries the round-trip
// budget, not the refinement factor.
double sample_lagrange(const ScalarField& g, double x, double y) {
  constexpr int kPts = 8;
  const int n = g.grid.n;
  const double h = g.grid.spacing();
  auto axis = [&](double coord, std::array<int, kPts>& idx,
                  std::array<double, kPts>& w) {
    double u = (coord + 0.5 * g.grid.box_length) / h;
    double base = std::floor(u);
    double t = u - base;  // in [0, 1), between stencil nodes 3 and 4
    int b = static_cast<int>(base);
    for (int s = 0; s < kPts; ++s) {
      int raw = b - 3 + s;
      idx[s] = ((raw % n) + n) % n;
      double node = static_cast<double>(s - 3);
      double prod = 1.0;
      for (int m = 0; m < kPts; ++m) {
        if (m == s) continue;
        prod *= (t - static_cast<double>(m - 3)) /
                (node - static_cast<double>(m - 3));
      }
      w[s] = prod;
    }
  };
  std::array<int, kPts> ix, iy;
  std::array<double, kPts> wx, wy;
  axis(x, ix, wx);
  axis(y, iy, wy);
  double acc = 0.0;
  for (int a = 0; a < kPts; ++a) {
    double row = 0.0;
    for (int b = 0; b < kPts; ++b) row += wy[b] * g.at(ix[a], iy[b]);
    acc += wx[a] * row;
  }
  return acc;
}

void validate_scaling_args(const ScalarField& f, double t, double alpha,
                           double beta) {
  make_grid(f.grid.n, f.grid.box_length);
  if (!(t >= 0.0))
    throw ValidationError(format("scaling map: t must be >= 0, got %g", t));
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw ValidationError(format("scaling map: alpha must lie in (1, 2], got %g", alpha));
  if (!(beta >= 0.0 && beta < 2.0))
    throw ValidationError(format("scaling map: beta must lie in [0, 2), got %g", beta));
}

double gauss(std::mt19937_64& rng) {
  // Explicit Box-Muller on raw uniforms so draws are library independent.
  double u1 = 0.0;
  do {
    u1 = std::ldexp(static_cast<double>(rng() >> 11), -53);
  } while (u1 <= 0.0);
  double u2 = std::ldexp(static_cast<double>(rng() >> 11), -53);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

bool is_boussinesq(Variant v) {
  return v == Variant::kBoussinesqPhysical || v == Variant::kBoussinesqScaled;
}

bool is_scaled(Variant v) {
  return v == Variant::kSqgScaled || v == Variant::kBoussinesqScaled ||
         v == Variant::kLinearScaled;
}

ModelParams make_model_params(Variant variant, double alpha, double beta,
                              const GridSpec& grid,
                              std::vector<std::string>* warnings) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw ValidationError(format("evolution: alpha must lie in (1, 2], got %g", alpha));
  if (!(beta >= 0.0 && beta < 2.0))
    throw ValidationError(format("evolution: beta must lie in [0, 2), got %g", beta));
  make_grid(grid.n, grid.box_length);
  ModelParams p{variant, alpha, beta, grid};
  if (is_boussinesq(variant) && beta != 1.0) {
    p.beta = 1.0;
    if (warnings)
      warnings->push_back(format(
          "evolution: beta forced to 1 for the coupled system (got %g)", beta));
  }
  if ((variant == Variant::kSqgPhysical || variant == Variant::kSqgScaled) &&
      alpha + beta > 3.0 + 1e-12 && warnings) {
    warnings->push_back(
        format("evolution: alpha + beta = %g exceeds 3; outside the scalar "
               "decay regime, results are exploratory",
               alpha + beta));
  }
  if (is_boussinesq(variant) && alpha >= 1.5 && warnings) {
    warnings->push_back(
        format("evolution: alpha = %g outside (1, 3/2); outside the coupled "
               "decay regime, results are exploratory",
               alpha));
  }
  return p;
}

SimState make_state(const ModelParams& p, const ScalarField& z) {
  if (is_boussinesq(p.variant))
    throw ValidationError("evolution: the coupled system needs two fields");
  if (!(z.grid == p.grid))
    throw ValidationError("evolution: initial field does not live on the model grid");
  SimState s;
  s.fields.emplace("z", dealias(forward_transform(z)));
  return s;
}

SimState make_state(const ModelParams& p, const ScalarField& w,
                    const ScalarField& theta) {
  if (!is_boussinesq(p.variant))
    throw ValidationError("evolution: the scalar model takes a single field");
  if (!(w.grid == p.grid) || !(theta.grid == p.grid))
    throw ValidationError("evolution: initial fields do not live on the model grid");
  SimState s;
  s.fields.emplace("w", dealias(forward_transform(w)));
  s.fields.emplace("theta", dealias(forward_transform(theta)));
  return s;
}

ScalarField gaussian_bump(const GridSpec& grid, double amplitude, double sigma,
                          std::array<double, 2> center) {
  make_grid(grid.n, grid.box_length);
  if (!(sigma > 0.0))
    throw ValidationError(format("gaussian_bump: sigma must be > 0, got %g", sigma));
  ScalarField f = make_scalar_field(grid);
  for (int i = 0; i < grid.n; ++i) {
    double dx = grid.coord(i) - center[0];
    for (int j = 0; j < grid.n; ++j) {
      double dy = grid.coord(j) - center[1];
      f.at(i, j) = amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  return f;
}

ScalarField dipole_bump(const GridSpec& grid, double amplitude, double sigma,
                        std::array<double, 2> center) {
  ScalarField f = gaussian_bump(grid, amplitude, sigma, center);
  for (int i = 0; i < grid.n; ++i) {
    double dx = grid.coord(i) - center[0];
    for (int j = 0; j < grid.n; ++j) f.at(i, j) *= -dx / (sigma * sigma);
  }
  return f;
}

ScalarField random_band_limited(const GridSpec& grid, int jmax,
                                double amplitude, unsigned seed) {
  make_grid(grid.n, grid.box_length);
  if (jmax < 1 || jmax > grid.n / 3)
    throw ValidationError(format(
        "random_band_limited: jmax must lie in [1, n/3] so the field is "
        "dealiased, got %d",
        jmax));
  if (!(amplitude > 0.0))
    throw ValidationError(format("random_band_limited: amplitude must be > 0, got %g",
                                 amplitude));
  std::mt19937_64 rng(seed);
  SpectralField F = make_spectral_field(grid);
  auto slot = [&](int j) { return j >= 0 ? j : j + grid.n; };
  for (int j1 = 0; j1 <= jmax; ++j1) {
    for (int j2 = -jmax; j2 <= jmax; ++j2) {
      if (j1 == 0 && j2 < 0) continue;
      if (j1 == 0 && j2 == 0) {
        F.at(0, 0) = gauss(rng);
        continue;
      }
      std::complex<double> c(gauss(rng), gauss(rng));
      F.at(slot(j1), slot(j2)) = c;
      F.at(slot(-j1), slot(-j2)) = std::conj(c);
    }
  }
  ScalarField f = inverse_transform(F);
  double peak = 0.0;
  for (double v : f.values) peak = std::max(peak, std::abs(v));
  double scale = amplitude / peak;
  for (double& v : f.values) v *= scale;
  return f;
}

std::map<std::string, SpectralField> nonlinear_term(const SimState& state,
                                                    const ModelParams& p) {
  check_state(state, p);
  return nonlinear_with_speed(state, p).terms;
}

SimState step(const SimState& state, const ModelParams& p, double dt) {
  if (!(dt > 0.0) || dt > 1.0)
    throw ValidationError(format("step: dt must lie in (0, 1], got %g", dt));
  check_state(state, p);
  const double h = dt;
  const size_t total = static_cast<size_t>(p.grid.n) * p.grid.n;
  auto names = prognostics(p);

  NlOut n1 = nonlinear_with_speed(state, p);
  double courant = n1.v_max * dt / p.grid.spacing();
  if (courant > 0.5)
    throw NumericalError(format(
        "step: CFL violation at time %.17g: advective Courant number %.3g > 0.5 "
        "(max speed %.3g, dt %g, spacing %g)",
        state.time, courant, n1.v_max, dt, p.grid.spacing()));

  std::map<std::string, const std::vector<double>*> Eh, Eh2;
  for (const auto& name : names) {
    double c = diag_rate(p, name);
    Eh[name] = &envelope(p.grid, p.alpha, c, h);
    Eh2[name] = &envelope(p.grid, p.alpha, c, 0.5 * h);
  }

  auto stage_state = [&](auto&& fill) {
    SimState s;
    s.time = state.time;
    for (const auto& name : names) {
      SpectralField f = make_spectral_field(p.grid);
      fill(name, f.coeffs);
      s.fields.emplace(name, std::move(f));
    }
    return s;
  };

  SimState s2 = stage_state([&](const std::string& name, auto& out) {
    const auto& y = state.fields.at(name).coeffs;
    const auto& k1 = n1.terms.at(name).coeffs;
    const auto& e = *Eh2[name];
    for (size_t i = 0; i < total; ++i) out[i] = e[i] * (y[i] + 0.5 * h * k1[i]);
  });
  NlOut n2 = nonlinear_with_speed(s2, p);

  SimState s3 = stage_state([&](const std::string& name, auto& out) {
    const auto& y = state.fields.at(name).coeffs;
    const auto& k2 = n2.terms.at(name).coeffs;
    const auto& e = *Eh2[name];
    for (size_t i = 0; i < total; ++i) out[i] = e[i] * y[i] + 0.5 * h * k2[i];
  });
  NlOut n3 = nonlinear_with_speed(s3, p);

  SimState s4 = stage_state([&](const std::string& name, auto& out) {
    const auto& y = state.fields.at(name).coeffs;
    const auto& k3 = n3.terms.at(name).coeffs;
    const auto& ef = *Eh[name];
    const auto& eh = *Eh2[name];
    for (size_t i = 0; i < total; ++i) out[i] = ef[i] * y[i] + h * eh[i] * k3[i];
  });
  NlOut n4 = nonlinear_with_speed(s4, p);

  SimState out;
  out.time = state.time + dt;
  out.step_count = state.step_count + 1;
  for (const auto& name : names) {
    const auto& y = state.fields.at(name).coeffs;
    const auto& k1 = n1.terms.at(name).coeffs;
    const auto& k2 = n2.terms.at(name).coeffs;
    const auto& k3 = n3.terms.at(name).coeffs;
    const auto& k4 = n4.terms.at(name).coeffs;
    const auto& ef = *Eh[name];
    const auto& eh = *Eh2[name];
    SpectralField f = make_spectral_field(p.grid);
    for (size_t i = 0; i < total; ++i) {
      f.coeffs[i] = ef[i] * y[i] +
                    (h / 6.0) * (ef[i] * k1[i] + 2.0 * eh[i] * (k2[i] + k3[i]) +
                                 k4[i]);
    }
    if (!all_finite(f))
      throw NumericalError(format(
          "step: non-finite data in field '%s' after the step ending at time "
          "%.17g (step %lld)",
          name.c_str(), out.time, out.step_count));
    out.fields.emplace(name, std::move(f));
  }
  return out;
}

SimState run(const ModelParams& p, const SimState& initial, double t_end,
             double dt, double observer_cadence, const RunObserver& observer) {
  if (!(dt > 0.0) || dt > 1.0)
    throw ValidationError(format("run: dt must lie in (0, 1], got %g", dt));
  if (!(observer_cadence > 0.0))
    throw ValidationError(
        format("run: observer_cadence must be > 0, got %g", observer_cadence));
  if (t_end < initial.time - 1e-12)
    throw ValidationError(format("run: t_end %.17g precedes the initial time %.17g",
                                 t_end, initial.time));
  check_state(initial, p);
  if (observer) observer(initial);

  const double t0 = initial.time;
  const double span = std::max(0.0, t_end - t0);
  if (span <= 1e-12 * std::max(1.0, std::abs(t_end))) return initial;

  long long n_full = static_cast<long long>(std::floor(span / dt + 1e-9));
  double rem = span - static_cast<double>(n_full) * dt;
  bool partial = rem > 1e-9 * dt;
  if (!partial) rem = 0.0;
  long long cadence_steps =
      std::max<long long>(1, std::llround(observer_cadence / dt));

  SimState state = initial;
  for (long long i = 0; i < n_full; ++i) {
    state = step(state, p, dt);
    state.time = t0 + static_cast<double>(i + 1) * dt;
    state.step_count = initial.step_count + i + 1;
    bool is_end = !partial && i + 1 == n_full;
    if (observer && (is_end || (i + 1) % cadence_steps == 0)) observer(state);
  }
  if (partial) {
    state = step(state, p, rem);
    state.time = t_end;
    state.step_count = initial.step_count + n_full + 1;
    if (observer) observer(state);
  }
  return state;
}

ScalarField scaled_from_physical(const ScalarField& z, double t, double alpha,
                                 double beta, ScalingKind kind) {
  validate_scaling_args(z, t, alpha, beta);
  const double lam = std::pow(1.0 + t, 1.0 / alpha);
  const double amp = std::pow(1.0 + t, exponent_of(kind, alpha, beta));
  ScalarField fine = refine4(z);
  ScalarField out = make_scalar_field(z.grid);
  const double half = 0.5 * z.grid.box_length;
  for (int i = 0; i < z.grid.n; ++i) {
    double x1 = lam * z.grid.coord(i);
    for (int j = 0; j < z.grid.n; ++j) {
      double x2 = lam * z.grid.coord(j);
      // The dilated coordinate can leave the physical box; there is no data
      // there, and wrapping instead would imprint period-L/lambda copies
      // whose box-incommensurate seam pollutes the whole spectrum.
      if (std::abs(x1) > half || std::abs(x2) > half) continue;
      out.at(i, j) = amp * sample_lagrange(fine, x1, x2);
    }
  }
  return out;
}

ScalarField physical_from_scaled(const ScalarField& scaled, double t,
                                 double alpha, double beta, ScalingKind kind) {
  validate_scaling_args(scaled, t, alpha, beta);
  const double lam = std::pow(1.0 + t, 1.0 / alpha);
  const double amp = std::pow(1.0 + t, exponent_of(kind, alpha, beta));
  ScalarField fine = refine4(scaled);
  ScalarField out = make_scalar_field(scaled.grid);
  for (int i = 0; i < scaled.grid.n; ++i) {
    double x1 = scaled.grid.coord(i) / lam;
    for (int j = 0; j < scaled.grid.n; ++j) {
      double x2 = scaled.grid.coord(j) / lam;
      out.at(i, j) = sample_lagrange(fine, x1, x2) / amp;
    }
  }
  return out;
}

}  // namespace frflow
