#include "frflow/diagnostics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "frflow/errors.h"
#include "frflow/kernels.h"
#include "frflow/transform.h"

namespace frflow {

namespace {

std::string format(const char* fmt, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

void check_field(const ScalarField& f, const char* who) {
  if (f.grid.n < 1 ||
      f.values.size() != static_cast<std::size_t>(f.grid.n) * f.grid.n)
    throw ValidationError(std::string(who) + ": field does not match its grid");
}

void check_p(double p, const char* who) {
  if (p != 1.0 && p != 2.0 && !std::isinf(p))
    throw ValidationError(std::string(who) + ": p must be 1, 2, or infinity");
}

// Shared truncation guard: the kernel's core has radius a few times
// (1+t)^{1/alpha}; once that scale passes a third of the box the discarded
// tail is no longer small against the residuals being measured.
void warn_if_underresolved(const GridSpec& g, double t, double alpha,
                           std::vector<std::string>* warnings) {
  if (!warnings) return;
  double scale = std::pow(1.0 + t, 1.0 / alpha);
  if (scale > g.box_length / 3.0)
    warnings->push_back(format(
        "profile scale %.3g exceeds a third of the box (L=%.3g); "
        "truncation makes the residual unreliable",
        scale, g.box_length));
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  check_field(f, "lp_norm");
  check_p(p, "lp_norm");
  if (std::isinf(p)) {
    double peak = 0.0;
    for (double v : f.values) peak = std::max(peak, std::abs(v));
    return peak;
  }
  const double area = f.grid.spacing() * f.grid.spacing();
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : f.values) sum += std::abs(v);
    return sum * area;
  }
  for (double v : f.values) sum += v * v;
  return std::sqrt(sum * area);
}

double weighted_l2m_norm(const ScalarField& f, int m) {
  check_field(f, "weighted_l2m_norm");
  if (m < 0 || m > 2)
    throw ValidationError("weighted_l2m_norm: m must be 0, 1, or 2");
  if (m == 0) return lp_norm(f, 2.0);
  const GridSpec& g = f.grid;
  const double area = g.spacing() * g.spacing();
  double sum = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      const double y = g.coord(j);
      double w = 1.0 + x * x + y * y;
      if (m == 2) w *= w;
      const double v = f.at(i, j);
      sum += w * v * v;
    }
  }
  return std::sqrt(sum * area);
}

std::array<double, 2> center_of_mass(const ScalarField& f) {
  check_field(f, "center_of_mass");
  const GridSpec& g = f.grid;
  double m = 0.0, mx = 0.0, my = 0.0, l1 = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coord(i);
    for (int j = 0; j < g.n; ++j) {
      const double v = f.at(i, j);
      m += v;
      mx += x * v;
      my += g.coord(j) * v;
      l1 += std::abs(v);
    }
  }
  if (l1 == 0.0 || std::abs(m) <= 1e-12 * l1) return {0.0, 0.0};
  return {mx / m, my / m};
}

double profile_error_sqg(const ScalarField& z, double t, double mass0, double alpha,
                         double p, std::array<double, 2> center,
                         std::vector<std::string>* warnings) {
  check_field(z, "profile_error_sqg");
  check_p(p, "profile_error_sqg");
  if (!(t >= 0.0))
    throw ValidationError("profile_error_sqg: t must be nonnegative");
  if (mass0 == 0.0) return lp_norm(z, p);
  warn_if_underresolved(z.grid, t, alpha, warnings);
  ScalarField profile = kernel_field(z.grid, alpha, 1.0 + t, KernelWhich::G, center);
  ScalarField residual = z;
  for (std::size_t i = 0; i < residual.values.size(); ++i)
    residual.values[i] -= mass0 * profile.values[i];
  return lp_norm(residual, p);
}

std::pair<double, double> profile_error_boussinesq(
    const ScalarField& w, const ScalarField& theta, double t, double gamma1,
    double gamma2, double alpha, double p, std::array<double, 2> center,
    std::vector<std::string>* warnings) {
  check_field(w, "profile_error_boussinesq");
  check_field(theta, "profile_error_boussinesq");
  if (!(w.grid == theta.grid))
    throw ValidationError("profile_error_boussinesq: fields on different grids");
  check_p(p, "profile_error_boussinesq");
  if (!(t >= 0.0))
    throw ValidationError("profile_error_boussinesq: t must be nonnegative");
  if (gamma1 != 0.0 || gamma2 != 0.0)
    warn_if_underresolved(w.grid, t, alpha, warnings);

  ScalarField w_res = w;
  if (gamma2 != 0.0) {
    // gamma2 (1+t)^{1-3/alpha} (d1 G)(./(1+t)^{1/alpha}) written through the
    // kernel sampler, whose dG1 branch carries the (1+t)^{-3/alpha} factor.
    ScalarField dg = kernel_field(w.grid, alpha, 1.0 + t, KernelWhich::dG1, center);
    const double c = gamma2 * (1.0 + t);
    for (std::size_t i = 0; i < w_res.values.size(); ++i)
      w_res.values[i] -= c * dg.values[i];
  }
  ScalarField g_term = make_scalar_field(w.grid);
  if (gamma1 != 0.0 || gamma2 != 0.0)
    g_term = kernel_field(w.grid, alpha, 1.0 + t, KernelWhich::G, center);
  if (gamma1 != 0.0)
    for (std::size_t i = 0; i < w_res.values.size(); ++i)
      w_res.values[i] -= gamma1 * g_term.values[i];

  ScalarField th_res = theta;
  if (gamma2 != 0.0)
    for (std::size_t i = 0; i < th_res.values.size(); ++i)
      th_res.values[i] -= gamma2 * g_term.values[i];

  return {lp_norm(w_res, p), lp_norm(th_res, p)};
}

DecayFit fit_decay_exponent(const std::vector<TimeSample>& series, FitMode mode,
                            std::optional<std::pair<double, double>> window) {
  if (series.size() < 5)
    throw ValidationError("decay fit: at least five samples required");
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!std::isfinite(series[i].time) || !std::isfinite(series[i].value))
      throw ValidationError("decay fit: samples must be finite");
    if (!(series[i].value > 0.0))
      throw ValidationError("decay fit: values must be positive");
    if (i > 0 && !(series[i].time > series[i - 1].time))
      throw ValidationError("decay fit: times must be strictly increasing");
  }

  std::size_t begin = 0, end = series.size();
  if (window) {
    if (!(window->first < window->second))
      throw ValidationError("decay fit: window must satisfy begin < end");
    while (begin < end && series[begin].time < window->first) ++begin;
    while (end > begin && series[end - 1].time > window->second) --end;
    if (end - begin < 5)
      throw ValidationError("decay fit: window holds fewer than five samples");
  } else {
    // Late-time default: theorems are asymptotic and the first instants hold
    // the transient, so fit the last 60% of the samples past t = 1.
    std::size_t first_late = 0;
    while (first_late < series.size() && series[first_late].time < 1.0)
      ++first_late;
    const std::size_t m = series.size() - first_late;
    if (m > 0) {
      std::size_t k = (3 * m + 4) / 5;  // ceil(0.6 m)
      k = std::max(k, std::min<std::size_t>(m, 5));
      begin = series.size() - k;
    }
  }

  double sx = 0.0, sy = 0.0;
  const std::size_t cnt = end - begin;
  std::vector<double> xs(cnt), ys(cnt);
  for (std::size_t i = begin; i < end; ++i) {
    const double x =
        mode == FitMode::kLog1pT ? std::log1p(series[i].time) : series[i].time;
    xs[i - begin] = x;
    ys[i - begin] = std::log(series[i].value);
    sx += x;
    sy += ys[i - begin];
  }
  const double xbar = sx / cnt, ybar = sy / cnt;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < cnt; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx == 0.0)
    throw ValidationError("decay fit: regression abscissae coincide");

  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = ybar - fit.exponent * xbar;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < cnt; ++i) {
    const double r = ys[i] - (fit.intercept + fit.exponent * xs[i]);
    ss_res += r * r;
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
  fit.window_begin = series[begin].time;
  fit.window_end = series[end - 1].time;
  return fit;
}

double max_speed(const SpectralField& z, double beta) {
  auto [u1, u2] = biot_savart_velocity(z, beta);
  ScalarField v1 = inverse_transform(u1);
  ScalarField v2 = inverse_transform(u2);
  double peak = 0.0;
  for (std::size_t i = 0; i < v1.values.size(); ++i)
    peak = std::max(peak, std::hypot(v1.values[i], v2.values[i]));
  return peak;
}

double low_shell_fraction(const SpectralField& f) {
  const GridSpec& g = f.grid;
  if (g.n < 1 || f.coeffs.size() != static_cast<std::size_t>(g.n) * g.n)
    throw ValidationError("low_shell_fraction: field does not match its grid");
  double total = 0.0, low = 0.0;
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      const double e = std::norm(f.at(a, b));
      total += e;
      if (std::abs(g.freq(a)) <= 1 && std::abs(g.freq(b)) <= 1) low += e;
    }
  }
  return total == 0.0 ? 0.0 : low / total;
}

}  // namespace frflow
