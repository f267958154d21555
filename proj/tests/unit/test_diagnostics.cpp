#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "frflow/diagnostics.h"
#include "frflow/errors.h"
#include "frflow/grid.h"
#include "frflow/kernels.h"
#include "frflow/transform.h"

using namespace frflow;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScalarField gaussian(const GridSpec& g, double amp, double sigma,
                     std::array<double, 2> center = {0.0, 0.0}) {
  ScalarField f = make_scalar_field(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double dx = g.coord(i) - center[0];
      double dy = g.coord(j) - center[1];
      f.at(i, j) = amp * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  return f;
}

// Unit-mass profile under the exact linear flow: the spectrum of the data
// e^{-|k|^alpha} damped by e^{-t|k|^alpha} is e^{-(1+t)|k|^alpha}, which is
// the kernel at scale 1+t. Built directly so the test owns its propagator.
ScalarField flowed_profile(const GridSpec& g, double alpha, double t, double m) {
  SpectralField c = make_spectral_field(g);
  const double inv_l2 = 1.0 / (g.box_length * g.box_length);
  for (int a = 0; a < g.n; ++a)
    for (int b = 0; b < g.n; ++b) {
      double k = std::hypot(g.wavenumber(a), g.wavenumber(b));
      c.at(a, b) = m * inv_l2 * std::exp(-(1.0 + t) * std::pow(k, alpha));
    }
  return inverse_transform(c);
}

}  // namespace

TEST_CASE("lp norms of a constant field") {
  GridSpec g = make_grid(64, 24.0);
  ScalarField f = make_scalar_field(g);
  for (double& v : f.values) v = -2.5;
  CHECK(lp_norm(f, 1.0) == doctest::Approx(2.5 * 576.0).epsilon(1e-13));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(2.5 * 24.0).epsilon(1e-13));
  CHECK(lp_norm(f, kInf) == 2.5);
}

TEST_CASE("heat kernel has unit L1 norm") {
  GridSpec g = make_grid(256, 64.0);
  ScalarField f = make_scalar_field(g);
  const double c = 1.0 / (4.0 * M_PI);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double r2 = g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j);
      f.at(i, j) = c * std::exp(-r2 / 4.0);
    }
  CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("norm homogeneity is exact under power-of-two scaling") {
  GridSpec g = make_grid(48, 20.0);
  ScalarField f = gaussian(g, 1.7, 2.0, {1.0, -3.0});
  ScalarField sf = f;
  for (double& v : sf.values) v *= -4.0;
  CHECK(lp_norm(sf, 1.0) == 4.0 * lp_norm(f, 1.0));
  CHECK(lp_norm(sf, 2.0) == 4.0 * lp_norm(f, 2.0));
  CHECK(lp_norm(sf, kInf) == 4.0 * lp_norm(f, kInf));
}

TEST_CASE("weighted norm reduces to plain L2 at m=0") {
  GridSpec g = make_grid(48, 20.0);
  ScalarField f = gaussian(g, 0.9, 1.5, {2.0, 0.5});
  CHECK(weighted_l2m_norm(f, 0) == lp_norm(f, 2.0));
}

TEST_CASE("weight bounds for compactly supported data") {
  GridSpec g = make_grid(96, 32.0);
  const double R = 5.0;
  ScalarField f = gaussian(g, 1.0, 2.0);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      if (std::hypot(g.coord(i), g.coord(j)) > R) f.at(i, j) = 0.0;
  double l2 = lp_norm(f, 2.0);
  double w1 = weighted_l2m_norm(f, 1);
  double w2 = weighted_l2m_norm(f, 2);
  CHECK(l2 <= w1 * (1.0 + 1e-12));
  CHECK(w1 <= w2 * (1.0 + 1e-12));
  CHECK(w2 <= (1.0 + R * R) * l2 * (1.0 + 1e-12));
}

TEST_CASE("weighted norm of the stable profile matches radial quadrature") {
  GridSpec g = make_grid(512, 128.0);
  ScalarField f = kernel_field(g, 1.5, 1.0, KernelWhich::G);
  double grid_norm = weighted_l2m_norm(f, 2);
  double radial = kernel_moment_norm(1.5, 2.0, 2);
  CHECK(std::abs(grid_norm - radial) <= 0.01 * radial);
}

TEST_CASE("center of mass finds a shifted bump, degenerate data gets the box center") {
  GridSpec g = make_grid(96, 24.0);
  ScalarField f = gaussian(g, 1.3, 1.5, {0.7, -0.4});
  auto c = center_of_mass(f);
  CHECK(c[0] == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(-0.4).epsilon(1e-9));

  ScalarField odd = make_scalar_field(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      odd.at(i, j) = std::sin(2.0 * M_PI * g.coord(i) / g.box_length);
  auto c0 = center_of_mass(odd);
  CHECK(c0[0] == 0.0);
  CHECK(c0[1] == 0.0);
}

TEST_CASE("profile error vanishes on the exact profile") {
  GridSpec g = make_grid(128, 48.0);
  const double alpha = 1.5, t = 2.5, m0 = 3.7;
  const std::array<double, 2> center = {0.3, -1.1};
  ScalarField prof = kernel_field(g, alpha, 1.0 + t, KernelWhich::G, center);
  ScalarField z = prof;
  for (double& v : z.values) v *= m0;
  double scale = lp_norm(z, 2.0);
  for (double p : {1.0, 2.0}) {
    double err = profile_error_sqg(z, t, m0, alpha, p, center);
    CHECK(err <= 1e-12 * scale);
  }
}

TEST_CASE("profile error with zero mass is the plain norm") {
  GridSpec g = make_grid(64, 24.0);
  ScalarField z = gaussian(g, 1.1, 2.0);
  CHECK(profile_error_sqg(z, 4.0, 0.0, 1.5, 2.0) == lp_norm(z, 2.0));
  CHECK(profile_error_sqg(z, 4.0, 0.0, 1.5, 1.0) == lp_norm(z, 1.0));
}

TEST_CASE("profile error stays at discretization level along the linear flow") {
  GridSpec g = make_grid(256, 64.0);
  const double alpha = 1.5, m = 2.2;
  for (double t : {0.0, 3.0, 10.0}) {
    ScalarField z = flowed_profile(g, alpha, t, m);
    double err = profile_error_sqg(z, t, m, alpha, 2.0);
    CHECK(err <= 1e-12 * lp_norm(z, 2.0));
  }
}

TEST_CASE("profile error warns when the kernel outgrows the box") {
  GridSpec g = make_grid(64, 24.0);
  ScalarField z = gaussian(g, 1.0, 2.0);
  std::vector<std::string> warnings;
  profile_error_sqg(z, 3.0, 1.0, 1.5, 2.0, {0.0, 0.0}, &warnings);
  CHECK(warnings.empty());
  // (1+t)^{2/3} > 8 needs 1+t > 22.6.
  profile_error_sqg(z, 25.0, 1.0, 1.5, 2.0, {0.0, 0.0}, &warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("profile error is 1-Lipschitz in the field") {
  GridSpec g = make_grid(96, 32.0);
  ScalarField z = gaussian(g, 1.0, 2.5);
  ScalarField h = gaussian(g, 0.3, 1.0, {2.0, 1.0});
  ScalarField zh = z;
  for (std::size_t i = 0; i < zh.values.size(); ++i) zh.values[i] += h.values[i];
  for (double p : {1.0, 2.0}) {
    double a = profile_error_sqg(zh, 1.0, 0.8, 1.5, p);
    double b = profile_error_sqg(z, 1.0, 0.8, 1.5, p);
    CHECK(std::abs(a - b) <= lp_norm(h, p) * (1.0 + 1e-12));
  }
}

TEST_CASE("coupled residuals vanish on the synthetic two-term expansion") {
  GridSpec g = make_grid(128, 48.0);
  const double alpha = 1.4, t = 1.5, g1 = 0.8, g2 = -1.3;
  const std::array<double, 2> center = {0.5, 0.25};
  ScalarField gf = kernel_field(g, alpha, 1.0 + t, KernelWhich::G, center);
  ScalarField dg = kernel_field(g, alpha, 1.0 + t, KernelWhich::dG1, center);
  ScalarField w = make_scalar_field(g);
  ScalarField th = make_scalar_field(g);
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = g2 * (1.0 + t) * dg.values[i] + g1 * gf.values[i];
    th.values[i] = g2 * gf.values[i];
  }
  double wscale = lp_norm(w, 2.0), tscale = lp_norm(th, 2.0);

  auto [rw, rt] = profile_error_boussinesq(w, th, t, g1, g2, alpha, 2.0, center);
  CHECK(rw <= 1e-12 * wscale);
  CHECK(rt <= 1e-12 * tscale);

  // Zero gammas: plain norms, no subtraction at all.
  auto [nw, nt] = profile_error_boussinesq(w, th, t, 0.0, 0.0, alpha, 2.0, center);
  CHECK(nw == lp_norm(w, 2.0));
  CHECK(nt == lp_norm(th, 2.0));

  // Dropping the mass term leaves exactly its norm behind.
  auto [pw, pt] = profile_error_boussinesq(w, th, t, 0.0, g2, alpha, 2.0, center);
  ScalarField gpart = gf;
  for (double& v : gpart.values) v *= g1;
  CHECK(pw == doctest::Approx(lp_norm(gpart, 2.0)).epsilon(1e-10));
  CHECK(pt <= 1e-12 * tscale);
}

TEST_CASE("holder interpolation holds on grid data") {
  GridSpec g = make_grid(96, 32.0);
  for (double sigma : {1.0, 2.5, 4.0}) {
    ScalarField f = gaussian(g, 1.6, sigma, {1.0, -2.0});
    double l1 = lp_norm(f, 1.0), l2 = lp_norm(f, 2.0), li = lp_norm(f, kInf);
    CHECK(l2 <= std::sqrt(l1 * li) * (1.0 + 1e-12));
  }
}

TEST_CASE("weighted space embeds into L1 and L2 with a grid-computable constant") {
  GridSpec g = make_grid(96, 32.0);
  double c1sq = 0.0;
  const double area = g.spacing() * g.spacing();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      double w = 1.0 + g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j);
      c1sq += area / (w * w);
    }
  const double c1 = std::sqrt(c1sq);
  for (double sigma : {1.5, 3.0}) {
    ScalarField f = gaussian(g, 1.2, sigma, {0.5, 0.5});
    double w2 = weighted_l2m_norm(f, 2);
    CHECK(lp_norm(f, 1.0) <= c1 * w2 * (1.0 + 1e-12));
    CHECK(lp_norm(f, 2.0) <= w2 * (1.0 + 1e-12));
  }
}

TEST_CASE("decay fit recovers an exact power law") {
  std::vector<TimeSample> s;
  for (int i = 0; i <= 30; ++i) {
    double t = i;
    s.push_back({t, 3.0 * std::pow(1.0 + t, -0.75)});
  }
  DecayFit fit = fit_decay_exponent(s, FitMode::kLog1pT);
  CHECK(std::abs(fit.exponent + 0.75) <= 1e-12);
  CHECK(std::abs(fit.intercept - std::log(3.0)) <= 1e-12);
  CHECK(fit.r_squared >= 1.0 - 1e-12);
  CHECK(fit.r_squared <= 1.0);
  // 30 samples sit at t >= 1; the default window keeps the last 18.
  CHECK(fit.window_begin == 13.0);
  CHECK(fit.window_end == 30.0);
}

TEST_CASE("decay fit of a constant series is flat with perfect fit") {
  std::vector<TimeSample> s;
  for (int i = 0; i < 10; ++i) s.push_back({static_cast<double>(i), 2.0});
  DecayFit fit = fit_decay_exponent(s, FitMode::kLog1pT);
  CHECK(std::abs(fit.exponent) <= 1e-14);
  CHECK(fit.r_squared == 1.0);
}

TEST_CASE("decay fit tolerates a small multiplicative perturbation") {
  std::vector<TimeSample> s;
  for (int i = 0; i < 300; ++i) {
    double t = 1.0 + 99.0 * i / 299.0;
    s.push_back({t, std::pow(1.0 + t, -0.5) * (1.0 + 0.01 * std::sin(t))});
  }
  DecayFit fit = fit_decay_exponent(s, FitMode::kLog1pT);
  CHECK(std::abs(fit.exponent + 0.5) <= 0.01);
}

TEST_CASE("decay fit in tau mode reads exponential rates") {
  std::vector<TimeSample> s;
  for (int i = 0; i < 20; ++i) {
    double tau = 0.5 * i;
    s.push_back({tau, 7.0 * std::exp(-0.4 * tau)});
  }
  DecayFit fit = fit_decay_exponent(s, FitMode::kTau);
  CHECK(std::abs(fit.exponent + 0.4) <= 1e-12);
  CHECK(std::abs(fit.intercept - std::log(7.0)) <= 1e-12);
}

TEST_CASE("decay fit slope is invariant under positive scaling of values") {
  std::vector<TimeSample> s, scaled;
  for (int i = 0; i <= 40; ++i) {
    double t = 0.5 * i;
    double v = 2.0 * std::pow(1.0 + t, -0.6) * (1.0 + 0.05 * std::cos(3.0 * t));
    s.push_back({t, v});
    scaled.push_back({t, 7.25 * v});
  }
  DecayFit a = fit_decay_exponent(s, FitMode::kLog1pT);
  DecayFit b = fit_decay_exponent(scaled, FitMode::kLog1pT);
  CHECK(std::abs(a.exponent - b.exponent) <= 1e-12);
  CHECK(std::abs(b.intercept - a.intercept - std::log(7.25)) <= 1e-12);
  CHECK(a.window_begin == b.window_begin);
}

TEST_CASE("decay fit honors an explicit window") {
  std::vector<TimeSample> s;
  for (int i = 0; i <= 30; ++i) {
    double t = i;
    s.push_back({t, 3.0 * std::pow(1.0 + t, -0.75)});
  }
  DecayFit fit = fit_decay_exponent(s, FitMode::kLog1pT, std::pair{10.0, 20.0});
  CHECK(fit.window_begin == 10.0);
  CHECK(fit.window_end == 20.0);
  CHECK(std::abs(fit.exponent + 0.75) <= 1e-12);
}

TEST_CASE("decay fit default window skips the early transient") {
  // Flat head before t=1, clean power law after: the default window must not
  // let the head contaminate the slope.
  std::vector<TimeSample> s;
  for (int i = 0; i < 5; ++i) s.push_back({0.2 * i, 5.0});
  for (int i = 1; i <= 40; ++i) s.push_back({static_cast<double>(i), 5.0 * std::pow(2.0 / (1.0 + i), 1.0)});
  DecayFit fit = fit_decay_exponent(s, FitMode::kLog1pT);
  CHECK(std::abs(fit.exponent + 1.0) <= 1e-10);
  CHECK(fit.window_begin >= 1.0);

  // A series that never reaches t=1 is used whole.
  std::vector<TimeSample> early;
  for (int i = 0; i < 8; ++i) {
    double t = 0.1 * i;
    early.push_back({t, std::pow(1.0 + t, -0.3)});
  }
  DecayFit efit = fit_decay_exponent(early, FitMode::kLog1pT);
  CHECK(std::abs(efit.exponent + 0.3) <= 1e-12);
  CHECK(efit.window_begin == 0.0);
}

TEST_CASE("decay fit rejects malformed series") {
  std::vector<TimeSample> four = {{0, 1}, {1, 1}, {2, 1}, {3, 1}};
  CHECK_THROWS_AS(fit_decay_exponent(four, FitMode::kLog1pT), ValidationError);

  std::vector<TimeSample> s;
  for (int i = 0; i < 8; ++i) s.push_back({static_cast<double>(i), 1.0});
  auto bad = s;
  bad[3].value = 0.0;
  CHECK_THROWS_AS(fit_decay_exponent(bad, FitMode::kLog1pT), ValidationError);
  bad = s;
  bad[3].value = -2.0;
  CHECK_THROWS_AS(fit_decay_exponent(bad, FitMode::kLog1pT), ValidationError);
  bad = s;
  bad[4].time = bad[3].time;
  CHECK_THROWS_AS(fit_decay_exponent(bad, FitMode::kLog1pT), ValidationError);
  bad = s;
  bad[2].value = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fit_decay_exponent(bad, FitMode::kLog1pT), ValidationError);
  CHECK_THROWS_AS(fit_decay_exponent(s, FitMode::kLog1pT, std::pair{2.0, 4.0}),
                  ValidationError);
  CHECK_THROWS_AS(fit_decay_exponent(s, FitMode::kLog1pT, std::pair{5.0, 3.0}),
                  ValidationError);
}

TEST_CASE("diagnostic ops reject bad arguments") {
  GridSpec g = make_grid(32, 16.0);
  ScalarField f = gaussian(g, 1.0, 2.0);
  CHECK_THROWS_AS(lp_norm(f, 3.0), ValidationError);
  CHECK_THROWS_AS(weighted_l2m_norm(f, 3), ValidationError);
  CHECK_THROWS_AS(profile_error_sqg(f, -1.0, 1.0, 1.5, 2.0), ValidationError);
  GridSpec g2 = make_grid(64, 16.0);
  ScalarField other = gaussian(g2, 1.0, 2.0);
  CHECK_THROWS_AS(
      profile_error_boussinesq(f, other, 1.0, 1.0, 1.0, 1.5, 2.0),
      ValidationError);
  ScalarField broken = f;
  broken.values.pop_back();
  CHECK_THROWS_AS(lp_norm(broken, 2.0), ValidationError);
}

TEST_CASE("max speed matches a single shear mode") {
  GridSpec g = make_grid(64, 24.0);
  SpectralField z = make_spectral_field(g);
  z.at(1, 0) = 0.5;
  z.at(g.n - 1, 0) = 0.5;  // z = cos(k1 x)
  const double k1 = 2.0 * M_PI / g.box_length;
  const double beta = 0.7;
  CHECK(max_speed(z, beta) == doctest::Approx(std::pow(k1, -beta)).epsilon(1e-12));
}

TEST_CASE("low shell fraction splits spectral energy") {
  GridSpec g = make_grid(32, 16.0);
  SpectralField f = make_spectral_field(g);
  f.at(1, g.n - 1) = {0.3, -0.1};
  CHECK(low_shell_fraction(f) == 1.0);

  SpectralField hi = make_spectral_field(g);
  hi.at(5, 0) = 1.0;
  CHECK(low_shell_fraction(hi) == 0.0);

  SpectralField mix = make_spectral_field(g);
  mix.at(0, 0) = {1.0, 0.0};
  mix.at(4, 4) = {0.0, 1.0};
  CHECK(low_shell_fraction(mix) == doctest::Approx(0.5).epsilon(1e-15));

  SpectralField empty = make_spectral_field(g);
  CHECK(low_shell_fraction(empty) == 0.0);
}
