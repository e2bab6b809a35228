#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "hwk/reconstruct_fd.hpp"

using namespace hwk;

namespace {

FluxStencil sample_stencil(double (*f)(double), double x_half, double dx) {
  FluxStencil st;
  for (int k = 0; k < 10; ++k) st.v[static_cast<std::size_t>(k)] = f(x_half + dx * (k - 4.5));
  return st;
}

double quartic(double x) { return x * x * x * x; }

// g with (1/dx) * integral of g over [x - dx/2, x + dx/2] equal to x^4.
double quartic_flux_target(double x, double dx) { return x * x * x * x - 0.5 * dx * dx * x * x + 7.0 / 240.0 * std::pow(dx, 4); }

template <class F>
double gauss(double lo, double hi, F&& f) {
  const double a = std::sqrt(0.6), m = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
  return r * (5.0 * f(m - a * r) + 8.0 * f(m) + 5.0 * f(m + a * r)) / 9.0;
}

}  // namespace

TEST(FluxTarget, SlidingAverageOracle) {
  for (double dx : {0.3, 0.05})
    for (double x : {-0.4, 0.0, 0.7}) {
      const double avg = gauss(x - 0.5 * dx, x + 0.5 * dx, [&](double s) { return quartic_flux_target(s, dx); }) / dx;
      EXPECT_NEAR(avg, quartic(x), 1e-15);
    }
}

TEST(HwenoFlux, ConstantData) {
  FluxStencil st;
  st.v.fill(0.75);
  EXPECT_NEAR(flux_hweno5_minus(st), 0.75, 1e-15);
  EXPECT_NEAR(flux_hweno5_plus(st), 0.75, 1e-15);
  EXPECT_NEAR(flux_weno5_js(st), 0.75, 1e-15);
}

TEST(HwenoFlux, PrimitiveDerivativeOfConstantIsConstant) {
  const std::array<double, 6> c{2.0, 2.0, 2.0, 2.0, 2.0, 2.0};
  EXPECT_NEAR(primitive_derivative(c), 2.0, 1e-15);
}

TEST(HwenoFlux, CenterIndicatorHandValue) {
  std::array<double, 9> w{};
  w[5] = 1.0;  // f_{i-1}, f_i, f_{i+1} = 0, 0, 1
  EXPECT_NEAR(hweno5_flux_parts(w).beta[1], 25.0 / 12.0, 1e-15);
}

TEST(HwenoFlux, IndicatorsMatchQuadrature) {
  // Each candidate is P' with P a cubic through primitive values; the
  // indicator integrates dx (P'')^2 + dx^3 (P''')^2 over [x_i, x_{i+1}].
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    std::array<double, 9> w{};
    for (double& v : w) v = u(rng);
    const auto parts = hweno5_flux_parts(w);
    const double fm = w[3], f0 = w[4], f1 = w[5];
    // x_i = 0, dx = 1; primitive nodes at -3/2, -1/2, 1/2, 3/2
    const double gx[4] = {-1.5, -0.5, 0.5, 1.5};
    const double gv[4] = {0.0, fm, fm + f0, fm + f0 + f1};
    const auto solve = [&](std::array<int, 3> value_nodes, int slope_node, double slope) {
      Eigen::Matrix4d a;
      Eigen::Vector4d b;
      int r = 0;
      for (int k : value_nodes) {
        for (int p = 0; p < 4; ++p) a(r, p) = std::pow(gx[k], p);
        b(r++) = gv[k];
      }
      if (slope_node < 0) {
        for (int p = 0; p < 4; ++p) a(r, p) = std::pow(gx[3], p);
        b(r) = gv[3];
      } else {
        a(r, 0) = 0.0;
        for (int p = 1; p < 4; ++p) a(r, p) = p * std::pow(gx[slope_node], p - 1);
        b(r) = slope;
      }
      return Eigen::Vector4d(a.fullPivLu().solve(b));
    };
    const Eigen::Vector4d cl = solve({0, 1, 2}, 0, parts.g_left);
    const Eigen::Vector4d cc = solve({0, 1, 2}, -1, 0.0);
    const Eigen::Vector4d cr = solve({1, 2, 3}, 3, parts.g_right);
    int k = 0;
    for (const Eigen::Vector4d& c : {cl, cc, cr}) {
      const double q = gauss(0.0, 1.0, [&](double x) {
        const double d2 = 2 * c(2) + 6 * c(3) * x, d3 = 6 * c(3);
        return d2 * d2 + d3 * d3;
      });
      const double h = c(1) + c(2) + 0.75 * c(3);  // P'(1/2)
      EXPECT_NEAR(parts.beta[static_cast<std::size_t>(k)], q, 1e-12 * std::max(1.0, q));
      EXPECT_NEAR(parts.h[static_cast<std::size_t>(k)], h, 1e-13);
      ++k;
    }
  }
}

TEST(HwenoFlux, MirrorIdentityIsBitwise) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 10000; ++t) {
    FluxStencil st;
    for (double& v : st.v) v = u(rng);
    const FluxStencil r = st.reversed();
    EXPECT_EQ(flux_hweno5_plus(st), flux_hweno5_minus(r));
    EXPECT_EQ(flux_hweno5_minus(st), flux_hweno5_plus(r));
  }
}

TEST(HwenoFlux, WeightsNormalizedOnRandomStencils) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(-6.0, 2.0);
  for (int t = 0; t < 100000; ++t) {
    const double amp = std::pow(10.0, scale(rng));
    std::array<double, 9> w{};
    for (double& v : w) v = amp * u(rng);
    WenoWeights<3> wh, wj;
    hweno5_minus_window(w, kWenoEpsilon, &wh);
    weno5_js_minus_window(std::span<const double, 9>(w).subspan<2, 5>(), kWenoEpsilon, &wj);
    for (const auto* ww : {&wh, &wj}) {
      EXPECT_NEAR(ww->w[0] + ww->w[1] + ww->w[2], 1.0, 1e-14);
      EXPECT_GE(std::min({ww->w[0], ww->w[1], ww->w[2]}), 0.0);
    }
  }
}

TEST(HwenoFlux, IndicatorsZeroOnlyForConstants) {
  std::array<double, 9> c{};
  c.fill(-2.0);
  for (double b : hweno5_flux_parts(c).beta) EXPECT_NEAR(b, 0.0, 1e-13);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    std::array<double, 9> w{};
    for (double& v : w) v = u(rng);
    for (double b : hweno5_flux_parts(w).beta) EXPECT_GT(b, 0.0);
  }
}

TEST(HwenoFlux, QuarticExactWithLinearWeights) {
  for (double x_half : {-0.35, 0.1, 0.55}) {
    const double dx = 0.1;
    const FluxStencil st = sample_stencil(quartic, x_half, dx);
    const std::span<const double, 9> w(st.v.data(), 9);
    EXPECT_NEAR(hermite5_flux(w), quartic_flux_target(x_half, dx), 1e-14);
    EXPECT_NEAR(flux_hweno5_minus(st, 1e20), quartic_flux_target(x_half, dx), 1e-14);
    FluxStencil plus = st;
    plus.wind = Wind::from_right;
    EXPECT_NEAR(flux_hweno5_plus(plus, 1e20), quartic_flux_target(x_half, dx), 1e-14);
  }
}

TEST(HwenoFlux, QuarticFifthOrderWithNonlinearWeights) {
  const double x_half = 0.45;
  double prev_m = 0.0, prev_p = 0.0;
  for (double dx : {0.02, 0.01}) {
    const FluxStencil st = sample_stencil(quartic, x_half, dx);
    const double em = std::abs(flux_hweno5_minus(st) - quartic_flux_target(x_half, dx));
    const double ep = std::abs(flux_hweno5_plus(st) - quartic_flux_target(x_half, dx));
    EXPECT_LT(em, 50.0 * std::pow(dx, 5));
    EXPECT_LT(ep, 50.0 * std::pow(dx, 5));
    if (prev_m > 0.0) {
      EXPECT_GT(std::log2(prev_m / em), 4.0);
      EXPECT_GT(std::log2(prev_p / ep), 4.0);
    }
    prev_m = em;
    prev_p = ep;
  }
}

TEST(WenoJs, LinearDataGivesInterfaceValue) {
  const double dx = 0.1, x_half = 0.25;
  const FluxStencil st = sample_stencil([](double x) { return x; }, x_half, dx);
  EXPECT_NEAR(flux_weno5_js(st), x_half, 1e-15);
  FluxStencil r = st;
  r.wind = Wind::from_right;
  EXPECT_NEAR(flux_weno5_js(r), x_half, 1e-15);
}

TEST(Divergence, ConstantFieldTelescopes) {
  const Grid1D g(50, -1.0, 1.0, Boundary::periodic);
  const Field1D f(g, 3.0);
  for (FluxKind k : {FluxKind::weno5_js, FluxKind::hweno5})
    for (double v : divergence_1d(f, 1.0, k).values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Divergence, SineFifthOrder) {
  for (FluxKind k : {FluxKind::weno5_js, FluxKind::hweno5}) {
    double prev = 0.0;
    for (std::size_t n : {200u, 400u}) {
      const Grid1D g(n, -1.0, 1.0, Boundary::periodic);
      const auto f = Field1D::sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
      const auto d = divergence_1d(f, 1.0, k);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        err = std::max(err, std::abs(d[i] + std::numbers::pi * std::cos(std::numbers::pi * g.x(static_cast<std::ptrdiff_t>(i)))));
      EXPECT_LT(err, 100.0 * std::pow(g.dx(), 5) * std::pow(std::numbers::pi, 6));
      if (prev > 0.0) {
        EXPECT_GT(std::log2(prev / err), 4.6);
      }
      prev = err;
    }
  }
}

TEST(Divergence, PeriodicSumIsZero) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Grid1D g(64, 0.0, 1.0, Boundary::periodic);
  Field1D f(g);
  std::vector<double> a(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    f[i] = u(rng);
    a[i] = u(rng);
  }
  for (FluxKind k : {FluxKind::weno5_js, FluxKind::hweno5})
    for (Splitting s : {Splitting::upwind, Splitting::lax_friedrichs}) {
      const auto d = divergence_1d(f, a, k, s);
      CompensatedSum sum;
      for (double v : d.values) sum.add(v);
      EXPECT_NEAR(sum.value(), 0.0, 1e-12);
    }
}

TEST(Divergence, RejectsNonFiniteVelocity) {
  const Grid1D g(16, 0.0, 1.0, Boundary::periodic);
  std::vector<double> a(16, 1.0);
  a[3] = std::nan("");
  EXPECT_THROW(divergence_1d(Field1D(g, 1.0), a, FluxKind::hweno5), StepFailure);
}

TEST(Divergence, NegativeVelocityMirrorsPositive) {
  const Grid1D g(40, -1.0, 1.0, Boundary::periodic);
  const auto f = Field1D::sample(g, [](double x) { return std::abs(x) < 0.3 ? 1.0 : 0.0; });
  const auto dp = divergence_1d(f, 1.0, FluxKind::hweno5);
  Field1D fr(g);
  for (std::size_t i = 0; i < g.size(); ++i) fr[i] = f[(g.size() - i) % g.size()];
  const auto dm = divergence_1d(fr, -1.0, FluxKind::hweno5);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(dm[(g.size() - i) % g.size()], dp[i], 1e-12);
}
