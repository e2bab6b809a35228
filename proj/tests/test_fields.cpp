#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hwk/fields.hpp"

using namespace hwk;

namespace {

struct Disk {
  Grid2D grid;
  DiskMask mask;
  Disk(std::size_t n, double radius, double half_width)
      : grid(Grid2D::square(n, half_width)), mask(classify_disk_nodes(grid, radius)) {}
};

double interior_max_error(const Field2D& a, const Field2D& b, const DiskMask& m) {
  double e = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (m.interior(k)) e = std::max(e, std::abs(a.values[k] - b.values[k]));
  return e;
}

}  // namespace

TEST(RadialField, ZeroCharge) {
  const Axis r(65, -4.0, 4.0, Boundary::dirichlet);
  const std::vector<double> rho(65, 0.0);
  for (double e : efield_radial(r, rho)) EXPECT_EQ(e, 0.0);
}

TEST(RadialField, UniformCharge) {
  const Axis r(65, -4.0, 4.0, Boundary::dirichlet);
  const std::vector<double> rho(65, 1.0);
  const auto e = efield_radial(r, rho);
  for (std::ptrdiff_t i = 0; i < 65; ++i) EXPECT_NEAR(e[static_cast<std::size_t>(i)], 0.5 * r.coord(i), 1e-13);
}

TEST(RadialField, QuadraticCharge) {
  double prev = 0.0;
  for (std::size_t n : {65u, 129u}) {
    const Axis r(n, -2.0, 2.0, Boundary::dirichlet);
    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) rho[i] = std::pow(r.coord(static_cast<std::ptrdiff_t>(i)), 2);
    const auto e = efield_radial(r, rho);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(e[i] - std::pow(r.coord(static_cast<std::ptrdiff_t>(i)), 3) / 4.0));
    EXPECT_LT(err, r.dx() * r.dx() * 2.0);
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 1.9);
    }
    prev = err;
  }
}

TEST(RadialField, LinearInCharge) {
  const Axis r(33, -4.0, 4.0, Boundary::dirichlet);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> a(33), b(33), c(33);
  for (std::size_t i = 0; i < 33; ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    c[i] = 2.5 * a[i] + b[i];
  }
  const auto ea = efield_radial(r, a), eb = efield_radial(r, b), ec = efield_radial(r, c);
  for (std::size_t i = 0; i < 33; ++i) EXPECT_NEAR(ec[i], 2.5 * ea[i] + eb[i], 1e-14);
}

TEST(GhostExtrapolation, ReproducesPolynomialsOfStencilDegree) {
  for (std::size_t n : {32u, 64u, 97u}) {
    const Disk d(n, 10.0, 11.0);
    const GhostExtrapolation gx(d.grid, d.mask);
    ASSERT_EQ(gx.stencils().size(), d.mask.n_ghost);
    const auto poly = [](int deg, double x, double y) {
      if (deg == 0) return 1.0;
      if (deg == 1) return 0.3 * x - 1.7 * y + 2.0;
      return x * x + x * y;
    };
    std::size_t quadratic = 0;
    for (int deg = 0; deg <= 2; ++deg) {
      const Field2D phi = Field2D::sample(d.grid, [&](double x, double y) { return poly(deg, x, y); });
      for (const auto& st : gx.stencils()) {
        if (st.degree < deg) continue;
        if (deg == 2) ++quadratic;
        const double b = poly(deg, st.foot.x, st.foot.y);
        const double x = d.grid.x(static_cast<std::ptrdiff_t>(st.ghost % n));
        const double y = d.grid.y(static_cast<std::ptrdiff_t>(st.ghost / n));
        EXPECT_NEAR(gx.ghost_value(st, phi.values, b), poly(deg, x, y), 1e-10) << "degree " << deg;
      }
    }
    EXPECT_GT(quadratic, gx.stencils().size() / 2);
  }
}

TEST(GhostExtrapolation, NormalGeometry) {
  const Disk d(64, 10.0, 11.0);
  const GhostExtrapolation gx(d.grid, d.mask);
  const double h = std::min(d.grid.dx(), d.grid.dy());
  for (const auto& st : gx.stencils()) {
    EXPECT_NEAR(std::hypot(st.foot.x, st.foot.y), 10.0, 1e-12);
    EXPECT_NEAR(std::hypot(st.x_h.x, st.x_h.y), 10.0 - h, 1e-12);
    EXPECT_NEAR(std::hypot(st.x_2h.x, st.x_2h.y), 10.0 - 2 * h, 1e-12);
    EXPECT_NEAR(st.w_p + st.w_h + st.w_2h, 1.0, 1e-12);
    for (const auto& t : st.combined) EXPECT_TRUE(d.mask.interior(t.index));
  }
}

TEST(Poisson, ZeroChargeGivesZeroPotential) {
  const Disk d(32, 10.0, 11.0);
  const PoissonDisk p(d.grid, d.mask);
  for (double v : p.solve(Field2D(d.grid)).values) EXPECT_EQ(v, 0.0);
}

TEST(Poisson, RadiusBeyondDomainRejected) {
  const Grid2D g = Grid2D::square(32, 11.0);
  EXPECT_THROW(PoissonDisk(g, classify_disk_nodes(g, 12.0)), ConfigError);
}

TEST(Poisson, ParaboloidReproducedExactly) {
  // Q2 ghosts and the five-point Laplacian are both exact on quadratics.
  const double R = 10.0;
  for (std::size_t n : {64u, 128u}) {
    const Disk d(n, R, 11.0);
    const PoissonDisk p(d.grid, d.mask);
    const Field2D phi = p.solve(Field2D(d.grid, 1.0));
    const auto exact = Field2D::sample(d.grid, [&](double x, double y) { return (R * R - x * x - y * y) / 4.0; });
    EXPECT_LT(interior_max_error(phi, exact, d.mask), 1e-10);
  }
}

TEST(Poisson, ManufacturedTrigonometric) {
  const double R = 10.0;
  const auto exact_fn = [&](double x, double y) { return (R * R - x * x - y * y) * std::sin(x) * std::cos(y) / (R * R); };
  const auto rho_fn = [&](double x, double y) {
    const double v = std::sin(x) * std::cos(y), u = (R * R - x * x - y * y) / (R * R);
    return 4.0 * v / (R * R) + 4.0 * (x * std::cos(x) * std::cos(y) - y * std::sin(x) * std::sin(y)) / (R * R) +
           2.0 * u * v;
  };
  double prev = 0.0;
  for (std::size_t n : {64u, 128u}) {
    const Disk d(n, R, 11.0);
    const PoissonDisk p(d.grid, d.mask);
    const Field2D phi = p.solve(Field2D::sample(d.grid, rho_fn));
    const double err = interior_max_error(phi, Field2D::sample(d.grid, exact_fn), d.mask);
    if (prev > 0.0) {
      EXPECT_GE(std::log2(prev / err), 1.5);
    }
    prev = err;
  }
}

TEST(Poisson, MaximumPrinciple) {
  const Disk d(48, 10.0, 11.0);
  const PoissonDisk p(d.grid, d.mask);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    Field2D rho(d.grid);
    for (double& v : rho.values) v = u(rng);
    const Field2D phi = p.solve(rho);
    for (std::size_t k = 0; k < phi.size(); ++k)
      if (d.mask.interior(k)) {
        EXPECT_GE(phi.values[k], 0.0);
      }
  }
}

TEST(Poisson, Superposition) {
  const Disk d(40, 10.0, 11.0);
  const PoissonDisk p(d.grid, d.mask);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 3; ++t) {
    Field2D a(d.grid), b(d.grid), c(d.grid);
    for (std::size_t k = 0; k < a.size(); ++k) {
      a.values[k] = u(rng);
      b.values[k] = u(rng);
      c.values[k] = -0.7 * a.values[k] + b.values[k];
    }
    const Field2D pa = p.solve(a), pb = p.solve(b), pc = p.solve(c);
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(pc.values[k], -0.7 * pa.values[k] + pb.values[k], 1e-11);
  }
}

TEST(Poisson, CoordinateDumpMatchesMatrix) {
  const Disk d(16, 10.0, 11.0);
  const PoissonDisk p(d.grid, d.mask);
  std::ostringstream os;
  p.write_coo(os);
  std::istringstream is(os.str());
  long r, c;
  double v;
  std::size_t count = 0;
  while (is >> r >> c >> v) {
    EXPECT_EQ(v, p.matrix().coeff(r, c));
    ++count;
  }
  EXPECT_EQ(count, static_cast<std::size_t>(p.matrix().nonZeros()));
}

TEST(Velocity, ConstantPotentialIsAtRest) {
  const Disk d(32, 10.0, 11.0);
  const auto u = velocity_from_potential(Field2D(d.grid, 3.0), d.mask);
  for (std::size_t k = 0; k < u.ax.size(); ++k) {
    EXPECT_EQ(u.ax.values[k], 0.0);
    EXPECT_EQ(u.ay.values[k], 0.0);
  }
}

TEST(Velocity, QuadraticPotentialExact) {
  const Disk d(48, 10.0, 11.0);
  const auto phi = Field2D::sample(d.grid, [](double x, double y) { return x * x + y * y; });
  const auto u = velocity_from_potential(phi, d.mask);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (!d.mask.interior(k)) continue;
    const double x = d.grid.x(static_cast<std::ptrdiff_t>(k % 48)), y = d.grid.y(static_cast<std::ptrdiff_t>(k / 48));
    EXPECT_NEAR(u.ax.values[k], -2.0 * y, 1e-11);
    EXPECT_NEAR(u.ay.values[k], 2.0 * x, 1e-11);
  }
}

TEST(Velocity, SmoothPotentialFourthOrderAwayFromBoundary) {
  double prev = 0.0;
  for (std::size_t n : {64u, 128u}) {
    const Disk d(n, 10.0, 11.0);
    const auto phi = Field2D::sample(d.grid, [](double x, double y) { return std::sin(x) * std::sin(y); });
    const auto u = velocity_from_potential(phi, d.mask);
    const double h = d.grid.dx();
    double err = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      const double x = d.grid.x(static_cast<std::ptrdiff_t>(k % n)), y = d.grid.y(static_cast<std::ptrdiff_t>(k / n));
      if (std::hypot(x, y) > 10.0 - 3.0 * h) continue;
      err = std::max(err, std::abs(u.ax.values[k] + std::sin(x) * std::cos(y)));
      err = std::max(err, std::abs(u.ay.values[k] - std::cos(x) * std::sin(y)));
    }
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 3.8);
    }
    prev = err;
  }
}

TEST(Velocity, NearlyDivergenceFree) {
  const Disk d(96, 10.0, 11.0);
  const auto phi = Field2D::sample(d.grid, [](double x, double y) { return std::exp(-0.05 * (x * x + y * y)) * std::cos(0.3 * x); });
  const auto u = velocity_from_potential(phi, d.mask);
  const std::size_t n = 96;
  double worst = 0.0;
  for (std::size_t j = 3; j + 3 < n; ++j)
    for (std::size_t i = 3; i + 3 < n; ++i) {
      bool deep = true;
      for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) deep = deep && d.mask.interior(d.grid.index(i + a, j + b));
      if (!deep) continue;
      // the same fourth-order difference commutes with the one inside U
      const auto d4 = [](double m2, double m1, double p1, double p2, double h) {
        return (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
      };
      const double div = d4(u.ax(i - 2, j), u.ax(i - 1, j), u.ax(i + 1, j), u.ax(i + 2, j), d.grid.dx()) +
                         d4(u.ay(i, j - 2), u.ay(i, j - 1), u.ay(i, j + 1), u.ay(i, j + 2), d.grid.dy());
      worst = std::max(worst, std::abs(div));
    }
  EXPECT_LT(worst, 1e-12);
}
