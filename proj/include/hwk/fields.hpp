/**
 * @file fields.hpp
 * Self-consistent field solvers: the radial electric field of the paraxial
 * beam, and the five-point Poisson problem on a disk embedded in a
 * Cartesian grid with ghost values extrapolated along the boundary normal.
 */
#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "hwk/advect.hpp"
#include "hwk/grid.hpp"

namespace hwk {

// ---------------------------------------------------------------------------
// Radial field

/// E(r) = (1/r) * integral_0^r s rho(s) ds on a signed r axis, by
/// cumulative trapezoid outward from the node nearest r = 0. E(0) = 0.
inline std::vector<double> efield_radial(const Axis& r_axis, std::span<const double> rho) {
  const auto n = static_cast<std::ptrdiff_t>(r_axis.size());
  if (static_cast<std::ptrdiff_t>(rho.size()) != n) throw ConfigError("rho size does not match the r axis");
  std::vector<double> e(rho.size(), 0.0);
  const auto i0 = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::lround(r_axis.index_of(0.0))), 0, n - 1);
  const auto sr = [&](std::ptrdiff_t i) { return r_axis.coord(i) * rho[static_cast<std::size_t>(i)]; };
  const double r0 = r_axis.coord(i0);
  const double start = 0.5 * r0 * r0 * rho[static_cast<std::size_t>(i0)];
  const double h = r_axis.dx();
  double acc = start;
  if (r0 != 0.0) e[static_cast<std::size_t>(i0)] = acc / r0;
  for (std::ptrdiff_t i = i0 + 1; i < n; ++i) {
    acc += 0.5 * h * (sr(i - 1) + sr(i));
    e[static_cast<std::size_t>(i)] = acc / r_axis.coord(i);
  }
  acc = start;
  for (std::ptrdiff_t i = i0 - 1; i >= 0; --i) {
    acc -= 0.5 * h * (sr(i + 1) + sr(i));
    e[static_cast<std::size_t>(i)] = acc / r_axis.coord(i);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Ghost extrapolation along the inward normal

struct WeightedNode {
  std::size_t index;  ///< grid storage index of an interior node
  double weight;
};

struct GhostStencil {
  std::size_t ghost = 0;  ///< grid storage index
  Vec2 foot;              ///< x_p on the circle
  Vec2 x_h;
  Vec2 x_2h;
  double w_p = 0.0, w_h = 0.0, w_2h = 0.0;
  int degree = 0;  ///< 2 (Q2, nine nodes), 1 (Q1, four nodes) or 0 (one node)
  std::vector<WeightedNode> interp_h;   ///< phi(x_h) as interior combination
  std::vector<WeightedNode> interp_2h;  ///< phi(x_2h)
  std::vector<WeightedNode> combined;   ///< w_h*interp_h + w_2h*interp_2h
};

class GhostExtrapolation {
 public:
  GhostExtrapolation(const Grid2D& g, const DiskMask& mask) : grid_(g), radius_(mask.radius) {
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i)
        if (mask.at(g, i, j) == NodeClass::ghost) stencils_.push_back(build(g, mask, i, j));
  }

  [[nodiscard]] const std::vector<GhostStencil>& stencils() const { return stencils_; }
  [[nodiscard]] double radius() const { return radius_; }

  /// Ghost value from interior values of `phi` and the boundary value at
  /// the normal foot.
  [[nodiscard]] double ghost_value(const GhostStencil& st, std::span<const double> phi, double boundary = 0.0) const {
    double v = st.w_p * boundary;
    for (const auto& t : st.combined) v += t.weight * phi[t.index];
    return v;
  }

  /// Overwrites every ghost node of `phi` with its extrapolated value.
  void fill(Field2D& phi, const std::function<double(double, double)>& boundary = {}) const {
    for (const auto& st : stencils_) {
      const double b = boundary ? boundary(st.foot.x, st.foot.y) : 0.0;
      phi.values[st.ghost] = ghost_value(st, phi.values, b);
    }
  }

 private:
  static std::array<double, 3> lagrange3(const std::array<double, 3>& nodes, double x) {
    std::array<double, 3> w{};
    for (std::size_t a = 0; a < 3; ++a) {
      double p = 1.0;
      for (std::size_t b = 0; b < 3; ++b)
        if (a != b) p *= (x - nodes[b]) / (nodes[a] - nodes[b]);
      w[a] = p;
    }
    return w;
  }

  // Line-oriented view: along = coordinate on a grid line, across = line
  // coordinate. For rows, along = x and across = y.
  struct LineFrame {
    bool rows = true;
    const Axis* along = nullptr;
    const Axis* across = nullptr;
    [[nodiscard]] double u(Vec2 p) const { return rows ? p.x : p.y; }
    [[nodiscard]] double v(Vec2 p) const { return rows ? p.y : p.x; }
    [[nodiscard]] std::size_t index(const Grid2D& g, std::ptrdiff_t a, std::ptrdiff_t c) const {
      return rows ? g.index(static_cast<std::size_t>(a), static_cast<std::size_t>(c))
                  : g.index(static_cast<std::size_t>(c), static_cast<std::size_t>(a));
    }
  };

  // Picks `count` consecutive interior nodes on line `c` nearest to `u`.
  static std::optional<std::ptrdiff_t> pick_run(const Grid2D& g, const DiskMask& m, const LineFrame& fr,
                                                std::ptrdiff_t c, double u, int count) {
    const auto n_along = static_cast<std::ptrdiff_t>(fr.along->size());
    const auto n_across = static_cast<std::ptrdiff_t>(fr.across->size());
    if (c < 0 || c >= n_across) return std::nullopt;
    const double p = fr.along->index_of(u);
    const std::ptrdiff_t first = count == 3 ? static_cast<std::ptrdiff_t>(std::lround(p)) - 1
                                            : static_cast<std::ptrdiff_t>(std::floor(p));
    for (std::ptrdiff_t shift : {0, -1, 1}) {
      const std::ptrdiff_t a0 = first + shift;
      bool ok = a0 >= 0 && a0 + count - 1 < n_along;
      for (int k = 0; ok && k < count; ++k) ok = m.interior(fr.index(g, a0 + k, c));
      if (ok) return a0;
    }
    return std::nullopt;
  }

  static GhostStencil build(const Grid2D& g, const DiskMask& m, std::size_t i, std::size_t j) {
    GhostStencil st;
    st.ghost = g.index(i, j);
    const Vec2 pos{g.x(static_cast<std::ptrdiff_t>(i)), g.y(static_cast<std::ptrdiff_t>(j))};
    const double r = std::hypot(pos.x, pos.y);
    const double R = m.radius;
    const Vec2 nrm{-pos.x / r, -pos.y / r};
    const double h = std::min(g.dx(), g.dy());
    const double d = r - R;
    st.foot = {R * pos.x / r, R * pos.y / r};
    st.x_h = {st.foot.x + h * nrm.x, st.foot.y + h * nrm.y};
    st.x_2h = {st.foot.x + 2.0 * h * nrm.x, st.foot.y + 2.0 * h * nrm.y};
    // quadratic extrapolation along the normal: nodes xi = 0, h, 2h, target xi = -d
    st.w_p = (d + h) * (d + 2.0 * h) / (2.0 * h * h);
    st.w_h = -d * (d + 2.0 * h) / (h * h);
    st.w_2h = d * (d + h) / (2.0 * h * h);

    LineFrame fr;
    fr.rows = std::abs(nrm.y) >= std::abs(nrm.x);
    fr.along = fr.rows ? &g.x_axis() : &g.y_axis();
    fr.across = fr.rows ? &g.y_axis() : &g.x_axis();
    const auto c_ghost = static_cast<std::ptrdiff_t>(fr.rows ? j : i);
    const double n_u = fr.u(nrm), n_v = fr.v(nrm);
    const std::ptrdiff_t dir = n_v > 0.0 ? 1 : -1;
    const auto crossing = [&](std::ptrdiff_t c) {
      return fr.u(pos) + (fr.across->coord(c) - fr.v(pos)) * n_u / n_v;
    };

    for (int degree : {2, 1}) {
      const int count = degree + 1;
      std::vector<std::ptrdiff_t> lines, starts;
      bool ok = true;
      for (int l = 1; ok && l <= count; ++l) {
        const std::ptrdiff_t c = c_ghost + dir * l;
        const auto a0 = pick_run(g, m, fr, c, crossing(c), count);
        ok = a0.has_value();
        if (ok) {
          lines.push_back(c);
          starts.push_back(*a0);
        }
      }
      if (!ok) continue;
      st.degree = degree;
      for (int which = 0; which < 2; ++which) {
        const Vec2 target = which == 0 ? st.x_h : st.x_2h;
        auto& out = which == 0 ? st.interp_h : st.interp_2h;
        std::array<double, 3> vnodes{};
        for (int l = 0; l < count; ++l) vnodes[static_cast<std::size_t>(l)] = fr.across->coord(lines[static_cast<std::size_t>(l)]);
        const auto wv = degree == 2 ? lagrange3(vnodes, fr.v(target)) : linear2(vnodes, fr.v(target));
        for (int l = 0; l < count; ++l) {
          std::array<double, 3> unodes{};
          for (int k = 0; k < count; ++k) unodes[static_cast<std::size_t>(k)] = fr.along->coord(starts[static_cast<std::size_t>(l)] + k);
          const auto wu = degree == 2 ? lagrange3(unodes, fr.u(target)) : linear2(unodes, fr.u(target));
          for (int k = 0; k < count; ++k)
            out.push_back({fr.index(g, starts[static_cast<std::size_t>(l)] + k, lines[static_cast<std::size_t>(l)]),
                           wv[static_cast<std::size_t>(l)] * wu[static_cast<std::size_t>(k)]});
        }
      }
      break;
    }
    if (st.degree == 0) {
      // one-node stencil: nearest interior node to the first crossing, else
      // any interior neighbour of the ghost
      std::optional<std::size_t> node;
      const std::ptrdiff_t c = c_ghost + dir;
      if (c >= 0 && c < static_cast<std::ptrdiff_t>(fr.across->size())) {
        const auto a = static_cast<std::ptrdiff_t>(std::lround(fr.along->index_of(crossing(c))));
        if (a >= 0 && a < static_cast<std::ptrdiff_t>(fr.along->size()) && m.interior(fr.index(g, a, c)))
          node = fr.index(g, a, c);
      }
      const auto ii = static_cast<std::ptrdiff_t>(i), jj = static_cast<std::ptrdiff_t>(j);
      for (auto [di, dj] : {std::pair{0, 1}, {0, -1}, {1, 0}, {-1, 0}}) {
        if (node) break;
        const std::ptrdiff_t a = ii + di, b = jj + dj;
        if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(g.nx()) || b >= static_cast<std::ptrdiff_t>(g.ny()))
          continue;
        const std::size_t k = g.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        if (m.interior(k)) node = k;
      }
      if (!node) throw ConfigError("no interior node reachable from a ghost node; grid too coarse for R");
      st.interp_h = {{*node, 1.0}};
      st.interp_2h = {{*node, 1.0}};
    }
    // merge into one combination
    for (const auto& t : st.interp_h) st.combined.push_back({t.index, st.w_h * t.weight});
    for (const auto& t : st.interp_2h) {
      auto it = std::find_if(st.combined.begin(), st.combined.end(), [&](const WeightedNode& w) { return w.index == t.index; });
      if (it != st.combined.end())
        it->weight += st.w_2h * t.weight;
      else
        st.combined.push_back({t.index, st.w_2h * t.weight});
    }
    return st;
  }

  static std::array<double, 3> linear2(const std::array<double, 3>& nodes, double x) {
    const double t = (x - nodes[0]) / (nodes[1] - nodes[0]);
    return {1.0 - t, t, 0.0};
  }

  Grid2D grid_;
  double radius_;
  std::vector<GhostStencil> stencils_;
};

inline GhostExtrapolation build_ghost_extrapolation(const Grid2D& g, const DiskMask& mask) { return {g, mask}; }

// ---------------------------------------------------------------------------
// Poisson on the disk

/// -Laplace(phi) = rho on the interior nodes with phi = 0 on the circle.
/// The five-point matrix is assembled once, ghost neighbours eliminated
/// through their extrapolation weights, and factorized by sparse LU.
class PoissonDisk {
 public:
  PoissonDisk(const Grid2D& g, DiskMask mask)
      : grid_(g), mask_(checked(g, std::move(mask))), ghosts_(g, mask_), unknown_(g.size(), -1) {
    for (std::size_t k = 0; k < g.size(); ++k)
      if (mask_.interior(k)) {
        unknown_[k] = static_cast<std::ptrdiff_t>(nodes_.size());
        nodes_.push_back(k);
      }
    std::vector<std::ptrdiff_t> ghost_slot(g.size(), -1);
    for (std::size_t s = 0; s < ghosts_.stencils().size(); ++s)
      ghost_slot[ghosts_.stencils()[s].ghost] = static_cast<std::ptrdiff_t>(s);

    const double ix2 = 1.0 / (g.dx() * g.dx()), iy2 = 1.0 / (g.dy() * g.dy());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nodes_.size() * 12);
    for (std::size_t row = 0; row < nodes_.size(); ++row) {
      const std::size_t k = nodes_[row];
      const std::size_t i = k % g.nx(), j = k / g.nx();
      trip.emplace_back(static_cast<int>(row), static_cast<int>(row), 2.0 * (ix2 + iy2));
      const std::array<std::pair<std::size_t, double>, 4> nbr{
          {{g.index(i - 1, j), ix2}, {g.index(i + 1, j), ix2}, {g.index(i, j - 1), iy2}, {g.index(i, j + 1), iy2}}};
      for (const auto& [kn, c] : nbr) {
        if (mask_.interior(kn)) {
          trip.emplace_back(static_cast<int>(row), static_cast<int>(unknown_[kn]), -c);
        } else {
          const auto slot = ghost_slot[kn];
          if (slot < 0) throw ConfigError("interior node next to a non-ghost exterior node");
          for (const auto& t : ghosts_.stencils()[static_cast<std::size_t>(slot)].combined)
            trip.emplace_back(static_cast<int>(row), static_cast<int>(unknown_[t.index]), -c * t.weight);
        }
      }
    }
    const auto n = static_cast<Eigen::Index>(nodes_.size());
    matrix_.resize(n, n);
    matrix_.setFromTriplets(trip.begin(), trip.end());
    matrix_.makeCompressed();
    lu_.analyzePattern(matrix_);
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success) throw StepFailure("Poisson matrix factorization failed");
  }

  [[nodiscard]] const DiskMask& mask() const { return mask_; }

  [[nodiscard]] const GhostExtrapolation& ghosts() const { return ghosts_; }
  [[nodiscard]] const Grid2D& grid() const { return grid_; }
  [[nodiscard]] const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  [[nodiscard]] std::size_t unknowns() const { return nodes_.size(); }

  /// Potential on interior nodes, extrapolated ghost values, zero elsewhere.
  [[nodiscard]] Field2D solve(const Field2D& rho) const {
    Eigen::VectorXd b(static_cast<Eigen::Index>(nodes_.size()));
    for (std::size_t r = 0; r < nodes_.size(); ++r) b[static_cast<Eigen::Index>(r)] = rho.values[nodes_[r]];
    Field2D phi(grid_);
    const double bnorm = b.norm();
    if (bnorm == 0.0) return phi;
    const Eigen::VectorXd x = lu_.solve(b);
    const double res = (matrix_ * x - b).norm();
    if (lu_.info() != Eigen::Success || !(res <= 1e-10 * bnorm)) {
      std::ostringstream msg;
      msg << "Poisson solve failed: residual " << res << " vs |rho| " << bnorm;
      throw StepFailure(msg.str());
    }
    for (std::size_t r = 0; r < nodes_.size(); ++r) phi.values[nodes_[r]] = x[static_cast<Eigen::Index>(r)];
    ghosts_.fill(phi);
    return phi;
  }

  /// Writes the assembled matrix as "row col value" lines (0-based).
  void write_coo(std::ostream& os) const {
    os.precision(17);
    for (int c = 0; c < matrix_.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(matrix_, c); it; ++it)
        os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  }

 private:
  static DiskMask checked(const Grid2D& g, DiskMask m) {
    if (m.radius > domain_half_width(g)) throw ConfigError("disk radius exceeds the domain half-width");
    return m;
  }

  Grid2D grid_;
  DiskMask mask_;
  GhostExtrapolation ghosts_;
  std::vector<std::ptrdiff_t> unknown_;
  std::vector<std::size_t> nodes_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

inline Field2D solve_poisson_disk(const PoissonDisk& solver, const Field2D& rho) { return solver.solve(rho); }

/// Gradient of phi at interior nodes: fourth-order centered where the
/// +-2 neighbours carry values (interior or ghost), second-order centered
/// otherwise. Non-interior nodes get zero.
inline VelocityField2D potential_gradient(const Field2D& phi, const DiskMask& mask) {
  const Grid2D& g = phi.grid;
  VelocityField2D grad{Field2D(g), Field2D(g)};
  const auto valued = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(g.nx()) || j >= static_cast<std::ptrdiff_t>(g.ny()))
      return false;
    return mask.cls[g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))] != NodeClass::exterior;
  };
  const auto at = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    return phi.values[g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))];
  };
  for (std::size_t jj = 0; jj < g.ny(); ++jj)
    for (std::size_t ii = 0; ii < g.nx(); ++ii) {
      const std::size_t k = g.index(ii, jj);
      if (!mask.interior(k)) continue;
      const auto i = static_cast<std::ptrdiff_t>(ii), j = static_cast<std::ptrdiff_t>(jj);
      if (valued(i - 2, j) && valued(i + 2, j))
        grad.ax.values[k] = (8.0 * (at(i + 1, j) - at(i - 1, j)) - (at(i + 2, j) - at(i - 2, j))) / (12.0 * g.dx());
      else
        grad.ax.values[k] = (at(i + 1, j) - at(i - 1, j)) / (2.0 * g.dx());
      if (valued(i, j - 2) && valued(i, j + 2))
        grad.ay.values[k] = (8.0 * (at(i, j + 1) - at(i, j - 1)) - (at(i, j + 2) - at(i, j - 2))) / (12.0 * g.dy());
      else
        grad.ay.values[k] = (at(i, j + 1) - at(i, j - 1)) / (2.0 * g.dy());
    }
  return grad;
}

/// U = (-d phi/dy, d phi/dx).
inline VelocityField2D velocity_from_potential(const Field2D& phi, const DiskMask& mask) {
  VelocityField2D grad = potential_gradient(phi, mask);
  VelocityField2D u{Field2D(phi.grid), Field2D(phi.grid)};
  for (std::size_t k = 0; k < phi.size(); ++k) {
    u.ax.values[k] = -grad.ay.values[k];
    u.ay.values[k] = grad.ax.values[k];
  }
  return u;
}

}  // namespace hwk
