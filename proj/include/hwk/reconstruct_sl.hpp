/**
 * @file reconstruct_sl.hpp
 * Point-value interpolation for semi-Lagrangian updates: cubic splines and
 * third/fifth order Hermite WENO interpolants.
 *
 * The Hermite WENO kernels work in the local coordinate s = (x - x_i)/dx of
 * the cell [x_i, x_{i+1}]. Every sub-polynomial is stored as
 * p(s) = f_i + s*(a1 + s*(a2 + s*a3)), so each candidate reproduces f_i
 * exactly at s = 0 and the weighted value inherits that property.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hwk/grid.hpp"

namespace hwk {

/// Regularizer of the nonlinear weights.
inline constexpr double kWenoEpsilon = 1e-6;

enum class InterpKind { cubic_spline, hweno3, hweno5 };

// ---------------------------------------------------------------------------
// Centered derivative estimates

/// Fourth-order centered first derivative from f_{i-2}..f_{i+2}.
inline double eval_derivative4(std::span<const double, 5> f, double dx) {
  return (8.0 * (f[3] - f[1]) - (f[4] - f[0])) / (12.0 * dx);
}

/// Sixth-order centered first derivative from f_{i-3}..f_{i+3}.
inline double eval_derivative6(std::span<const double, 7> f, double dx) {
  return ((f[6] - f[0]) - 9.0 * (f[5] - f[1]) + 45.0 * (f[4] - f[2])) / (60.0 * dx);
}

// ---------------------------------------------------------------------------
// Nonlinear weights

template <std::size_t N>
struct WenoWeights {
  std::array<double, N> linear{};  ///< c_k
  std::array<double, N> beta{};    ///< smoothness indicators
  std::array<double, N> alpha{};
  std::array<double, N> w{};       ///< normalized weights
};

template <std::size_t N>
WenoWeights<N> make_weights(const std::array<double, N>& linear, const std::array<double, N>& beta,
                            double eps = kWenoEpsilon) {
  WenoWeights<N> out;
  out.linear = linear;
  out.beta = beta;
  double total = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double d = eps + beta[k];
    out.alpha[k] = linear[k] / (d * d);
    total += out.alpha[k];
  }
  for (std::size_t k = 0; k < N; ++k) out.w[k] = out.alpha[k] / total;
  return out;
}

/// Smoothness of p(s) = a0 + a1 s + a2 s^2 + a3 s^3 on [0,1]:
/// integral of (p')^2 + (p'')^2 + (p''')^2 in s, which equals
/// sum_m dx^(2m-1) * integral (d^m p/dx^m)^2 dx in physical units.
inline double cubic_smoothness(double a1, double a2, double a3) {
  return a1 * a1 + 2.0 * a1 * a2 + 2.0 * a1 * a3 + (16.0 / 3.0) * a2 * a2 + 15.0 * a2 * a3 +
         (249.0 / 5.0) * a3 * a3;
}

// ---------------------------------------------------------------------------
// Third order Hermite WENO

struct HermiteCell3 {
  double x_left = 0.0;  ///< x_i
  double f_i = 0.0;
  double f_ip1 = 0.0;
  double fp_i = 0.0;    ///< derivative estimate at x_i
  double fp_ip1 = 0.0;  ///< derivative estimate at x_{i+1}
  double dx = 1.0;
};

struct Hweno3Beta {
  double left = 0.0;
  double right = 0.0;
};

inline Hweno3Beta hweno3_smoothness(const HermiteCell3& c) {
  const double df = c.f_ip1 - c.f_i;
  const double dl = df - c.dx * c.fp_i;
  const double dr = c.dx * c.fp_ip1 - df;
  return {df * df + (13.0 / 3.0) * dl * dl, df * df + (13.0 / 3.0) * dr * dr};
}

/// Evaluates the HWENO3 interpolant at local coordinate s in [0,1].
inline double hweno3_eval(const HermiteCell3& c, double s, double eps = kWenoEpsilon,
                          WenoWeights<2>* weights_out = nullptr) {
  const double df = c.f_ip1 - c.f_i;
  const double dl = df - c.dx * c.fp_i;  // h_l(s) - f_i = s*df + dl*s*(s-1)
  const double dr = c.dx * c.fp_ip1 - df;
  const Hweno3Beta b = hweno3_smoothness(c);
  const auto wts = make_weights<2>({1.0 - s, s}, {b.left, b.right}, eps);
  if (weights_out) *weights_out = wts;
  const double sm1 = s - 1.0;
  const double pl = s * (df + dl * sm1);
  const double pr = s * (df + dr * sm1);
  return c.f_i + (wts.w[0] * pl + wts.w[1] * pr);
}

/// Standard cubic Hermite polynomial on the cell.
inline double hermite3(const HermiteCell3& c, double s) {
  const double df = c.f_ip1 - c.f_i;
  const double dl = df - c.dx * c.fp_i;
  const double k3 = c.dx * (c.fp_i + c.fp_ip1) - 2.0 * df;
  return c.f_i + s * (df + dl * (s - 1.0) + k3 * s * (s - 1.0));
}

inline double cell_coordinate(double x_left, double dx, double x) {
  const double s = (x - x_left) / dx;
  if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("interpolation point outside the cell");
  return s;
}

inline double interp_hweno3(const HermiteCell3& c, double x, double eps = kWenoEpsilon) {
  return hweno3_eval(c, cell_coordinate(c.x_left, c.dx, x), eps);
}

// ---------------------------------------------------------------------------
// Fifth order Hermite WENO

struct HermiteCell5 {
  double x_left = 0.0;  ///< x_i
  double f_im1 = 0.0;
  double f_i = 0.0;
  double f_ip1 = 0.0;
  double f_ip2 = 0.0;
  double fp_im1 = 0.0;  ///< derivative estimate at x_{i-1}
  double fp_ip2 = 0.0;  ///< derivative estimate at x_{i+2}
  double dx = 1.0;
};

/// Monomial coefficients (a1, a2, a3) in s of the three cubic candidates.
struct Hweno5Candidates {
  std::array<std::array<double, 3>, 3> a{};  // [l, c, r][a1, a2, a3]
};

inline Hweno5Candidates hweno5_candidates(const HermiteCell5& c) {
  const double fm = c.f_im1, f0 = c.f_i, f1 = c.f_ip1, f2 = c.f_ip2;
  const double gm = c.dx * c.fp_im1;
  const double g2 = c.dx * c.fp_ip2;
  const double a2_shared = 0.5 * (f1 + fm - 2.0 * f0);
  Hweno5Candidates out;
  out.a[0] = {0.25 * (4.0 * f0 + f1 - 5.0 * fm - 2.0 * gm), a2_shared,
              -0.25 * (4.0 * f0 - f1 - 3.0 * fm - 2.0 * gm)};
  out.a[1] = {-(3.0 * f0 - 6.0 * f1 + f2 + 2.0 * fm) / 6.0, a2_shared,
              (3.0 * f0 - 3.0 * f1 + f2 - fm) / 6.0};
  out.a[2] = {-2.0 * f0 + 4.0 * f1 - 2.0 * f2 + g2, 0.25 * (5.0 * f0 - 16.0 * f1 + 11.0 * f2 - 6.0 * g2),
              -0.25 * (f0 - 4.0 * f1 + 3.0 * f2 - 2.0 * g2)};
  return out;
}

inline std::array<double, 3> hweno5_linear_weights(double s) {
  const double cl = (s - 2.0) * (s - 2.0) / 9.0;
  const double cr = (s + 1.0) * (s + 1.0) / 9.0;
  return {cl, 1.0 - cl - cr, cr};
}

inline std::array<double, 3> hweno5_smoothness(const HermiteCell5& c) {
  const auto cand = hweno5_candidates(c);
  std::array<double, 3> b{};
  for (std::size_t k = 0; k < 3; ++k) b[k] = cubic_smoothness(cand.a[k][0], cand.a[k][1], cand.a[k][2]);
  return b;
}

inline double hweno5_eval(const HermiteCell5& c, double s, double eps = kWenoEpsilon,
                          WenoWeights<3>* weights_out = nullptr) {
  const auto cand = hweno5_candidates(c);
  std::array<double, 3> beta{};
  std::array<double, 3> p{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& a = cand.a[k];
    beta[k] = cubic_smoothness(a[0], a[1], a[2]);
    p[k] = s * (a[0] + s * (a[1] + s * a[2]));
  }
  const auto wts = make_weights<3>(hweno5_linear_weights(s), beta, eps);
  if (weights_out) *weights_out = wts;
  return c.f_i + (wts.w[0] * p[0] + wts.w[1] * p[1] + wts.w[2] * p[2]);
}

/// Quintic Hermite interpolant H_5 written as the linear-weight combination
/// of the three candidates.
inline double hermite5(const HermiteCell5& c, double s) {
  const auto cand = hweno5_candidates(c);
  const auto lin = hweno5_linear_weights(s);
  double acc = 0.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& a = cand.a[k];
    acc += lin[k] * s * (a[0] + s * (a[1] + s * a[2]));
  }
  return c.f_i + acc;
}

inline double interp_hweno5(const HermiteCell5& c, double x, double eps = kWenoEpsilon) {
  return hweno5_eval(c, cell_coordinate(c.x_left, c.dx, x), eps);
}

// ---------------------------------------------------------------------------
// Line accessors: value at any integer index, periodic wrap or zero
// extension beyond a Dirichlet boundary.

struct StridedLine {
  const double* base = nullptr;
  std::ptrdiff_t n = 0;
  std::ptrdiff_t stride = 1;
  bool periodic = true;

  double operator()(std::ptrdiff_t k) const {
    if (k >= 0 && k < n) return base[k * stride];
    if (!periodic) return 0.0;
    k %= n;
    if (k < 0) k += n;
    return base[k * stride];
  }
};

template <class Line>
double line_derivative4(const Line& f, std::ptrdiff_t i, double dx) {
  const std::array<double, 5> v{f(i - 2), f(i - 1), f(i), f(i + 1), f(i + 2)};
  return eval_derivative4(v, dx);
}

template <class Line>
double line_derivative6(const Line& f, std::ptrdiff_t i, double dx) {
  const std::array<double, 7> v{f(i - 3), f(i - 2), f(i - 1), f(i), f(i + 1), f(i + 2), f(i + 3)};
  return eval_derivative6(v, dx);
}

template <class Line>
HermiteCell3 gather_cell3(const Line& f, std::ptrdiff_t i, double dx) {
  HermiteCell3 c;
  c.f_i = f(i);
  c.f_ip1 = f(i + 1);
  c.fp_i = line_derivative4(f, i, dx);
  c.fp_ip1 = line_derivative4(f, i + 1, dx);
  c.dx = dx;
  return c;
}

template <class Line>
HermiteCell5 gather_cell5(const Line& f, std::ptrdiff_t i, double dx) {
  HermiteCell5 c;
  c.f_im1 = f(i - 1);
  c.f_i = f(i);
  c.f_ip1 = f(i + 1);
  c.f_ip2 = f(i + 2);
  c.fp_im1 = line_derivative6(f, i - 1, dx);
  c.fp_ip2 = line_derivative6(f, i + 2, dx);
  c.dx = dx;
  return c;
}

/// Hermite WENO value on cell i of a line at local coordinate s.
template <class Line>
double hweno_line_eval(const Line& f, InterpKind kind, std::ptrdiff_t i, double s, double dx,
                       double eps = kWenoEpsilon) {
  if (s == 0.0) return f(i);
  if (kind == InterpKind::hweno3) return hweno3_eval(gather_cell3(f, i, dx), s, eps);
  return hweno5_eval(gather_cell5(f, i, dx), s, eps);
}

// ---------------------------------------------------------------------------
// Cubic splines

enum class SplineEnd { periodic, natural, not_a_knot };

/// Interpolating cubic spline on uniform nodes, stored as node values and
/// second derivatives M_i.
class CubicSpline1D {
 public:
  CubicSpline1D() = default;

  CubicSpline1D(std::span<const double> values, double dx, SplineEnd end)
      : f_(values.begin(), values.end()), m_(values.size(), 0.0), dx_(dx), end_(end) {
    const std::size_t n = f_.size();
    if (n < 4) throw ConfigError("cubic spline needs at least 4 nodes");
    std::vector<double> rhs(n);
    const double k = 6.0 / (dx * dx);
    if (end == SplineEnd::periodic) {
      for (std::size_t i = 0; i < n; ++i)
        rhs[i] = k * (f_[(i + 1) % n] - 2.0 * f_[i] + f_[(i + n - 1) % n]);
      solve_cyclic(rhs);
    } else {
      for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = k * (f_[i + 1] - 2.0 * f_[i] + f_[i - 1]);
      solve_open(rhs, end);
    }
  }

  [[nodiscard]] std::size_t size() const { return f_.size(); }
  [[nodiscard]] double dx() const { return dx_; }
  [[nodiscard]] SplineEnd end() const { return end_; }
  [[nodiscard]] const std::vector<double>& second_derivatives() const { return m_; }
  [[nodiscard]] const std::vector<double>& values() const { return f_; }

  /// Value on cell [x_i, x_{i+1}] at local coordinate s. For non-periodic
  /// splines i must lie in [0, n-2].
  [[nodiscard]] double eval(std::ptrdiff_t i, double s) const {
    const auto n = static_cast<std::ptrdiff_t>(f_.size());
    std::size_t a, b;
    if (end_ == SplineEnd::periodic) {
      i %= n;
      if (i < 0) i += n;
      a = static_cast<std::size_t>(i);
      b = (a + 1) % f_.size();
    } else {
      a = static_cast<std::size_t>(i);
      b = a + 1;
    }
    if (s == 0.0) return f_[a];
    const double q = dx_ * dx_ / 6.0;
    return f_[a] + s * (f_[b] - f_[a]) - q * s * (1.0 - s) * ((2.0 - s) * m_[a] + (1.0 + s) * m_[b]);
  }

 private:
  // Thomas algorithm for the tridiagonal system 1-4-1 on rows [lo, hi].
  static void thomas(std::vector<double>& x, std::size_t lo, std::size_t hi) {
    const std::size_t m = hi - lo + 1;
    std::vector<double> c(m);
    double denom = 4.0;
    c[0] = 1.0 / denom;
    x[lo] /= denom;
    for (std::size_t k = 1; k < m; ++k) {
      denom = 4.0 - c[k - 1];
      c[k] = 1.0 / denom;
      x[lo + k] = (x[lo + k] - x[lo + k - 1]) / denom;
    }
    for (std::size_t k = m - 1; k-- > 0;) x[lo + k] -= c[k] * x[lo + k + 1];
  }

  void solve_open(std::vector<double>& rhs, SplineEnd end) {
    const std::size_t n = f_.size();
    if (end == SplineEnd::natural) {
      // M_0 = M_{n-1} = 0
      thomas(rhs, 1, n - 2);
      rhs[0] = rhs[n - 1] = 0.0;
      m_ = rhs;
      return;
    }
    // Not-a-knot on a uniform grid: M_0 - 2M_1 + M_2 = 0, which turns the
    // first and last interior rows into 6 M_1 = r_1 and 6 M_{n-2} = r_{n-2}.
    if (n < 5) throw ConfigError("not-a-knot spline needs at least 5 nodes");
    const double m1 = rhs[1] / 6.0;
    const double mn = rhs[n - 2] / 6.0;
    if (n > 5) {
      rhs[2] -= m1;
      rhs[n - 3] -= mn;
      thomas(rhs, 2, n - 3);
    } else {
      rhs[2] = (rhs[2] - m1 - mn) / 4.0;
    }
    rhs[1] = m1;
    rhs[n - 2] = mn;
    rhs[0] = 2.0 * rhs[1] - rhs[2];
    rhs[n - 1] = 2.0 * rhs[n - 2] - rhs[n - 3];
    m_ = rhs;
  }

  // Cyclic 1-4-1 system via Sherman-Morrison.
  void solve_cyclic(std::vector<double>& rhs) {
    const std::size_t n = f_.size();
    const double gamma = -4.0;
    std::vector<double> diag(n, 4.0);
    diag[0] = 4.0 - gamma;
    diag[n - 1] = 4.0 - 1.0 / gamma;
    std::vector<double> u(n, 0.0);
    u[0] = gamma;
    u[n - 1] = 1.0;
    auto solve = [&](std::vector<double>& x) {
      std::vector<double> c(n);
      c[0] = 1.0 / diag[0];
      x[0] /= diag[0];
      for (std::size_t k = 1; k < n; ++k) {
        const double d = diag[k] - c[k - 1];
        c[k] = 1.0 / d;
        x[k] = (x[k] - x[k - 1]) / d;
      }
      for (std::size_t k = n - 1; k-- > 0;) x[k] -= c[k] * x[k + 1];
    };
    solve(rhs);
    solve(u);
    const double factor = (rhs[0] + rhs[n - 1] / gamma) / (1.0 + u[0] + u[n - 1] / gamma);
    for (std::size_t k = 0; k < n; ++k) rhs[k] -= factor * u[k];
    m_ = rhs;
  }

  std::vector<double> f_;
  std::vector<double> m_;
  double dx_ = 1.0;
  SplineEnd end_ = SplineEnd::periodic;
};

inline SplineEnd default_spline_end(const Axis& a) {
  return a.periodic() ? SplineEnd::periodic : SplineEnd::natural;
}

inline CubicSpline1D make_spline(const Field1D& f, SplineEnd end) {
  return {std::span<const double>(f.values), f.grid.dx(), end};
}

inline CubicSpline1D make_spline(const Field1D& f) { return make_spline(f, default_spline_end(f.grid.axis())); }

/// Spline value at physical position x. Periodic splines wrap x; others
/// require x inside [x_min, x_max].
inline double interp_cubic_spline(const CubicSpline1D& sp, const Axis& axis, double x) {
  const double p = axis.index_of(x);
  if (sp.end() != SplineEnd::periodic) {
    const double last = static_cast<double>(axis.size() - 1);
    if (!(p >= 0.0 && p <= last)) throw std::domain_error("spline evaluation outside the domain");
    auto i = static_cast<std::ptrdiff_t>(std::floor(p));
    if (i == static_cast<std::ptrdiff_t>(axis.size()) - 1) --i;
    return sp.eval(i, p - static_cast<double>(i));
  }
  const double fl = std::floor(p);
  return sp.eval(static_cast<std::ptrdiff_t>(fl), p - fl);
}

inline double interp_cubic_spline(const Field1D& f, double x) {
  return interp_cubic_spline(make_spline(f), f.grid.axis(), x);
}

/// Tensor-product bicubic spline: node values plus M_xx, M_yy and M_xxyy.
class CubicSpline2D {
 public:
  explicit CubicSpline2D(const Field2D& f)
      : grid_(f.grid),
        f_(f.values),
        mxx_(f.size()),
        myy_(f.size()),
        mxy_(f.size()) {
    const std::size_t nx = grid_.nx(), ny = grid_.ny();
    const SplineEnd ex = default_spline_end(grid_.x_axis());
    const SplineEnd ey = default_spline_end(grid_.y_axis());
    std::vector<double> row(nx), col(ny);
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) row[i] = f_[grid_.index(i, j)];
      const CubicSpline1D sp(row, grid_.dx(), ex);
      for (std::size_t i = 0; i < nx; ++i) mxx_[grid_.index(i, j)] = sp.second_derivatives()[i];
    }
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) col[j] = f_[grid_.index(i, j)];
      const CubicSpline1D sp(col, grid_.dy(), ey);
      for (std::size_t j = 0; j < ny; ++j) col[j] = mxx_[grid_.index(i, j)];
      const CubicSpline1D spm(col, grid_.dy(), ey);
      for (std::size_t j = 0; j < ny; ++j) {
        myy_[grid_.index(i, j)] = sp.second_derivatives()[j];
        mxy_[grid_.index(i, j)] = spm.second_derivatives()[j];
      }
    }
  }

  /// Value at (x, y); zero outside a non-periodic box.
  [[nodiscard]] double operator()(double x, double y) const {
    std::size_t ia, ib, ja, jb;
    double s, t;
    if (!locate(grid_.x_axis(), x, ia, ib, s) || !locate(grid_.y_axis(), y, ja, jb, t)) return 0.0;
    const double qx = grid_.dx() * grid_.dx() / 6.0;
    const double qy = grid_.dy() * grid_.dy() / 6.0;
    const double ax[2] = {1.0 - s, s};
    const double cx[2] = {-qx * s * (1.0 - s) * (2.0 - s), -qx * s * (1.0 - s) * (1.0 + s)};
    const double ay[2] = {1.0 - t, t};
    const double cy[2] = {-qy * t * (1.0 - t) * (2.0 - t), -qy * t * (1.0 - t) * (1.0 + t)};
    const std::size_t is[2] = {ia, ib};
    const std::size_t js[2] = {ja, jb};
    double acc = 0.0;
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a) {
        const std::size_t k = grid_.index(is[a], js[b]);
        acc += ax[a] * ay[b] * f_[k] + ax[a] * cy[b] * myy_[k] + cx[a] * ay[b] * mxx_[k] + cx[a] * cy[b] * mxy_[k];
      }
    return acc;
  }

 private:
  static bool locate(const Axis& ax, double x, std::size_t& a, std::size_t& b, double& s) {
    const double p = ax.index_of(x);
    const auto n = static_cast<std::ptrdiff_t>(ax.size());
    if (ax.periodic()) {
      const double fl = std::floor(p);
      s = p - fl;
      const std::ptrdiff_t i = ax.wrap(static_cast<std::ptrdiff_t>(fl));
      a = static_cast<std::size_t>(i);
      b = static_cast<std::size_t>((i + 1) % n);
      return true;
    }
    if (!(p >= 0.0 && p <= static_cast<double>(n - 1))) return false;
    auto i = static_cast<std::ptrdiff_t>(std::floor(p));
    if (i == n - 1) --i;
    s = p - static_cast<double>(i);
    a = static_cast<std::size_t>(i);
    b = a + 1;
    return true;
  }

  Grid2D grid_;
  std::vector<double> f_, mxx_, myy_, mxy_;
};

// ---------------------------------------------------------------------------
// Field interpolators used by the advection engines

/// Interpolates a 1D field at arbitrary positions with the chosen kind.
class Interpolator1D {
 public:
  Interpolator1D(const Field1D& f, InterpKind kind, double eps = kWenoEpsilon)
      : field_(&f), kind_(kind), eps_(eps) {
    if (kind == InterpKind::cubic_spline) spline_ = make_spline(f);
  }

  /// Value on cell i (any integer for periodic grids) at local s in [0,1).
  [[nodiscard]] double at_cell(std::ptrdiff_t i, double s) const {
    const Axis& ax = field_->grid.axis();
    const auto n = static_cast<std::ptrdiff_t>(ax.size());
    if (!ax.periodic() && (i < 0 || i > n - 1 || (i == n - 1 && s > 0.0))) return 0.0;
    if (kind_ == InterpKind::cubic_spline) {
      if (!ax.periodic() && i == n - 1) return spline_.values().back();
      return spline_.eval(i, s);
    }
    const StridedLine line{field_->values.data(), n, 1, ax.periodic()};
    return hweno_line_eval(line, kind_, i, s, ax.dx(), eps_);
  }

  [[nodiscard]] double operator()(double x) const {
    const double p = field_->grid.axis().index_of(x);
    const double fl = std::floor(p);
    return at_cell(static_cast<std::ptrdiff_t>(fl), p - fl);
  }

 private:
  const Field1D* field_;
  InterpKind kind_;
  double eps_;
  CubicSpline1D spline_;
};

/// 2D interpolation: bicubic spline, or Hermite WENO applied dimension by
/// dimension (x on each contributing row, then y on the row results).
class Interpolator2D {
 public:
  Interpolator2D(const Field2D& f, InterpKind kind, double eps = kWenoEpsilon)
      : field_(&f), kind_(kind), eps_(eps) {
    if (kind == InterpKind::cubic_spline) spline_.emplace_back(f);
  }

  [[nodiscard]] double operator()(double x, double y) const {
    if (kind_ == InterpKind::cubic_spline) return spline_.front()(x, y);
    const Grid2D& g = field_->grid;
    const double px = g.x_axis().index_of(x);
    const double py = g.y_axis().index_of(y);
    const double fx = std::floor(px), fy = std::floor(py);
    const auto ci = static_cast<std::ptrdiff_t>(fx);
    const auto cj = static_cast<std::ptrdiff_t>(fy);
    const double s = px - fx, t = py - fy;
    const auto nx = static_cast<std::ptrdiff_t>(g.nx());
    const auto ny = static_cast<std::ptrdiff_t>(g.ny());
    if (!g.x_axis().periodic() && (ci < 0 || ci > nx - 1 || (ci == nx - 1 && s > 0.0))) return 0.0;
    if (!g.y_axis().periodic() && (cj < 0 || cj > ny - 1 || (cj == ny - 1 && t > 0.0))) return 0.0;

    const std::ptrdiff_t lo = kind_ == InterpKind::hweno3 ? -2 : -4;
    const std::ptrdiff_t hi = kind_ == InterpKind::hweno3 ? 3 : 5;
    if (t == 0.0) return row_value(cj, ci, s);
    std::array<double, 10> rows{};
    for (std::ptrdiff_t m = lo; m <= hi; ++m) rows[static_cast<std::size_t>(m - lo)] = row_value(cj + m, ci, s);
    const auto local = [&](std::ptrdiff_t k) { return rows[static_cast<std::size_t>(k - lo)]; };
    return hweno_line_eval(local, kind_, 0, t, g.dy(), eps_);
  }

 private:
  // x-interpolated value on row j (zero/wrapped outside the grid).
  [[nodiscard]] double row_value(std::ptrdiff_t j, std::ptrdiff_t ci, double s) const {
    const Grid2D& g = field_->grid;
    const auto ny = static_cast<std::ptrdiff_t>(g.ny());
    if (j < 0 || j >= ny) {
      if (!g.y_axis().periodic()) return 0.0;
      j = g.y_axis().wrap(j);
    }
    const StridedLine line{field_->values.data() + static_cast<std::size_t>(j) * g.nx(),
                           static_cast<std::ptrdiff_t>(g.nx()), 1, g.x_axis().periodic()};
    return hweno_line_eval(line, kind_, ci, s, g.dx(), eps_);
  }

  const Field2D* field_;
  InterpKind kind_;
  double eps_;
  std::vector<CubicSpline2D> spline_;
};

}  // namespace hwk
