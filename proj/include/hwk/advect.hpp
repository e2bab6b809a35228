/**
 * @file advect.hpp
 * Time-advance engines: backward semi-Lagrangian steps (1D constant
 * velocity, 2D leap-frog characteristics), classical RK4 on the
 * conservative finite-difference operator, and the one-way switch from
 * semi-Lagrangian to finite-difference stepping.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "hwk/grid.hpp"
#include "hwk/reconstruct_fd.hpp"
#include "hwk/reconstruct_sl.hpp"

namespace hwk {

enum class SchemeKind { sl_spline, sl_hweno3, sl_hweno5, fd_weno5, fd_hweno5, mixed };

inline std::string_view to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::sl_spline: return "sl-spline";
    case SchemeKind::sl_hweno3: return "sl-hweno3";
    case SchemeKind::sl_hweno5: return "sl-hweno5";
    case SchemeKind::fd_weno5: return "fd-weno5";
    case SchemeKind::fd_hweno5: return "fd-hweno5";
    case SchemeKind::mixed: return "mixed";
  }
  return "?";
}

inline std::optional<SchemeKind> parse_scheme(std::string_view s) {
  for (auto k : {SchemeKind::sl_spline, SchemeKind::sl_hweno3, SchemeKind::sl_hweno5, SchemeKind::fd_weno5,
                 SchemeKind::fd_hweno5, SchemeKind::mixed})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

inline bool is_semi_lagrangian(SchemeKind k) {
  return k == SchemeKind::sl_spline || k == SchemeKind::sl_hweno3 || k == SchemeKind::sl_hweno5;
}

/// Interpolation used by an SL scheme; the mixed scheme starts with HWENO5.
inline InterpKind interp_kind_of(SchemeKind k) {
  switch (k) {
    case SchemeKind::sl_spline: return InterpKind::cubic_spline;
    case SchemeKind::sl_hweno3: return InterpKind::hweno3;
    default: return InterpKind::hweno5;
  }
}

/// Flux used by an FD scheme; the mixed scheme ends with FD-HWENO5.
inline FluxKind flux_kind_of(SchemeKind k) {
  return k == SchemeKind::fd_weno5 ? FluxKind::weno5_js : FluxKind::hweno5;
}

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::sl_hweno5;
  double cfl_linear = 2.5;      ///< SL phase
  double cfl_nonlinear = 0.85;  ///< FD phase
  double eps = kWenoEpsilon;
  double fixed_point_tol = 1e-12;
  int fixed_point_max_iter = 25;
  Splitting splitting = Splitting::upwind;

  void validate() const {
    if (!(cfl_linear > 0.0) || !(cfl_nonlinear > 0.0)) throw ConfigError("cfl values must be positive");
    if (cfl_nonlinear > 1.0) throw ConfigError("finite-difference cfl must not exceed 1");
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (!(fixed_point_tol > 0.0) || fixed_point_max_iter < 1) throw ConfigError("invalid fixed-point controls");
  }
};

// ---------------------------------------------------------------------------
// Semi-Lagrangian, 1D constant velocity

/// Splits a displacement in index units into an integer node shift and a
/// fraction. Displacements within 1e-12 of an integer snap to it so exact
/// node-to-node shifts stay exact.
inline std::pair<std::ptrdiff_t, double> split_shift(double cells) {
  const double r = std::round(cells);
  if (std::abs(cells - r) <= 1e-12 * std::max(1.0, std::abs(cells))) return {static_cast<std::ptrdiff_t>(r), 0.0};
  const double fl = std::floor(cells);
  return {static_cast<std::ptrdiff_t>(fl), cells - fl};
}

/// f_new(x_i) = f(x_i - a dt) on a periodic grid.
inline Field1D sl_step_const_1d(const Field1D& f, double a, double dt, InterpKind kind, double eps = kWenoEpsilon) {
  if (!f.grid.periodic()) throw ConfigError("sl_step_const_1d requires a periodic grid");
  if (!std::isfinite(a) || !std::isfinite(dt)) throw StepFailure("non-finite velocity or time step");
  const auto [base, s] = split_shift(-a * dt / f.grid.dx());
  Field1D out(f.grid);
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  if (s == 0.0) {
    for (std::ptrdiff_t i = 0; i < n; ++i)
      out.values[static_cast<std::size_t>(i)] = f.values[static_cast<std::size_t>(f.grid.axis().wrap(i + base))];
    return out;
  }
  const Interpolator1D interp(f, kind, eps);
  for (std::ptrdiff_t i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = interp.at_cell(i + base, s);
  return out;
}

// ---------------------------------------------------------------------------
// Semi-Lagrangian, 2D characteristics

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

using VelocityFn = std::function<Vec2(double, double)>;

/// Departure displacement of one node: d = span * A(x - theta * d).
struct CharacteristicFoot {
  Vec2 displacement;
  int iterations = 0;
};

/// Solves the implicit midpoint relation by fixed-point iteration. Throws
/// StepFailure when the displacement grows beyond `max_extent`.
template <class Velocity>
CharacteristicFoot trace_foot(const Velocity& vel, double x, double y, double span, double theta, double tol,
                              int max_iter, double max_extent) {
  Vec2 a = vel(x, y);
  Vec2 d{span * a.x, span * a.y};
  CharacteristicFoot foot;
  for (int it = 1; it <= max_iter; ++it) {
    a = vel(x - theta * d.x, y - theta * d.y);
    const Vec2 nd{span * a.x, span * a.y};
    const double change = std::max(std::abs(nd.x - d.x), std::abs(nd.y - d.y));
    d = nd;
    foot.iterations = it;
    if (!(std::abs(d.x) <= max_extent && std::abs(d.y) <= max_extent)) {
      std::ostringstream msg;
      msg << "characteristic fixed point diverged at (" << x << ", " << y << ")";
      throw StepFailure(msg.str());
    }
    if (change <= tol) break;
  }
  foot.displacement = d;
  return foot;
}

/// Backward SL step in 2D: f_new(x) = f_src(x - d) with
/// d = span * A(x - theta d). The leap-frog step uses f_src = f^{n-1},
/// span = 2 dt, theta = 1/2 and A evaluated from f^n; the bootstrap step
/// uses f_src = f^0 and span = dt. Departure points failing `inside`
/// receive zero.
template <class Velocity>
Field2D sl_step_2d(const Field2D& f_src, const Velocity& vel, double span, double theta, InterpKind kind,
                   const SchemeConfig& cfg, const std::function<bool(double, double)>& inside = {}) {
  const Grid2D& g = f_src.grid;
  const Interpolator2D interp(f_src, kind, cfg.eps);
  const double extent = std::max(g.x_axis().length(), g.y_axis().length());
  Field2D out(g);
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = g.x(static_cast<std::ptrdiff_t>(i));
      const double y = g.y(static_cast<std::ptrdiff_t>(j));
      const auto foot = trace_foot(vel, x, y, span, theta, cfg.fixed_point_tol, cfg.fixed_point_max_iter, extent);
      const double xd = x - foot.displacement.x;
      const double yd = y - foot.displacement.y;
      out.values[g.index(i, j)] = (inside && !inside(xd, yd)) ? 0.0 : interp(xd, yd);
    }
  return out;
}

template <class Velocity>
Field2D sl_step_leapfrog_2d(const Field2D& f_prev, const Velocity& vel_at_tn, double dt, InterpKind kind,
                            const SchemeConfig& cfg, const std::function<bool(double, double)>& inside = {}) {
  return sl_step_2d(f_prev, vel_at_tn, 2.0 * dt, 0.5, kind, cfg, inside);
}

/// Bicubic Lagrange interpolation of node-wise velocity components; zero
/// outside the grid of a non-periodic box.
class GridVelocity {
 public:
  GridVelocity(const Field2D& ux, const Field2D& uy) : ux_(&ux), uy_(&uy) {}

  Vec2 operator()(double x, double y) const {
    const Grid2D& g = ux_->grid;
    const double px = g.x_axis().index_of(x), py = g.y_axis().index_of(y);
    const double fx = std::floor(px), fy = std::floor(py);
    const auto i0 = static_cast<std::ptrdiff_t>(fx), j0 = static_cast<std::ptrdiff_t>(fy);
    const double s = px - fx, t = py - fy;
    const auto wx = weights(s), wy = weights(t);
    Vec2 v;
    for (int b = 0; b < 4; ++b) {
      double rx = 0.0, ry = 0.0;
      for (int a = 0; a < 4; ++a) {
        const auto k = node(g, i0 + a - 1, j0 + b - 1);
        if (!k) continue;
        rx += wx[static_cast<std::size_t>(a)] * ux_->values[*k];
        ry += wx[static_cast<std::size_t>(a)] * uy_->values[*k];
      }
      v.x += wy[static_cast<std::size_t>(b)] * rx;
      v.y += wy[static_cast<std::size_t>(b)] * ry;
    }
    return v;
  }

 private:
  static std::array<double, 4> weights(double s) {
    return {-s * (s - 1.0) * (s - 2.0) / 6.0, (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0, (s + 1.0) * s * (s - 1.0) / 6.0};
  }
  static std::optional<std::size_t> node(const Grid2D& g, std::ptrdiff_t i, std::ptrdiff_t j) {
    const auto nx = static_cast<std::ptrdiff_t>(g.nx()), ny = static_cast<std::ptrdiff_t>(g.ny());
    if (i < 0 || i >= nx) {
      if (!g.x_axis().periodic()) return std::nullopt;
      i = g.x_axis().wrap(i);
    }
    if (j < 0 || j >= ny) {
      if (!g.y_axis().periodic()) return std::nullopt;
      j = g.y_axis().wrap(j);
    }
    return g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  const Field2D* ux_;
  const Field2D* uy_;
};

// ---------------------------------------------------------------------------
// Conservative finite differences with classical RK4

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void check_cfl(double courant, double limit) {
  if (courant > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "CFL violation: dt gives Courant number " << courant << " > limit " << limit;
    throw StepFailure(msg.str());
  }
}

template <class F>
F axpy(const F& x, double a, const F& y) {
  F out = x;
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += a * y.values[k];
  return out;
}

template <class F>
F rk4_combine(const F& f, double dt, const F& k1, const F& k2, const F& k3, const F& k4) {
  F out = f;
  const double c = dt / 6.0;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] += c * ((k1.values[k] + k4.values[k]) + 2.0 * (k2.values[k] + k3.values[k]));
  return out;
}

/// RK4 step of df/dt = -d(a f)/dx with a fixed node-wise velocity.
inline Field1D fd_step_rk4(const Field1D& f, std::span<const double> velocity, double dt, FluxKind kind,
                           double cfl_limit, Splitting split = Splitting::upwind, double eps = kWenoEpsilon) {
  std::vector<double> a(velocity.begin(), velocity.end());
  check_cfl(dt * max_abs(a) / f.grid.dx(), cfl_limit);
  const auto rhs = [&](const Field1D& u) { return divergence_1d(u, a, kind, split, eps); };
  const Field1D k1 = rhs(f);
  const Field1D k2 = rhs(axpy(f, 0.5 * dt, k1));
  const Field1D k3 = rhs(axpy(f, 0.5 * dt, k2));
  const Field1D k4 = rhs(axpy(f, dt, k3));
  return rk4_combine(f, dt, k1, k2, k3, k4);
}

inline Field1D fd_step_rk4(const Field1D& f, double velocity, double dt, FluxKind kind, double cfl_limit,
                           Splitting split = Splitting::upwind, double eps = kWenoEpsilon) {
  const std::vector<double> a(f.size(), velocity);
  return fd_step_rk4(f, a, dt, kind, cfl_limit, split, eps);
}

/// Node-wise advection velocity on a 2D grid.
struct VelocityField2D {
  Field2D ax;
  Field2D ay;
};

/// RK4 step of df/dt = -div(A f) where A is recomputed from each stage
/// state by `provider(const Field2D&) -> VelocityField2D`. `constrain`, when
/// set, is applied to every stage state and to the result (e.g. zero
/// outside a disk). The CFL limit is checked against the first stage.
template <class Provider>
Field2D fd_step_rk4(const Field2D& f, Provider&& provider, double dt, FluxKind kind, double cfl_limit,
                    Splitting split = Splitting::upwind, double eps = kWenoEpsilon,
                    const std::function<void(Field2D&)>& constrain = {}) {
  bool first = true;
  const auto rhs = [&](const Field2D& u) {
    const VelocityField2D v = provider(u);
    if (first) {
      const double c = dt * std::max(max_abs(v.ax.values) / f.grid.dx(), max_abs(v.ay.values) / f.grid.dy());
      check_cfl(c, cfl_limit);
      first = false;
    }
    return divergence_2d(u, v.ax, v.ay, kind, split, eps);
  };
  const auto stage = [&](double a, const Field2D& k) {
    Field2D s = axpy(f, a, k);
    if (constrain) constrain(s);
    return s;
  };
  const Field2D k1 = rhs(f);
  const Field2D k2 = rhs(stage(0.5 * dt, k1));
  const Field2D k3 = rhs(stage(0.5 * dt, k2));
  const Field2D k4 = rhs(stage(dt, k3));
  Field2D out = rk4_combine(f, dt, k1, k2, k3, k4);
  if (constrain) constrain(out);
  return out;
}

// ---------------------------------------------------------------------------
// Mixed SL -> FD controller

enum class Phase { semi_lagrangian, finite_difference };

struct MixedState {
  Phase phase = Phase::semi_lagrangian;
  double threshold = 0.0;  ///< h^3 with h the smallest space step
  double switch_time = -1.0;

  explicit MixedState(double smallest_step = 0.0) : threshold(smallest_step * smallest_step * smallest_step) {}
};

/// One-way switch: moves to the FD phase once the mass change between two
/// consecutive accepted steps exceeds h^3.
inline Phase mixed_controller(MixedState& st, double mass_prev, double mass_curr, double t = 0.0) {
  if (st.phase == Phase::semi_lagrangian && std::abs(mass_curr - mass_prev) > st.threshold) {
    st.phase = Phase::finite_difference;
    st.switch_time = t;
  }
  return st.phase;
}

template <class F>
Phase mixed_controller(MixedState& st, const F& f_prev, const F& f_curr, double t = 0.0) {
  return mixed_controller(st, field_norms(f_prev).mass, field_norms(f_curr).mass, t);
}

}  // namespace hwk
