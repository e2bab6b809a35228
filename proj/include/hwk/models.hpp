#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hwk/advect.hpp"
#include "hwk/diagnostics.hpp"
#include "hwk/fields.hpp"
#include "hwk/grid.hpp"

namespace hwk {

using SnapshotHook2D = std::function<void(double, const Field2D&)>;

/// Number of equal steps covering `t_end` with steps no larger than `dt_max`.
inline std::size_t step_count(double t_end, double dt_max) {
  if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ConfigError("time step must be positive");
  const double q = t_end / dt_max;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(std::max(1.0, r));
  return static_cast<std::size_t>(std::ceil(q));
}

// ---------------------------------------------------------------------------
// 1D transport

enum class Profile { sine, step, composite };

inline std::optional<Profile> parse_profile(std::string_view s) {
  if (s == "sine") return Profile::sine;
  if (s == "step") return Profile::step;
  if (s == "composite") return Profile::composite;
  return std::nullopt;
}

inline std::string_view to_string(Profile p) {
  switch (p) {
    case Profile::sine: return "sine";
    case Profile::step: return "step";
    case Profile::composite: return "composite";
  }
  return "?";
}

struct CompositeParams {
  double a = 0.5;
  double z = -0.7;
  double delta = 0.005;
  double alpha = 10.0;
  double beta = std::numbers::ln2 / (36.0 * 0.005 * 0.005);
};

/// Initial profiles on [-1, 1]; `x` is taken as already wrapped.
inline double profile_value(Profile p, double x, const CompositeParams& c = {}) {
  switch (p) {
    case Profile::sine: return std::sin(std::numbers::pi * x);
    case Profile::step: return (x >= -1.0 && x <= 0.0) ? 1.0 : 0.0;
    case Profile::composite: {
      const auto G = [&](double z) { return std::exp(-c.beta * (x - z) * (x - z)); };
      const auto F = [&](double a) { return std::sqrt(std::max(1.0 - c.alpha * c.alpha * (x - a) * (x - a), 0.0)); };
      if (x >= -0.8 && x <= -0.6) return (G(c.z - c.delta) + G(c.z + c.delta) + 4.0 * G(c.z)) / 6.0;
      if (x >= -0.4 && x <= -0.2) return 1.0;
      if (x >= 0.0 && x <= 0.2) return 1.0 - std::abs(10.0 * (x - 0.1));
      if (x >= 0.4 && x <= 0.6) return (F(c.a - c.delta) + F(c.a + c.delta) + 4.0 * F(c.a)) / 6.0;
      return 0.0;
    }
  }
  return 0.0;
}

struct Transport1DSetup {
  Profile profile = Profile::sine;
  double x_min = -1.0;
  double x_max = 1.0;
  double velocity = 1.0;
  double t_end = 8.0;
  /// FD step is cfl * dx^p / |a|; p = 5/4 keeps RK4 below the fifth-order
  /// spatial error in convergence studies.
  double fd_dt_exponent = 1.0;
};

/// Exact solution: the initial profile translated with periodic wrap.
inline double transport1d_exact(const Transport1DSetup& s, double x, double t) {
  const double L = s.x_max - s.x_min;
  double y = x - s.velocity * t - s.x_min;
  y -= L * std::floor(y / L);
  if (y >= L) y -= L;
  return profile_value(s.profile, s.x_min + y);
}

struct Transport1DResult {
  Field1D final_field;
  Field1D exact;
  double dt = 0.0;
  std::size_t steps = 0;
  double l1_error = 0.0;
  double tv_error = 0.0;
  std::vector<DiagnosticsRecord> series;
};

inline DiagnosticsRecord record_of(double t, const FieldNorms& nm, double energy = 0.0) {
  DiagnosticsRecord r;
  r.t = t;
  r.mass = nm.mass;
  r.l1 = nm.l1;
  r.l2 = nm.l2;
  r.tv = nm.tv;
  r.energy = energy;
  r.min = nm.min;
  r.max = nm.max;
  return r;
}

inline Transport1DResult run_transport1d(const Transport1DSetup& setup, SchemeKind scheme, std::size_t n,
                                         const SchemeConfig& cfg, const StepHook& hook = {}) {
  cfg.validate();
  if (scheme == SchemeKind::mixed) throw ConfigError("the mixed scheme is only defined for the diocotron experiment");
  if (!(setup.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  const Grid1D grid(n, setup.x_min, setup.x_max, Boundary::periodic);
  const double speed = std::abs(setup.velocity) > 0.0 ? std::abs(setup.velocity) : 1.0;
  const bool sl = is_semi_lagrangian(scheme);
  const double dt_max = sl ? cfg.cfl_linear * grid.dx() / speed
                           : cfg.cfl_nonlinear * std::pow(grid.dx(), setup.fd_dt_exponent) / speed;

  Transport1DResult res{Field1D::sample(grid, [&](double x) { return transport1d_exact(setup, x, 0.0); }),
                        Field1D(grid), 0.0, 0, 0.0, 0.0, {}};
  res.steps = setup.t_end > 0.0 ? step_count(setup.t_end, dt_max) : 0;
  res.dt = res.steps ? setup.t_end / static_cast<double>(res.steps) : 0.0;

  Field1D& f = res.final_field;
  DiagnosticsRecord initial = record_of(0.0, field_norms(f));
  initial.relate_to(initial);
  res.series.push_back(initial);
  if (hook) hook(initial);
  for (std::size_t k = 1; k <= res.steps; ++k) {
    if (sl)
      f = sl_step_const_1d(f, setup.velocity, res.dt, interp_kind_of(scheme), cfg.eps);
    else
      f = fd_step_rk4(f, setup.velocity, res.dt, flux_kind_of(scheme), 1.0, cfg.splitting, cfg.eps);
    if (!all_finite(f)) throw StepFailure("non-finite values at t = " + std::to_string(static_cast<double>(k) * res.dt));
    DiagnosticsRecord r = record_of(static_cast<double>(k) * res.dt, field_norms(f));
    r.relate_to(initial);
    res.series.push_back(r);
    if (hook) hook(r);
  }
  res.exact = Field1D::sample(grid, [&](double x) { return transport1d_exact(setup, x, setup.t_end); });
  CompensatedSum err;
  for (std::size_t i = 0; i < n; ++i) err.add(std::abs(f[i] - res.exact[i]));
  res.l1_error = err.value() * grid.dx();
  res.tv_error = std::abs(field_norms(f).tv - field_norms(res.exact).tv);
  return res;
}

// ---------------------------------------------------------------------------
// Paraxial beam in (r, v)

struct BeamSetup {
  double epsilon = 0.7;
  double half_width = 4.0;
  double alpha = 0.2;

  [[nodiscard]] double chi(double r) const { return 0.5 * std::erf((r + 1.2) / 0.3) - 0.5 * std::erf((r - 1.2) / 0.3); }
  [[nodiscard]] double f0(double r, double v) const {
    return 4.0 / std::sqrt(2.0 * std::numbers::pi * alpha) * chi(r) * std::exp(-v * v / (2.0 * alpha));
  }
  [[nodiscard]] Grid2D grid(std::size_t nx, std::size_t ny = 0) const {
    return {Axis(nx, -half_width, half_width, Boundary::dirichlet), Axis(ny ? ny : nx, -half_width, half_width, Boundary::dirichlet)};
  }
};

/// rho(r) = integral f dv by the trapezoid rule along v.
inline std::vector<double> beam_density(const Field2D& f) {
  const Grid2D& g = f.grid;
  std::vector<double> rho(g.nx(), 0.0);
  for (std::size_t i = 0; i < g.nx(); ++i) {
    double s = 0.5 * (f(i, 0) + f(i, g.ny() - 1));
    for (std::size_t j = 1; j + 1 < g.ny(); ++j) s += f(i, j);
    rho[i] = s * g.dy();
  }
  return rho;
}

/// A = (v / eps, E_f(r) - r / eps) on the grid nodes.
inline VelocityField2D rhs_beam(const Field2D& f, const BeamSetup& setup) {
  const Grid2D& g = f.grid;
  const std::vector<double> e = efield_radial(g.x_axis(), beam_density(f));
  VelocityField2D a{Field2D(g), Field2D(g)};
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double r = g.x(static_cast<std::ptrdiff_t>(i)), v = g.y(static_cast<std::ptrdiff_t>(j));
      a.ax(i, j) = v / setup.epsilon;
      a.ay(i, j) = e[i] - r / setup.epsilon;
    }
  return a;
}

/// Kinetic energy integral (v^2 / 2) f dr dv.
inline double beam_kinetic_energy(const Field2D& f) {
  const Grid2D& g = f.grid;
  CompensatedSum s;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    const double v = g.y(static_cast<std::ptrdiff_t>(j));
    for (std::size_t i = 0; i < g.nx(); ++i) s.add(0.5 * v * v * f(i, j));
  }
  return s.value() * g.cell_volume();
}

/// Continuous A(r, v) for characteristic tracing: E_f by cubic Lagrange
/// interpolation of the node values, E_edge * r_edge / r beyond the box.
class BeamVelocity {
 public:
  BeamVelocity(const Axis& r_axis, std::vector<double> e, double epsilon)
      : axis_(r_axis), e_(std::move(e)), eps_(epsilon) {}

  [[nodiscard]] double efield(double r) const {
    const auto n = static_cast<std::ptrdiff_t>(e_.size());
    if (r <= axis_.lo()) return e_.front() * axis_.lo() / r;
    if (r >= axis_.coord(n - 1)) return e_.back() * axis_.coord(n - 1) / r;
    const double p = axis_.index_of(r);
    const auto i = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::floor(p)) - 1, 0, n - 4);
    const double s = p - static_cast<double>(i);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) {
      double w = 1.0;
      for (int b = 0; b < 4; ++b)
        if (a != b) w *= (s - b) / static_cast<double>(a - b);
      out += w * e_[static_cast<std::size_t>(i + a)];
    }
    return out;
  }

  Vec2 operator()(double r, double v) const { return {v / eps_, efield(r) - r / eps_}; }

 private:
  Axis axis_;
  std::vector<double> e_;
  double eps_;
};

struct BeamRunOptions {
  SchemeKind scheme = SchemeKind::fd_hweno5;
  std::size_t n = 129;
  std::size_t ny = 0;  ///< 0 means ny = n
  double dt = 0.0;  ///< 0 selects dt = 0.08 dx (1/800 at n = 513)
  double t_end = 20.0;
  std::vector<double> snapshot_times{10.0, 15.0, 20.0};
};

struct BeamResult {
  Field2D final_field;
  double dt = 0.0;
  std::vector<DiagnosticsRecord> series;
};

inline double default_beam_dt(const Grid2D& g) { return 0.08 * std::min(g.dx(), g.dy()); }

inline BeamResult run_beam(const BeamSetup& setup, const BeamRunOptions& opt, const SchemeConfig& cfg,
                           const StepHook& hook = {}, const SnapshotHook2D& snapshot = {}) {
  cfg.validate();
  if (opt.scheme == SchemeKind::mixed) throw ConfigError("the mixed scheme is only defined for the diocotron experiment");
  const Grid2D g = setup.grid(opt.n, opt.ny);
  const double dt = opt.dt > 0.0 ? opt.dt : default_beam_dt(g);
  const std::size_t steps = opt.t_end > 0.0 ? step_count(opt.t_end, dt) : 0;
  const double h = steps ? opt.t_end / static_cast<double>(steps) : dt;

  BeamResult res{Field2D::sample(g, [&](double r, double v) { return setup.f0(r, v); }), h, {}};
  const auto record = [&](double t, const Field2D& f, const DiagnosticsRecord* initial) {
    DiagnosticsRecord r = record_of(t, field_norms(f), beam_kinetic_energy(f));
    r.relate_to(initial ? *initial : r);
    res.series.push_back(r);
    if (hook) hook(r);
  };
  record(0.0, res.final_field, nullptr);
  const DiagnosticsRecord initial = res.series.front();
  std::size_t next_snap = 0;
  const auto maybe_snapshot = [&](double t, const Field2D& f) {
    while (next_snap < opt.snapshot_times.size() && opt.snapshot_times[next_snap] <= t + 0.5 * h) {
      if (snapshot) snapshot(opt.snapshot_times[next_snap], f);
      ++next_snap;
    }
  };
  maybe_snapshot(0.0, res.final_field);

  if (is_semi_lagrangian(opt.scheme)) {
    const InterpKind kind = interp_kind_of(opt.scheme);
    const auto velocity = [&](const Field2D& f) {
      return BeamVelocity(g.x_axis(), efield_radial(g.x_axis(), beam_density(f)), setup.epsilon);
    };
    Field2D prev = res.final_field;
    Field2D curr = prev;
    for (std::size_t k = 1; k <= steps; ++k) {
      Field2D next = k == 1 ? sl_step_2d(prev, velocity(prev), h, 0.5, kind, cfg)
                            : sl_step_leapfrog_2d(prev, velocity(curr), h, kind, cfg);
      if (!all_finite(next)) throw StepFailure("non-finite values at t = " + std::to_string(static_cast<double>(k) * h));
      if (k > 1) prev = std::move(curr);
      curr = std::move(next);
      const double t = static_cast<double>(k) * h;
      record(t, curr, &initial);
      maybe_snapshot(t, curr);
    }
    res.final_field = std::move(curr);
  } else {
    const FluxKind kind = flux_kind_of(opt.scheme);
    const auto provider = [&](const Field2D& f) { return rhs_beam(f, setup); };
    Field2D f = res.final_field;
    for (std::size_t k = 1; k <= steps; ++k) {
      f = fd_step_rk4(f, provider, h, kind, cfg.cfl_nonlinear, cfg.splitting, cfg.eps);
      const double t = static_cast<double>(k) * h;
      if (!all_finite(f)) throw StepFailure("non-finite values at t = " + std::to_string(t));
      record(t, f, &initial);
      maybe_snapshot(t, f);
    }
    res.final_field = std::move(f);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Guiding center: diocotron instability on a disk

struct DiocotronSetup {
  double epsilon = 0.001;
  double r_minus = 5.0;
  double r_plus = 8.0;
  int mode = 7;
  double radius = 10.0;
  double half_width = 11.0;

  [[nodiscard]] double rho0(double x, double y) const {
    const double r = std::hypot(x, y);
    if (r < r_minus || r > r_plus) return 0.0;
    return (1.0 + epsilon * std::cos(mode * std::atan2(y, x))) * std::exp(-4.0 * (r - 6.5) * (r - 6.5));
  }
  [[nodiscard]] Grid2D grid(std::size_t nx, std::size_t ny = 0) const {
    return {Axis(nx, -half_width, half_width, Boundary::dirichlet), Axis(ny ? ny : nx, -half_width, half_width, Boundary::dirichlet)};
  }
};

/// |integral rho e^{-i l theta}| over the interior nodes.
inline double azimuthal_mode_amplitude(const Field2D& rho, const DiskMask& mask, int mode) {
  const Grid2D& g = rho.grid;
  CompensatedSum re, im;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.index(i, j);
      if (!mask.interior(k)) continue;
      const double th = std::atan2(g.y(static_cast<std::ptrdiff_t>(j)), g.x(static_cast<std::ptrdiff_t>(i)));
      re.add(rho.values[k] * std::cos(mode * th));
      im.add(-rho.values[k] * std::sin(mode * th));
    }
  return std::hypot(re.value(), im.value()) * g.cell_volume();
}

/// Integral of |grad phi|^2 over the interior nodes.
inline double field_energy(const Field2D& phi, const DiskMask& mask) {
  const VelocityField2D grad = potential_gradient(phi, mask);
  CompensatedSum s;
  for (std::size_t k = 0; k < phi.size(); ++k)
    if (mask.interior(k)) s.add(grad.ax.values[k] * grad.ax.values[k] + grad.ay.values[k] * grad.ay.values[k]);
  return s.value() * phi.grid.cell_volume();
}

struct DiocotronRunOptions {
  SchemeKind scheme = SchemeKind::mixed;
  std::size_t n = 256;
  std::size_t ny = 0;
  double t_end = 60.0;
  std::vector<double> snapshot_times{40.0, 50.0, 60.0};
};

struct DiocotronSample {
  double t = 0.0;
  double dt = 0.0;
  double mode_amplitude = 0.0;
  Phase phase = Phase::semi_lagrangian;
};

struct DiocotronResult {
  Field2D final_field;
  std::vector<DiagnosticsRecord> series;
  std::vector<DiocotronSample> samples;
  double switch_time = -1.0;  ///< negative when the mixed run never switched
};

/// Guiding-center run. SL schemes use the leap-frog characteristics with an
/// adaptive step dt = cfl_linear h / max|U|; `mixed` starts with SL-HWENO5
/// and moves to FD-HWENO5 with cfl_nonlinear once the mass change of a step
/// exceeds h^3. FD schemes run RK4 with cfl_nonlinear throughout.
inline DiocotronResult run_diocotron(const DiocotronSetup& setup, const DiocotronRunOptions& opt, const SchemeConfig& cfg,
                                     const StepHook& hook = {}, const SnapshotHook2D& snapshot = {},
                                     const std::function<void(const std::string&)>& log = {}) {
  cfg.validate();
  if (!(setup.radius > 0.0) || setup.half_width <= setup.radius)
    throw ConfigError("disk radius must be positive and inside the grid half-width");
  const Grid2D g = setup.grid(opt.n, opt.ny);
  const DiskMask mask = classify_disk_nodes(g, setup.radius);
  const PoissonDisk poisson(g, mask);
  const double h = std::min(g.dx(), g.dy());
  const double R2 = setup.radius * setup.radius;

  const auto constrain = [&](Field2D& f) {
    for (std::size_t k = 0; k < f.size(); ++k)
      if (!mask.interior(k)) f.values[k] = 0.0;
  };
  const auto inside = [&](double x, double y) { return x * x + y * y <= R2; };
  const auto velocity_of = [&](const Field2D& rho) { return velocity_from_potential(poisson.solve(rho), mask); };
  const auto max_speed = [](const VelocityField2D& u) { return std::max(max_abs(u.ax.values), max_abs(u.ay.values)); };

  DiocotronResult res{Field2D::sample(g, [&](double x, double y) { return setup.rho0(x, y); }), {}, {}};
  constrain(res.final_field);

  DiagnosticsRecord initial;
  const auto record = [&](double t, double dt, const Field2D& rho, Phase ph) {
    const Field2D phi = poisson.solve(rho);
    DiagnosticsRecord r = record_of(t, field_norms(rho, &mask), field_energy(phi, mask));
    if (res.series.empty()) initial = r;
    r.relate_to(initial);
    res.series.push_back(r);
    res.samples.push_back({t, dt, azimuthal_mode_amplitude(rho, mask, setup.mode), ph});
    if (hook) hook(r);
  };

  std::size_t next_snap = 0;
  const auto maybe_snapshot = [&](double t, const Field2D& f) {
    while (next_snap < opt.snapshot_times.size() && opt.snapshot_times[next_snap] <= t * (1.0 + 1e-12)) {
      if (snapshot) snapshot(opt.snapshot_times[next_snap], f);
      ++next_snap;
    }
  };
  // clip a step so that snapshot and final times are hit exactly
  const auto clip = [&](double t, double dt) {
    double stop = opt.t_end;
    for (double ts : opt.snapshot_times)
      if (ts > t * (1.0 + 1e-12) && ts < stop) stop = ts;
    return (t + dt >= stop - 1e-12 * std::max(1.0, stop)) ? stop - t : dt;
  };

  const bool mixed = opt.scheme == SchemeKind::mixed;
  const bool sl_scheme = is_semi_lagrangian(opt.scheme);
  MixedState state(h);
  state.phase = (mixed || sl_scheme) ? Phase::semi_lagrangian : Phase::finite_difference;
  const InterpKind sl_kind = sl_scheme ? interp_kind_of(opt.scheme) : InterpKind::hweno5;
  const FluxKind fd_kind = (mixed || sl_scheme) ? FluxKind::hweno5 : flux_kind_of(opt.scheme);

  double t = 0.0;
  Field2D prev = res.final_field;  // f^{n-1}
  Field2D curr = prev;             // f^n
  double dt_prev = 0.0;
  record(0.0, 0.0, curr, state.phase);
  maybe_snapshot(0.0, curr);
  const double t_tol = 1e-12 * std::max(1.0, opt.t_end);
  std::size_t steps = 0;
  while (t < opt.t_end - t_tol) {
    const VelocityField2D u = velocity_of(curr);
    const double umax = max_speed(u);
    const double speed = umax > 0.0 ? umax : 1.0;
    Field2D next(g);
    double dt = 0.0;
    if (state.phase == Phase::semi_lagrangian) {
      dt = clip(t, cfg.cfl_linear * h / speed);
      const GridVelocity vel(u.ax, u.ay);
      if (steps == 0)
        next = sl_step_2d(curr, vel, dt, 0.5, sl_kind, cfg, inside);
      else
        next = sl_step_2d(prev, vel, dt_prev + dt, dt / (dt_prev + dt), sl_kind, cfg, inside);
      constrain(next);
      if (mixed) {
        const double m_curr = field_norms(curr, &mask).mass, m_next = field_norms(next, &mask).mass;
        if (mixed_controller(state, m_curr, m_next, t + dt) == Phase::finite_difference) {
          res.switch_time = t + dt;
          if (log) log("switching to finite differences at t = " + std::to_string(t + dt));
        }
      }
    } else {
      dt = clip(t, cfg.cfl_nonlinear * h / speed);
      bool first = true;
      const auto provider = [&](const Field2D& rho) {
        if (first) {
          first = false;
          return u;
        }
        return velocity_of(rho);
      };
      next = fd_step_rk4(curr, provider, dt, fd_kind, cfg.cfl_nonlinear, cfg.splitting, cfg.eps, constrain);
    }
    if (!all_finite(next)) throw StepFailure("non-finite values at t = " + std::to_string(t + dt));
    prev = std::move(curr);
    curr = std::move(next);
    dt_prev = dt;
    t += dt;
    if (std::abs(t - opt.t_end) <= t_tol) t = opt.t_end;
    ++steps;
    record(t, dt, curr, state.phase);
    maybe_snapshot(t, curr);
  }
  res.switch_time = state.switch_time;
  res.final_field = std::move(curr);
  return res;
}

}  // namespace hwk
