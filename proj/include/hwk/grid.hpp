/**
 * @file grid.hpp
 * Uniform node-centered Cartesian grids, scalar fields, disk node
 * classification and integral norms.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hwk {

/// Thrown for invalid configuration of grids, schemes and runs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a time step cannot be completed (CFL refusal, divergent
/// characteristic solve, linear solver failure).
class StepFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Boundary { periodic, dirichlet };

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class Range>
double compensated_sum(const Range& r) {
  CompensatedSum s;
  for (double v : r) s.add(v);
  return s.value();
}

/// One uniform axis. Periodic axes store n distinct nodes with the upper
/// bound excluded (dx = L/n); Dirichlet axes include both ends
/// (dx = L/(n-1)).
class Axis {
 public:
  Axis() = default;
  Axis(std::size_t n, double lo, double hi, Boundary bc)
      : n_(n), lo_(lo), hi_(hi), bc_(bc) {
    if (n < 2) throw ConfigError("axis needs at least 2 nodes");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw ConfigError("axis bounds must be finite with hi > lo");
    dx_ = (hi - lo) / static_cast<double>(bc == Boundary::periodic ? n : n - 1);
  }

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double lo() const { return lo_; }
  [[nodiscard]] double hi() const { return hi_; }
  [[nodiscard]] double dx() const { return dx_; }
  [[nodiscard]] Boundary bc() const { return bc_; }
  [[nodiscard]] bool periodic() const { return bc_ == Boundary::periodic; }
  [[nodiscard]] double length() const { return hi_ - lo_; }

  /// Node coordinate; a pure function of i.
  [[nodiscard]] double coord(std::ptrdiff_t i) const {
    return lo_ + static_cast<double>(i) * dx_;
  }

  /// Position in index units (fractional node index). Positions within
  /// 1e-12 cells of a node snap to it.
  [[nodiscard]] double index_of(double x) const {
    const double p = (x - lo_) / dx_;
    const double r = std::round(p);
    return std::abs(p - r) <= 1e-12 * std::max(1.0, std::abs(p)) ? r : p;
  }

  /// Wraps an arbitrary index into [0, n) for periodic axes.
  [[nodiscard]] std::ptrdiff_t wrap(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    i %= n;
    return i < 0 ? i + n : i;
  }

  friend bool operator==(const Axis&, const Axis&) = default;

 private:
  std::size_t n_ = 0;
  double lo_ = 0.0;
  double hi_ = 1.0;
  Boundary bc_ = Boundary::periodic;
  double dx_ = 1.0;
};

/// Minimum node count for the fifth-order stencils.
inline constexpr std::size_t kMinStencilNodes = 8;

class Grid1D {
 public:
  Grid1D(std::size_t n, double x_min, double x_max, Boundary bc)
      : axis_(n, x_min, x_max, bc) {
    if (n < kMinStencilNodes)
      throw ConfigError("Grid1D needs n >= 8, got " + std::to_string(n));
  }
  explicit Grid1D(const Axis& a) : Grid1D(a.size(), a.lo(), a.hi(), a.bc()) {}

  [[nodiscard]] const Axis& axis() const { return axis_; }
  [[nodiscard]] std::size_t size() const { return axis_.size(); }
  [[nodiscard]] double dx() const { return axis_.dx(); }
  [[nodiscard]] double x(std::ptrdiff_t i) const { return axis_.coord(i); }
  [[nodiscard]] bool periodic() const { return axis_.periodic(); }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;

 private:
  Axis axis_;
};

/// Tensor grid; storage index is i + nx*j (x fastest, rows of constant y).
class Grid2D {
 public:
  Grid2D(Axis x, Axis y) : x_(x), y_(y) {}

  /// Square node-centered grid on [-half_width, half_width]^2.
  static Grid2D square(std::size_t n, double half_width, Boundary bc = Boundary::dirichlet) {
    return {Axis(n, -half_width, half_width, bc), Axis(n, -half_width, half_width, bc)};
  }

  [[nodiscard]] const Axis& x_axis() const { return x_; }
  [[nodiscard]] const Axis& y_axis() const { return y_; }
  [[nodiscard]] std::size_t nx() const { return x_.size(); }
  [[nodiscard]] std::size_t ny() const { return y_.size(); }
  [[nodiscard]] std::size_t size() const { return nx() * ny(); }
  [[nodiscard]] double dx() const { return x_.dx(); }
  [[nodiscard]] double dy() const { return y_.dx(); }
  [[nodiscard]] double x(std::ptrdiff_t i) const { return x_.coord(i); }
  [[nodiscard]] double y(std::ptrdiff_t j) const { return y_.coord(j); }
  [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const { return i + nx() * j; }
  [[nodiscard]] double cell_volume() const { return dx() * dy(); }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  Axis x_;
  Axis y_;
};

struct Field1D {
  Grid1D grid;
  std::vector<double> values;

  explicit Field1D(const Grid1D& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  template <class Fn>
  static Field1D sample(const Grid1D& g, Fn&& fn) {
    Field1D f(g);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = fn(g.x(static_cast<std::ptrdiff_t>(i)));
    return f;
  }

  [[nodiscard]] std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

struct Field2D {
  Grid2D grid;
  std::vector<double> values;

  explicit Field2D(const Grid2D& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

  template <class Fn>
  static Field2D sample(const Grid2D& g, Fn&& fn) {
    Field2D f(g);
    for (std::size_t j = 0; j < g.ny(); ++j)
      for (std::size_t i = 0; i < g.nx(); ++i)
        f.values[g.index(i, j)] = fn(g.x(static_cast<std::ptrdiff_t>(i)), g.y(static_cast<std::ptrdiff_t>(j)));
    return f;
  }

  [[nodiscard]] std::size_t size() const { return values.size(); }
  double& operator()(std::size_t i, std::size_t j) { return values[grid.index(i, j)]; }
  double operator()(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
};

template <class F>
bool all_finite(const F& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double v) { return std::isfinite(v); });
}

// ---------------------------------------------------------------------------
// Disk classification

enum class NodeClass : unsigned char { interior, ghost, exterior };

struct DiskMask {
  double radius = 0.0;
  std::vector<NodeClass> cls;
  std::size_t n_interior = 0;
  std::size_t n_ghost = 0;
  std::size_t n_exterior = 0;

  [[nodiscard]] NodeClass at(const Grid2D& g, std::size_t i, std::size_t j) const {
    return cls[g.index(i, j)];
  }
  [[nodiscard]] bool interior(std::size_t k) const { return cls[k] == NodeClass::interior; }
};

/// Classifies nodes against the disk x^2 + y^2 <= R^2. A ghost is an
/// exterior node with an interior node among its four neighbours.
inline double domain_half_width(const Grid2D& g) {
  const double half_x = std::min(-g.x_axis().lo(), g.x(static_cast<std::ptrdiff_t>(g.nx()) - 1));
  const double half_y = std::min(-g.y_axis().lo(), g.y(static_cast<std::ptrdiff_t>(g.ny()) - 1));
  return std::min(half_x, half_y);
}

inline DiskMask classify_disk_nodes(const Grid2D& g, double radius) {
  if (!(radius > 0.0)) throw ConfigError("disk radius must be positive");

  DiskMask m;
  m.radius = radius;
  m.cls.assign(g.size(), NodeClass::exterior);
  const double r2 = radius * radius;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const double x = g.x(static_cast<std::ptrdiff_t>(i));
      const double y = g.y(static_cast<std::ptrdiff_t>(j));
      if (x * x + y * y <= r2) m.cls[g.index(i, j)] = NodeClass::interior;
    }
  const auto is_int = [&](std::ptrdiff_t i, std::ptrdiff_t j) {
    if (i < 0 || j < 0 || i >= static_cast<std::ptrdiff_t>(g.nx()) || j >= static_cast<std::ptrdiff_t>(g.ny()))
      return false;
    return m.cls[g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j))] == NodeClass::interior;
  };
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      auto& c = m.cls[g.index(i, j)];
      if (c == NodeClass::interior) {
        ++m.n_interior;
        continue;
      }
      const auto ii = static_cast<std::ptrdiff_t>(i);
      const auto jj = static_cast<std::ptrdiff_t>(j);
      if (is_int(ii - 1, jj) || is_int(ii + 1, jj) || is_int(ii, jj - 1) || is_int(ii, jj + 1)) {
        c = NodeClass::ghost;
        ++m.n_ghost;
      } else {
        ++m.n_exterior;
      }
    }
  return m;
}

// ---------------------------------------------------------------------------
// Norms

struct FieldNorms {
  double mass = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double tv = 0.0;  ///< 1D only; zero for 2D fields
  double min = 0.0;
  double max = 0.0;
};

inline FieldNorms field_norms(const Field1D& f) {
  const double vol = f.grid.dx();
  CompensatedSum mass, l1, l2, tv;
  FieldNorms out;
  out.min = out.max = f.values.front();
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f[i];
    mass.add(v);
    l1.add(std::abs(v));
    l2.add(v * v);
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
    if (i + 1 < n)
      tv.add(std::abs(f[i + 1] - v));
    else if (f.grid.periodic())
      tv.add(std::abs(f[0] - v));
  }
  out.mass = mass.value() * vol;
  out.l1 = l1.value() * vol;
  out.l2 = std::sqrt(l2.value() * vol);
  out.tv = tv.value();
  return out;
}

/// Norms over a 2D field; when `mask` is given only interior nodes count.
inline FieldNorms field_norms(const Field2D& f, const DiskMask* mask = nullptr) {
  const double vol = f.grid.cell_volume();
  CompensatedSum mass, l1, l2;
  FieldNorms out;
  bool first = true;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (mask && !mask->interior(k)) continue;
    const double v = f.values[k];
    mass.add(v);
    l1.add(std::abs(v));
    l2.add(v * v);
    if (first) {
      out.min = out.max = v;
      first = false;
    }
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  out.mass = mass.value() * vol;
  out.l1 = l1.value() * vol;
  out.l2 = std::sqrt(l2.value() * vol);
  return out;
}

}  // namespace hwk
