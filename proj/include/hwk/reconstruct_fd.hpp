/**
 * @file reconstruct_fd.hpp
 * Conservative finite-difference fluxes at half points.
 *
 * The Hermite WENO flux interpolates the primitive G of the function g
 * whose sliding cell average is f, so that (F_{i+1/2} - F_{i-1/2})/dx
 * approximates f'. Candidates are derivatives of three cubics through the
 * primitive values at x_{i-3/2}..x_{i+3/2}; the left and right cubics also
 * match the sixth-order estimate of G' at the outer half points x_{i-3/2}
 * and x_{i+3/2}.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hwk/grid.hpp"
#include "hwk/reconstruct_sl.hpp"

namespace hwk {

enum class FluxKind { weno5_js, hweno5 };
enum class Wind { from_left, from_right };
enum class Splitting { upwind, lax_friedrichs };

/// Ten consecutive point values f_{i-4}..f_{i+5} around the interface
/// x_{i+1/2}. The left-biased flux reads v[0..8], the right-biased one
/// reads v[1..9].
struct FluxStencil {
  std::array<double, 10> v{};
  Wind wind = Wind::from_left;

  [[nodiscard]] FluxStencil reversed() const {
    FluxStencil r;
    std::reverse_copy(v.begin(), v.end(), r.v.begin());
    r.wind = wind == Wind::from_left ? Wind::from_right : Wind::from_left;
    return r;
  }
};

/// Sixth-order estimate of G' at x_{k+1/2} from f_{k-2}..f_{k+3}; the
/// centered difference of the prefix sums G telescopes to this f-only form.
inline double primitive_derivative(std::span<const double, 6> f) {
  return (f[0] - 8.0 * f[1] + 37.0 * f[2] + 37.0 * f[3] - 8.0 * f[4] + f[5]) / 60.0;
}

struct Hweno5FluxParts {
  std::array<double, 3> h{};     ///< candidate fluxes h_l, h_c, h_r
  std::array<double, 3> beta{};  ///< smoothness indicators
  double g_left = 0.0;           ///< G' at x_{i-3/2}
  double g_right = 0.0;          ///< G' at x_{i+3/2}
};

/// Candidates and indicators for the left-biased flux on the nine-value
/// window w = f_{i-4}..f_{i+4}.
inline Hweno5FluxParts hweno5_flux_parts(std::span<const double, 9> w) {
  Hweno5FluxParts p;
  p.g_left = primitive_derivative(w.subspan<0, 6>());
  p.g_right = primitive_derivative(w.subspan<3, 6>());
  const double fm = w[3], f0 = w[4], f1 = w[5];
  const double gl = p.g_left, gr = p.g_right;
  p.h = {-2.0 * fm + 2.0 * f0 + gl, (-fm + 5.0 * f0 + 2.0 * f1) / 6.0, (f0 + 5.0 * f1 - 2.0 * gr) / 4.0};
  p.beta[0] = (835.0 * fm * fm + 139.0 * f0 * f0 + 300.0 * gl * gl - 674.0 * fm * f0 - 996.0 * fm * gl +
               396.0 * f0 * gl) /
              16.0;
  p.beta[1] = (13.0 * fm * fm + 64.0 * f0 * f0 + 25.0 * f1 * f1 - 52.0 * fm * f0 + 26.0 * fm * f1 -
               76.0 * f0 * f1) /
              12.0;
  p.beta[2] = (55.0 * f0 * f0 + 367.0 * f1 * f1 + 156.0 * gr * gr - 266.0 * f0 * f1 + 156.0 * f0 * gr -
               468.0 * f1 * gr) /
              16.0;
  return p;
}

inline constexpr std::array<double, 3> kHweno5FluxLinear{1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0};

inline double hweno5_minus_window(std::span<const double, 9> w, double eps = kWenoEpsilon,
                                  WenoWeights<3>* weights_out = nullptr) {
  const auto p = hweno5_flux_parts(w);
  const auto wts = make_weights<3>(kHweno5FluxLinear, p.beta, eps);
  if (weights_out) *weights_out = wts;
  return wts.w[0] * p.h[0] + wts.w[1] * p.h[1] + wts.w[2] * p.h[2];
}

/// Derivative of the quintic Hermite interpolant of G at x_{i+1/2}.
inline double hermite5_flux(std::span<const double, 9> w) {
  const auto p = hweno5_flux_parts(w);
  return (-8.0 * w[3] + 19.0 * w[4] + 19.0 * w[5] + 3.0 * p.g_left - 6.0 * p.g_right) / 27.0;
}

/// Left-biased Hermite WENO flux f^-_{i+1/2}.
inline double flux_hweno5_minus(const FluxStencil& st, double eps = kWenoEpsilon) {
  return hweno5_minus_window(std::span<const double, 10>(st.v).first<9>(), eps);
}

/// Right-biased flux f^+_{i+1/2}: the left-biased procedure on the data
/// mirrored about x_{i+1/2}.
inline double flux_hweno5_plus(const FluxStencil& st, double eps = kWenoEpsilon) {
  std::array<double, 9> w{};
  for (std::size_t k = 0; k < 9; ++k) w[k] = st.v[9 - k];
  return hweno5_minus_window(w, eps);
}

/// Classical Jiang-Shu fifth-order flux from f_{i-2}..f_{i+2} (left-biased).
inline double weno5_js_minus_window(std::span<const double, 5> f, double eps = kWenoEpsilon,
                                    WenoWeights<3>* weights_out = nullptr) {
  const double a = f[0], b = f[1], c = f[2], d = f[3], e = f[4];
  const std::array<double, 3> q{(2.0 * a - 7.0 * b + 11.0 * c) / 6.0, (-b + 5.0 * c + 2.0 * d) / 6.0,
                                (2.0 * c + 5.0 * d - e) / 6.0};
  const double t0 = a - 2.0 * b + c, u0 = a - 4.0 * b + 3.0 * c;
  const double t1 = b - 2.0 * c + d, u1 = b - d;
  const double t2 = c - 2.0 * d + e, u2 = 3.0 * c - 4.0 * d + e;
  const std::array<double, 3> beta{13.0 / 12.0 * t0 * t0 + 0.25 * u0 * u0, 13.0 / 12.0 * t1 * t1 + 0.25 * u1 * u1,
                                   13.0 / 12.0 * t2 * t2 + 0.25 * u2 * u2};
  const auto wts = make_weights<3>({0.1, 0.6, 0.3}, beta, eps);
  if (weights_out) *weights_out = wts;
  return wts.w[0] * q[0] + wts.w[1] * q[1] + wts.w[2] * q[2];
}

inline double flux_weno5_js(const FluxStencil& st, double eps = kWenoEpsilon) {
  std::array<double, 5> w{};
  if (st.wind == Wind::from_left) {
    std::copy(st.v.begin() + 2, st.v.begin() + 7, w.begin());
  } else {
    for (std::size_t k = 0; k < 5; ++k) w[k] = st.v[7 - k];
  }
  return weno5_js_minus_window(w, eps);
}

inline double flux_hweno5(const FluxStencil& st, double eps = kWenoEpsilon) {
  return st.wind == Wind::from_left ? flux_hweno5_minus(st, eps) : flux_hweno5_plus(st, eps);
}

inline double reconstruct_flux(FluxKind kind, const FluxStencil& st, double eps = kWenoEpsilon) {
  return kind == FluxKind::hweno5 ? flux_hweno5(st, eps) : flux_weno5_js(st, eps);
}

// ---------------------------------------------------------------------------
// Flux-difference operators

inline constexpr std::ptrdiff_t kFluxHalo = 5;

namespace detail {

/// Interface flux from a padded line: pad[k + kFluxHalo] = q_k.
inline double interface_flux(const double* pad, std::ptrdiff_t k, FluxKind kind, Wind wind, double eps) {
  // window f_{k-4}..f_{k+5}
  const double* w = pad + k + kFluxHalo - 4;
  if (kind == FluxKind::hweno5) {
    if (wind == Wind::from_left) return hweno5_minus_window(std::span<const double, 9>(w, 9), eps);
    std::array<double, 9> r{};
    for (std::size_t m = 0; m < 9; ++m) r[m] = w[9 - m];
    return hweno5_minus_window(r, eps);
  }
  if (wind == Wind::from_left) return weno5_js_minus_window(std::span<const double, 5>(w + 2, 5), eps);
  const std::array<double, 5> r{w[7], w[6], w[5], w[4], w[3]};
  return weno5_js_minus_window(r, eps);
}

inline void fill_padded(std::span<const double> q, bool periodic, std::vector<double>& pad) {
  const auto n = static_cast<std::ptrdiff_t>(q.size());
  pad.assign(static_cast<std::size_t>(n + 2 * kFluxHalo), 0.0);
  for (std::ptrdiff_t k = -kFluxHalo; k < n + kFluxHalo; ++k) {
    double v = 0.0;
    if (k >= 0 && k < n) {
      v = q[static_cast<std::size_t>(k)];
    } else if (periodic) {
      std::ptrdiff_t m = k % n;
      if (m < 0) m += n;
      v = q[static_cast<std::size_t>(m)];
    }
    pad[static_cast<std::size_t>(k + kFluxHalo)] = v;
  }
}

}  // namespace detail

/// Work buffers reused across lines.
struct LineScratch {
  std::vector<double> q, qm, qp, pad, padm, padp, flux, a;
};

/// Adds -(F_{i+1/2} - F_{i-1/2})/dx for the flux a*f along one line to
/// `out`. Non-periodic lines see zero values beyond both ends.
inline void accumulate_line_divergence(std::span<const double> f, std::span<const double> a, double dx,
                                       bool periodic, FluxKind kind, Splitting split, std::span<double> out,
                                       LineScratch& s, double eps = kWenoEpsilon) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  // interfaces k+1/2 for k = k0..n-1 ; periodic: k0 = 0 (F_{-1/2} == F_{n-1/2})
  const std::ptrdiff_t k0 = periodic ? 0 : -1;
  s.flux.assign(static_cast<std::size_t>(n + 1), 0.0);
  auto flux_at = [&](std::ptrdiff_t k) -> double& { return s.flux[static_cast<std::size_t>(k + 1)]; };

  if (split == Splitting::upwind) {
    s.q.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) s.q[i] = a[i] * f[i];
    detail::fill_padded(s.q, periodic, s.pad);
    detail::fill_padded(a, periodic, s.a);
    for (std::ptrdiff_t k = k0; k < n; ++k) {
      const double a_half = 0.5 * (s.a[static_cast<std::size_t>(k + kFluxHalo)] +
                                   s.a[static_cast<std::size_t>(k + 1 + kFluxHalo)]);
      const Wind wind = a_half >= 0.0 ? Wind::from_left : Wind::from_right;
      flux_at(k) = detail::interface_flux(s.pad.data(), k, kind, wind, eps);
    }
  } else {
    double alpha = 0.0;
    for (double v : a) alpha = std::max(alpha, std::abs(v));
    s.qm.resize(f.size());
    s.qp.resize(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      s.qp[i] = 0.5 * (a[i] + alpha) * f[i];
      s.qm[i] = 0.5 * (a[i] - alpha) * f[i];
    }
    detail::fill_padded(s.qp, periodic, s.padp);
    detail::fill_padded(s.qm, periodic, s.padm);
    for (std::ptrdiff_t k = k0; k < n; ++k)
      flux_at(k) = detail::interface_flux(s.padp.data(), k, kind, Wind::from_left, eps) +
                   detail::interface_flux(s.padm.data(), k, kind, Wind::from_right, eps);
  }
  if (periodic) flux_at(-1) = flux_at(n - 1);
  for (std::ptrdiff_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] -= (flux_at(i) - flux_at(i - 1)) / dx;
}

/// -d(a f)/dx on a 1D field with a node-wise velocity.
inline Field1D divergence_1d(const Field1D& f, std::span<const double> velocity, FluxKind kind,
                             Splitting split = Splitting::upwind, double eps = kWenoEpsilon) {
  if (velocity.size() != f.size()) throw ConfigError("velocity size does not match the field");
  for (double v : velocity)
    if (!std::isfinite(v)) throw StepFailure("non-finite velocity");
  Field1D out(f.grid);
  LineScratch scratch;
  accumulate_line_divergence(f.values, velocity, f.grid.dx(), f.grid.periodic(), kind, split, out.values, scratch,
                             eps);
  return out;
}

inline Field1D divergence_1d(const Field1D& f, double velocity, FluxKind kind,
                             Splitting split = Splitting::upwind, double eps = kWenoEpsilon) {
  const std::vector<double> a(f.size(), velocity);
  return divergence_1d(f, a, kind, split, eps);
}

/// -div(A f) on a 2D field, applied dimension by dimension.
inline Field2D divergence_2d(const Field2D& f, const Field2D& ax, const Field2D& ay, FluxKind kind,
                             Splitting split = Splitting::upwind, double eps = kWenoEpsilon) {
  const Grid2D& g = f.grid;
  const std::size_t nx = g.nx(), ny = g.ny();
  Field2D out(g);
  LineScratch scratch;
  std::vector<double> col_f(ny), col_a(ny), col_out(ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t off = j * nx;
    accumulate_line_divergence(std::span<const double>(f.values).subspan(off, nx),
                               std::span<const double>(ax.values).subspan(off, nx), g.dx(), g.x_axis().periodic(),
                               kind, split, std::span<double>(out.values).subspan(off, nx), scratch, eps);
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      col_f[j] = f.values[g.index(i, j)];
      col_a[j] = ay.values[g.index(i, j)];
      col_out[j] = 0.0;
    }
    accumulate_line_divergence(col_f, col_a, g.dy(), g.y_axis().periodic(), kind, split, col_out, scratch, eps);
    for (std::size_t j = 0; j < ny; ++j) out.values[g.index(i, j)] += col_out[j];
  }
  return out;
}

}  // namespace hwk
