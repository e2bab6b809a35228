#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwk/grid.hpp"

namespace hwk {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary snapshot layout (little-endian):
//   char[4] "HWK1", u32 ndim, u32 periodic flags (bit 0 x, bit 1 y),
//   u64 nx, u64 ny, f64 x_lo, x_hi, y_lo, y_hi, then nx*ny f64 values with
//   x fastest. 1D snapshots store ny = 1 and y bounds of zero.
struct Snapshot {
  std::uint32_t ndim = 1;
  std::uint32_t flags = 0;
  std::uint64_t nx = 0;
  std::uint64_t ny = 1;
  std::array<double, 4> bounds{};
  std::vector<double> values;

  [[nodiscard]] bool x_periodic() const { return (flags & 1u) != 0; }
  [[nodiscard]] bool y_periodic() const { return (flags & 2u) != 0; }
};

namespace detail {
template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw IoError("truncated snapshot header");
  return v;
}
}  // namespace detail

inline void write_snapshot(std::ostream& os, const Snapshot& s) {
  os.write("HWK1", 4);
  detail::put(os, s.ndim);
  detail::put(os, s.flags);
  detail::put(os, s.nx);
  detail::put(os, s.ny);
  for (double b : s.bounds) detail::put(os, b);
  os.write(reinterpret_cast<const char*>(s.values.data()), static_cast<std::streamsize>(s.values.size() * sizeof(double)));
  if (!os) throw IoError("snapshot write failed");
}

inline Snapshot read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "HWK1", 4) != 0) throw IoError("not an HWK1 snapshot");
  Snapshot s;
  s.ndim = detail::get<std::uint32_t>(is);
  s.flags = detail::get<std::uint32_t>(is);
  s.nx = detail::get<std::uint64_t>(is);
  s.ny = detail::get<std::uint64_t>(is);
  if (s.ndim < 1 || s.ndim > 2) throw IoError("snapshot dimension must be 1 or 2");
  for (double& b : s.bounds) b = detail::get<double>(is);
  s.values.resize(s.nx * s.ny);
  if (!is.read(reinterpret_cast<char*>(s.values.data()), static_cast<std::streamsize>(s.values.size() * sizeof(double))))
    throw IoError("truncated snapshot values");
  return s;
}

inline Snapshot to_snapshot(const Field1D& f) {
  const Axis& a = f.grid.axis();
  return {1, a.periodic() ? 1u : 0u, a.size(), 1, {a.lo(), a.hi(), 0.0, 0.0}, f.values};
}

inline Snapshot to_snapshot(const Field2D& f) {
  const Axis& ax = f.grid.x_axis();
  const Axis& ay = f.grid.y_axis();
  const std::uint32_t flags = (ax.periodic() ? 1u : 0u) | (ay.periodic() ? 2u : 0u);
  return {2, flags, ax.size(), ay.size(), {ax.lo(), ax.hi(), ay.lo(), ay.hi()}, f.values};
}

inline Field2D field2d_from(const Snapshot& s) {
  if (s.ndim != 2) throw IoError("expected a 2D snapshot");
  const Grid2D g(Axis(s.nx, s.bounds[0], s.bounds[1], s.x_periodic() ? Boundary::periodic : Boundary::dirichlet),
                 Axis(s.ny, s.bounds[2], s.bounds[3], s.y_periodic() ? Boundary::periodic : Boundary::dirichlet));
  Field2D f(g);
  f.values = s.values;
  return f;
}

inline Field1D field1d_from(const Snapshot& s) {
  if (s.ndim != 1) throw IoError("expected a 1D snapshot");
  Field1D f(Grid1D(s.nx, s.bounds[0], s.bounds[1], s.x_periodic() ? Boundary::periodic : Boundary::dirichlet));
  f.values = s.values;
  return f;
}

template <class F>
void save_snapshot(const std::string& path, const F& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path);
  write_snapshot(os, to_snapshot(f));
}

inline Snapshot load_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_snapshot(is);
}

inline void write_field_csv(std::ostream& os, const Field1D& f) {
  os << "x,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) os << f.grid.x(static_cast<std::ptrdiff_t>(i)) << ',' << f[i] << '\n';
}

inline void write_field_csv(std::ostream& os, const Field2D& f) {
  os << "x,y,value\n" << std::setprecision(17);
  const Grid2D& g = f.grid;
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i)
      os << g.x(static_cast<std::ptrdiff_t>(i)) << ',' << g.y(static_cast<std::ptrdiff_t>(j)) << ',' << f(i, j) << '\n';
}

template <class F>
void save_field_csv(const std::string& path, const F& f) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path);
  write_field_csv(os, f);
}

}  // namespace hwk
