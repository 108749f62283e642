#ifndef NILMIN_GRID_HPP
#define NILMIN_GRID_HPP

#include <complex>
#include <vector>

#include "nilmin/errors.hpp"

namespace nilmin {

using cd = std::complex<double>;

// rectangular grid in the conformal coordinate z = x + iy
struct GridSpec {
  cd center{0.0, 0.0};
  double half_width_x = 0.4;
  double half_width_y = 0.4;
  int nx = 41;
  int ny = 41;

  void validate() const {
    if (nx < 3 || ny < 3)
      throw grid_error("grid: resolution must be at least 3 per axis");
    if (half_width_x <= 0.0 || half_width_y <= 0.0)
      throw grid_error("grid: half-widths must be positive");
  }
  double dx() const { return 2.0 * half_width_x / (nx - 1); }
  double dy() const { return 2.0 * half_width_y / (ny - 1); }
  cd z(int i, int j) const {
    return center + cd(-half_width_x + i * dx(), -half_width_y + j * dy());
  }
  int index(int i, int j) const { return j * nx + i; }
  int size() const { return nx * ny; }
  bool interior(int i, int j) const { return i > 0 && i < nx - 1 && j > 0 && j < ny - 1; }
};

template <typename T>
struct Field {
  GridSpec grid;
  std::vector<T> v;

  Field() = default;
  explicit Field(const GridSpec& g) : grid(g), v(g.size(), T{}) {}
  Field(const GridSpec& g, const T& init) : grid(g), v(g.size(), init) {}

  T& at(int i, int j) { return v[grid.index(i, j)]; }
  const T& at(int i, int j) const { return v[grid.index(i, j)]; }
};

// second-order partial derivative along the grid x-axis: centered in the
// interior, one-sided three-point at the boundary columns
template <typename T>
Field<T> d_dx(const Field<T>& f) {
  const GridSpec& g = f.grid;
  if (g.nx < 3) throw grid_error("d_dx: need at least 3 columns");
  Field<T> r(g);
  double h = g.dx();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx - 1; ++i)
      r.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) * (1.0 / (2 * h));
    r.at(0, j) = (f.at(0, j) * -3.0 + f.at(1, j) * 4.0 - f.at(2, j)) * (1.0 / (2 * h));
    r.at(g.nx - 1, j) =
        (f.at(g.nx - 1, j) * 3.0 - f.at(g.nx - 2, j) * 4.0 + f.at(g.nx - 3, j)) *
        (1.0 / (2 * h));
  }
  return r;
}

template <typename T>
Field<T> d_dy(const Field<T>& f) {
  const GridSpec& g = f.grid;
  if (g.ny < 3) throw grid_error("d_dy: need at least 3 rows");
  Field<T> r(g);
  double h = g.dy();
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny - 1; ++j)
      r.at(i, j) = (f.at(i, j + 1) - f.at(i, j - 1)) * (1.0 / (2 * h));
    r.at(i, 0) = (f.at(i, 0) * -3.0 + f.at(i, 1) * 4.0 - f.at(i, 2)) * (1.0 / (2 * h));
    r.at(i, g.ny - 1) =
        (f.at(i, g.ny - 1) * 3.0 - f.at(i, g.ny - 2) * 4.0 + f.at(i, g.ny - 3)) *
        (1.0 / (2 * h));
  }
  return r;
}

template <typename T>
Field<T> d_dz(const Field<T>& f) {
  Field<T> fx = d_dx(f), fy = d_dy(f);
  Field<T> r(f.grid);
  for (int k = 0; k < f.grid.size(); ++k)
    r.v[k] = (fx.v[k] - fy.v[k] * cd(0.0, 1.0)) * 0.5;
  return r;
}

template <typename T>
Field<T> d_dzbar(const Field<T>& f) {
  Field<T> fx = d_dx(f), fy = d_dy(f);
  Field<T> r(f.grid);
  for (int k = 0; k < f.grid.size(); ++k)
    r.v[k] = (fx.v[k] + fy.v[k] * cd(0.0, 1.0)) * 0.5;
  return r;
}

// max over interior points, the reduction used by all residual reporters
inline double interior_max(const Field<double>& f) {
  double m = 0.0;
  for (int j = 1; j < f.grid.ny - 1; ++j)
    for (int i = 1; i < f.grid.nx - 1; ++i) m = std::max(m, f.at(i, j));
  return m;
}

} // namespace nilmin

#endif
