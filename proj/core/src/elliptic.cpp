#include "kslab/elliptic.hpp"

#include <cmath>
#include <numbers>

#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"
#include "kslab/transform.hpp"

namespace kslab {

std::vector<double> solve_vr(const RadialGrid& grid, const FieldW& w, double m) {
  const std::size_t n = grid.n_nodes();
  if (w.size() != n) throw DimensionError("solve_vr: size mismatch");
  const double mw = total_mass(w);
  if (std::abs(m - mw) > 1e-8 * std::max({std::abs(m), std::abs(mw), 1e-30}))
    throw ConsistencyError("solve_vr: m disagrees with total_mass(w)");

  const double half_density = m / (2.0 * grid.area());  // m / (2|Omega|)
  std::vector<double> vr(n);
  vr[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j)
    vr[j] = (half_density * grid.s[j] - w[j]) / grid.r[j];
  return vr;
}

FieldV integrate_v(const RadialGrid& grid, std::span<const double> vr) {
  const std::size_t n = grid.n_nodes();
  if (vr.size() != n) throw DimensionError("integrate_v: size mismatch");
  FieldV out;
  out.vr.assign(vr.begin(), vr.end());
  out.v.resize(n);
  cumulative_trapezoid(grid.r, vr, out.v);
  // shift to zero mean over the disk: mean = 2 pi trapezoid(rho v) / |Omega|
  std::vector<double> rho_v(n);
  for (std::size_t j = 0; j < n; ++j) rho_v[j] = grid.r[j] * out.v[j];
  const double mean = 2.0 * std::numbers::pi * trapezoid(grid.r, rho_v) / grid.area();
  for (double& v : out.v) v -= mean;
  return out;
}

std::vector<double> compute_vrr(const RadialGrid& grid, const FieldU& u,
                                std::span<const double> vr, double m) {
  const std::size_t n = grid.n_nodes();
  if (u.size() != n || vr.size() != n) throw DimensionError("compute_vrr: size mismatch");
  const double density = m / grid.area();
  std::vector<double> vrr(n);
  vrr[0] = 0.5 * (density - u[0]);
  for (std::size_t j = 1; j < n; ++j)
    vrr[j] = density - u[j] - vr[j] / grid.r[j];
  return vrr;
}

FieldV solve_field_v(const RadialGrid& grid, const FieldW& w, double m) {
  return integrate_v(grid, solve_vr(grid, w, m));
}

}  // namespace kslab
