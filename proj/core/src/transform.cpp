#include "kslab/transform.hpp"

#include <cmath>
#include <numbers>

#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"

namespace kslab {

std::vector<double> radial_cumulative_integral(const RadialGrid& grid,
                                               std::span<const double> f) {
  const std::size_t n = grid.n_nodes();
  if (f.size() != n) throw DimensionError("radial_cumulative_integral: size mismatch");
  std::vector<double> out(n);
  double acc = 0.0;
  out[0] = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    acc += 0.5 * (grid.r[j] - grid.r[j - 1]) *
           (grid.r[j - 1] * f[j - 1] + grid.r[j] * f[j]);
    out[j] = acc;
  }
  return out;
}

FieldW forward_transform(const RadialGrid& grid, const FieldU& u) {
  if (u.size() != grid.n_nodes()) throw DimensionError("forward_transform: size mismatch");
  for (double v : u.values)
    if (!(v >= 0.0)) throw DomainError("forward_transform: u must be nonnegative");
  return FieldW(radial_cumulative_integral(grid, u.values));
}

FieldU recover_u(const RadialGrid& grid, const FieldW& w) {
  const std::size_t n = grid.n_nodes();
  if (w.size() != n) throw DimensionError("recover_u: size mismatch");
  const double scale = std::max(1.0, std::abs(w.back()));
  if (std::abs(w[0]) > 1e-12 * scale)
    throw DomainError("recover_u: w(0) must vanish");
  for (std::size_t j = 1; j < n; ++j)
    if (w[j] < w[j - 1] - 1e-9 * scale)
      throw DomainError("recover_u: w must be nondecreasing");
  const auto ws = derivative1(grid.s, w.values);
  FieldU u(n);
  for (std::size_t j = 0; j < n; ++j) u[j] = std::max(0.0, 2.0 * ws[j]);
  return u;
}

double total_mass(const FieldW& w) {
  if (w.size() == 0) throw DimensionError("total_mass: empty field");
  return 2.0 * std::numbers::pi * w.back();
}

double mass_of(const RadialGrid& grid, const FieldU& u) {
  if (u.size() != grid.n_nodes()) throw DimensionError("mass_of: size mismatch");
  double acc = 0.0;
  for (std::size_t j = 1; j < grid.n_nodes(); ++j)
    acc += 0.5 * (grid.r[j] - grid.r[j - 1]) *
           (grid.r[j - 1] * u[j - 1] + grid.r[j] * u[j]);
  return 2.0 * std::numbers::pi * acc;
}

}  // namespace kslab
