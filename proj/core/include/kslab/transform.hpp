#pragma once

#include <span>
#include <vector>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"

namespace kslab {

// w(s_j) = \int_0^{r_j} rho u(rho) drho by composite trapezoid on the r-grid.
// Requires u >= 0 (valid density); see radial_cumulative_integral for the
// sign-free quadrature.
FieldW forward_transform(const RadialGrid& grid, const FieldU& u);

// The same cumulative quadrature without the sign requirement, for
// integrands that are not densities (tendencies, diagnostics).
std::vector<double> radial_cumulative_integral(const RadialGrid& grid,
                                               std::span<const double> f);

// u = 2 dw/ds via three-point stencils on the s-grid, clamped at zero.
// Requires w(0) = 0 and w nondecreasing up to a small tolerance.
FieldU recover_u(const RadialGrid& grid, const FieldW& w);

// m = 2 pi w(R^2). Identical to 2 pi trapezoid(rho u) when w came from
// forward_transform: same quadrature, same rounding.
double total_mass(const FieldW& w);

// 2 pi trapezoid(rho u) straight from the density.
double mass_of(const RadialGrid& grid, const FieldU& u);

}  // namespace kslab
