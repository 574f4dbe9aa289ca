#pragma once

#include <span>

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"

namespace kslab {

// Radial derivative of the chemical: r v_r(r) = m r^2 / (2|Omega|) - w(r^2),
// evaluated nodewise; v_r(0) = 0. `m` must agree with total_mass(w) to 1e-8
// relative (consistency of the nonlocal term), else ConsistencyError.
std::vector<double> solve_vr(const RadialGrid& grid, const FieldW& w, double m);

// Antiderivative of vr along r, shifted to zero mean over the disk.
FieldV integrate_v(const RadialGrid& grid, std::span<const double> vr);

// v_rr from the equation itself: v_rr = m/|Omega| - u - v_r/r, with the
// symmetric limit (m/|Omega| - u(0))/2 at the origin.
std::vector<double> compute_vrr(const RadialGrid& grid, const FieldU& u,
                                std::span<const double> vr, double m);

// Convenience: vr + v from (w, m) in one call.
FieldV solve_field_v(const RadialGrid& grid, const FieldW& w, double m);

}  // namespace kslab
