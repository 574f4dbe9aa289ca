#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace kslab {

// Composite trapezoid of samples y over strictly increasing abscissae x.
double trapezoid(std::span<const double> x, std::span<const double> y);

// out[j] = trapezoid integral of y over [x[0], x[j]]; out[0] = 0.
// out may alias y.
void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out);

// Thomas algorithm. Solves the tridiagonal system with subdiagonal `lower`
// (size n-1), diagonal `diag` (size n) and superdiagonal `upper` (size n-1)
// in place: `rhs` holds the solution on return, `diag` is destroyed.
// Requires a nonsingular, preferably diagonally dominant matrix.
void solve_tridiagonal(std::span<const double> lower, std::span<double> diag,
                       std::span<const double> upper, std::span<double> rhs);

// Three-point first derivative on a nonuniform grid: centered in the
// interior, one-sided (still three-point, second order) at both ends.
std::vector<double> derivative1(std::span<const double> x, std::span<const double> y);

// Three-point second derivative on a nonuniform grid. Interior nodes use the
// centered stencil; the end values copy the parabola through the first/last
// three nodes (same value the interior stencil gives at nodes 1 and n-2).
std::vector<double> derivative2(std::span<const double> x, std::span<const double> y);

// max |y_j|
double max_abs(std::span<const double> y);

// true iff every entry is finite
bool all_finite(std::span<const double> y);

// Full-precision (%.17g) rendering, round-trip safe for doubles.
std::string format_double(double v);

}  // namespace kslab
