#include "kslab/numerics.hpp"

#include <cmath>
#include <cstdio>

#include "kslab/errors.hpp"

namespace kslab {

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("trapezoid: size mismatch");
  if (x.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j)
    acc += 0.5 * (x[j] - x[j - 1]) * (y[j] + y[j - 1]);
  return acc;
}

void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) {
  if (x.size() != y.size() || out.size() != y.size())
    throw DimensionError("cumulative_trapezoid: size mismatch");
  if (x.empty()) return;
  double acc = 0.0;
  double prev_x = x[0];
  double prev_y = y[0];
  out[0] = 0.0;
  for (std::size_t j = 1; j < x.size(); ++j) {
    const double xj = x[j], yj = y[j];
    acc += 0.5 * (xj - prev_x) * (yj + prev_y);
    prev_x = xj;
    prev_y = yj;
    out[j] = acc;
  }
}

void solve_tridiagonal(std::span<const double> lower, std::span<double> diag,
                       std::span<const double> upper, std::span<double> rhs) {
  const std::size_t n = diag.size();
  if (rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n)
    throw DimensionError("solve_tridiagonal: size mismatch");
  if (n == 0) return;
  // forward elimination
  for (std::size_t j = 1; j < n; ++j) {
    const double piv = diag[j - 1];
    if (piv == 0.0) throw NumericalError("solve_tridiagonal: zero pivot");
    const double w = lower[j - 1] / piv;
    diag[j] -= w * upper[j - 1];
    rhs[j] -= w * rhs[j - 1];
  }
  if (diag[n - 1] == 0.0) throw NumericalError("solve_tridiagonal: zero pivot");
  // back substitution
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t j = n - 1; j-- > 0;)
    rhs[j] = (rhs[j] - upper[j] * rhs[j + 1]) / diag[j];
}

std::vector<double> derivative1(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw DimensionError("derivative1: size mismatch");
  if (n < 3) throw DimensionError("derivative1: need at least 3 nodes");
  std::vector<double> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hm = x[j] - x[j - 1];
    const double hp = x[j + 1] - x[j];
    d[j] = -hp / (hm * (hm + hp)) * y[j - 1] + (hp - hm) / (hm * hp) * y[j] +
           hm / (hp * (hm + hp)) * y[j + 1];
  }
  {  // left end, parabola through nodes 0,1,2
    const double h0 = x[1] - x[0];
    const double h1 = x[2] - x[1];
    d[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * y[0] +
           (h0 + h1) / (h0 * h1) * y[1] - h0 / (h1 * (h0 + h1)) * y[2];
  }
  {  // right end, parabola through the last three nodes
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    d[n - 1] = h1 / (h0 * (h0 + h1)) * y[n - 3] - (h0 + h1) / (h0 * h1) * y[n - 2] +
               (h0 + 2.0 * h1) / (h1 * (h0 + h1)) * y[n - 1];
  }
  return d;
}

std::vector<double> derivative2(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (y.size() != n) throw DimensionError("derivative2: size mismatch");
  if (n < 3) throw DimensionError("derivative2: need at least 3 nodes");
  std::vector<double> d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double hm = x[j] - x[j - 1];
    const double hp = x[j + 1] - x[j];
    d[j] = 2.0 * (y[j - 1] * hp - y[j] * (hm + hp) + y[j + 1] * hm) /
           (hm * hp * (hm + hp));
  }
  d[0] = d[1];
  d[n - 1] = d[n - 2];
  return d;
}

double max_abs(std::span<const double> y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace kslab
