#include "kslab/monitors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "kslab/errors.hpp"
#include "kslab/numerics.hpp"

namespace kslab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

MonitorReport check_mass_bound(double m, double t, double m0, double kappa1) {
  if (!(t >= 0.0)) throw DomainError("check_mass_bound: t must be nonnegative");
  MonitorReport rep;
  rep.name = "mass_bound";
  rep.t = t;
  rep.lhs = m;
  rep.rhs = m0 * std::exp(kappa1 * t);
  rep.margin = rep.rhs - rep.lhs;
  const double lower_tol = 1e-12 * std::max(1.0, m0);
  rep.pass = m >= -lower_tol && m <= rep.rhs * (1.0 + 1e-6);
  return rep;
}

MonitorReport check_ws_bound(const RadialGrid& grid, const FieldW& w, double t,
                             double m0, double kappa1) {
  if (w.size() != grid.n_nodes())
    throw DimensionError("check_ws_bound: w/grid size mismatch");
  MonitorReport rep;
  rep.name = "ws_bound";
  rep.t = t;
  const double growth = m0 * std::exp(kappa1 * t);
  const double s_min = 4.0 * grid.first_s_spacing();
  const std::vector<double> ws = derivative1(grid.s, w.values);
  double worst = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
    if (grid.s[j] < s_min) continue;
    const double bound = growth / (2.0 * kPi * grid.s[j]);
    const double gap = bound - ws[j];
    if (!any || gap < worst) {
      worst = gap;
      rep.lhs = ws[j];
      rep.rhs = bound;
      any = true;
    }
  }
  if (!any) {  // grid too coarse to check anything; vacuous pass
    rep.lhs = 0.0;
    rep.rhs = 0.0;
    rep.margin = 0.0;
    rep.pass = true;
    return rep;
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-2);
  return rep;
}

MonitorReport check_radial_monotonicity(const FieldU& u, double t) {
  if (u.size() < 2)
    throw DimensionError("check_radial_monotonicity: need at least 2 nodes");
  MonitorReport rep;
  rep.name = "radial_monotonicity";
  rep.t = t;
  const double scale = max_abs(u.values);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < u.size(); ++j) {
    const double gap = u[j] - u[j + 1];
    if (gap < worst) {
      worst = gap;
      rep.lhs = u[j + 1];
      rep.rhs = u[j];
    }
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + 1e-8 * scale;
  return rep;
}

MonitorReport check_vrr_bound(const RadialGrid& grid, const FieldU& u,
                              std::span<const double> vrr, double t) {
  if (u.size() != grid.n_nodes() || vrr.size() != grid.n_nodes())
    throw DimensionError("check_vrr_bound: field/grid size mismatch");
  MonitorReport rep;
  rep.name = "vrr_bound";
  rep.t = t;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
    const double gap = u[j] - (-vrr[j]);
    if (gap < worst) {
      worst = gap;
      rep.lhs = -vrr[j];
      rep.rhs = u[j];
    }
  }
  rep.margin = rep.rhs - rep.lhs;
  const double slack = 10.0 * grid.dr * std::max(1.0, max_abs(u.values));
  rep.pass = rep.lhs <= rep.rhs + slack;
  return rep;
}

Supersolution select_supersolution(const RadialGrid& grid, double m0,
                                   const FieldW& w0) {
  if (w0.size() != grid.n_nodes())
    throw DimensionError("select_supersolution: w0/grid size mismatch");
  if (!(m0 > 0.0) || m0 >= 8.0 * kPi)
    throw DomainError(
        "select_supersolution: needs 0 < m0 < 8*pi, the interval for a is "
        "empty otherwise");
  Supersolution sup;
  sup.a = 0.5 * (m0 / (2.0 * kPi) + 4.0);
  double b = grid.R * grid.R;
  for (int halving = 0; halving <= 200; ++halving, b *= 0.5) {
    bool dominates = true;
    for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
      if (sup.a * grid.s[j] / (b + grid.s[j]) < w0[j]) {
        dominates = false;
        break;
      }
    }
    if (dominates) {
      sup.b = b;
      return sup;
    }
  }
  throw InfeasibleError(
      "select_supersolution: no b found in 200 halvings of R^2; initial data "
      "too concentrated for a static majorant");
}

MonitorReport check_supersolution_residual(const RadialGrid& grid,
                                           const Supersolution& sup,
                                           const ModelParams& params,
                                           std::span<const double> m_series) {
  for (std::size_t j = 0; j < grid.n_nodes(); j += std::max<std::size_t>(1, grid.n_nodes() / 16))
    if (std::abs(params.kappa(grid.r[j])) > 1e-14)
      throw DomainError(
          "check_supersolution_residual: static majorant argument needs "
          "kappa == 0");
  const double a = sup.a, b = sup.b;
  double m_min = 0.0;
  if (!m_series.empty())
    m_min = std::max(0.0, *std::min_element(m_series.begin(), m_series.end()));

  MonitorReport rep;
  rep.name = "supersolution_residual";
  rep.t = 0.0;
  // Leading term of the negated residual; sign decided by a <= 4 alone.
  double lead_min = std::numeric_limits<double>::infinity();
  double full_min = std::numeric_limits<double>::infinity();
  std::vector<double> mu_pow(grid.n_nodes());
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
    const double s = grid.s[j];
    const double wbar_s = a * b / ((b + s) * (b + s));
    mu_pow[j] = params.mu(grid.r[j]) * std::pow(wbar_s, params.p);
  }
  cumulative_trapezoid(grid.s, mu_pow, mu_pow);
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
    const double s = grid.s[j];
    const double denom = (b + s) * (b + s) * (b + s);
    const double lead = (8.0 - 2.0 * a) * a * b * s / denom;
    const double wbar_s = a * b / ((b + s) * (b + s));
    const double full = lead + (m_min / params.area) * s * wbar_s +
                        std::pow(2.0, params.p - 1.0) * mu_pow[j];
    lead_min = std::min(lead_min, lead);
    full_min = std::min(full_min, full);
  }
  rep.lhs = -lead_min;  // largest positive part of the residual's lead term
  rep.rhs = 0.0;
  rep.margin = full_min;
  rep.pass = rep.lhs <= 1e-12 * std::max(1.0, a);
  return rep;
}

MonitorReport check_supersolution_ordering(const RadialGrid& grid,
                                           const FieldW& w,
                                           const Supersolution& sup, double t) {
  if (w.size() != grid.n_nodes())
    throw DimensionError("check_supersolution_ordering: w/grid size mismatch");
  MonitorReport rep;
  rep.name = "supersolution_ordering";
  rep.t = t;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.n_nodes(); ++j) {
    const double wbar = sup.evaluate(grid.s[j]);
    const double gap = wbar - w[j];
    if (gap < worst) {
      worst = gap;
      rep.lhs = w[j];
      rep.rhs = wbar;
    }
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs + 1e-6 * sup.a;
  return rep;
}

}  // namespace kslab
