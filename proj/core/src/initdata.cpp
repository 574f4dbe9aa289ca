#include "kslab/initdata.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kslab/errors.hpp"
#include "kslab/transform.hpp"

namespace kslab {

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::PlateauTail:
      return "plateau_tail";
    case ProfileKind::CosineCap:
      return "cosine_cap";
    case ProfileKind::Constant:
      return "constant";
  }
  return "?";
}

double concentration(const RadialGrid& grid, const FieldU& u, double r1) {
  const std::size_t n = grid.n_nodes();
  if (u.size() != n) throw DimensionError("concentration: size mismatch");
  if (!(r1 > 0.0) || r1 > grid.R) throw DomainError("concentration: r1 outside (0, R]");
  double acc = 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (grid.r[j] <= r1) {
      acc += 0.5 * (grid.r[j] - grid.r[j - 1]) *
             (grid.r[j - 1] * u[j - 1] + grid.r[j] * u[j]);
      if (grid.r[j] == r1) break;
    } else {
      // partial cell [r_{j-1}, r1] with u interpolated at r1
      const double th = (r1 - grid.r[j - 1]) / (grid.r[j] - grid.r[j - 1]);
      const double u1 = (1.0 - th) * u[j - 1] + th * u[j];
      acc += 0.5 * (r1 - grid.r[j - 1]) * (grid.r[j - 1] * u[j - 1] + r1 * u1);
      break;
    }
  }
  return 2.0 * std::numbers::pi * acc;
}

namespace {

// Shape pair: u_j = H * core[j] + tail_level * skirt[j].
void sample_shapes(const RadialGrid& grid, const BumpSpec& spec,
                   std::vector<double>& core, std::vector<double>& skirt) {
  const std::size_t n = grid.n_nodes();
  core.assign(n, 0.0);
  skirt.assign(n, 0.0);
  const double pi = std::numbers::pi;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = grid.r[j];
    double b;  // blend weight of the core
    if (r >= spec.r1) {
      b = 0.0;
    } else if (spec.profile == ProfileKind::CosineCap) {
      const double c = std::cos(0.5 * pi * r / spec.r1);
      b = c * c;
    } else {  // plateau with cosine taper over [r1/2, r1]
      if (r <= 0.5 * spec.r1) {
        b = 1.0;
      } else {
        const double th = (r - 0.5 * spec.r1) / (0.5 * spec.r1);
        b = 0.5 * (1.0 + std::cos(pi * th));
      }
    }
    core[j] = b;
    skirt[j] = 1.0 - b;
  }
}

}  // namespace

FieldU build_initial_data(const RadialGrid& grid, const BumpSpec& spec,
                          BuildReport* report) {
  if (!(spec.m0 > 0.0)) throw ConfigError("build_initial_data: m0 must be positive");
  if (spec.m_tilde >= spec.m0)
    throw ConfigError("build_initial_data: m_tilde must be below m0");
  const double uniform = spec.m0 / grid.area();

  if (spec.profile == ProfileKind::Constant) {
    FieldU u(grid.n_nodes(), uniform);
    const double conc = spec.m_tilde > 0.0 ? concentration(grid, u, spec.r1) : 0.0;
    if (spec.m_tilde > 0.0 && conc < spec.m_tilde)
      throw InfeasibleError("build_initial_data: constant profile holds only " +
                            std::to_string(conc) + " inside r1, below m_tilde");
    if (report) *report = {uniform, uniform, mass_of(grid, u), conc, true};
    return u;
  }

  if (!(spec.r1 >= 2.0 * grid.dr) || !(spec.r1 < grid.R))
    throw ConfigError("build_initial_data: r1 must lie in [2 dr, R) to be resolvable");

  std::vector<double> core, skirt;
  sample_shapes(grid, spec, core, skirt);
  const double mass_core = mass_of(grid, FieldU(core));
  const double mass_skirt = mass_of(grid, FieldU(skirt));

  double H, tail;
  bool fallback = false;
  if (spec.m_tilde <= 0.0) {
    // no concentration request: flat profile
    H = tail = uniform;
    fallback = true;
  } else {
    // mass and concentration are linear in (H, tail); solve the 2x2 system
    const double conc_core = concentration(grid, FieldU(core), spec.r1);
    const double conc_skirt = concentration(grid, FieldU(skirt), spec.r1);
    // aim a hair above m_tilde so the >= constraint survives rounding
    const double target = spec.m_tilde * (1.0 + 1e-9);
    const double det = conc_core * mass_skirt - conc_skirt * mass_core;
    if (std::abs(det) < 1e-14 * std::max(1.0, conc_core * mass_skirt))
      throw InfeasibleError("build_initial_data: degenerate shape system (r1 unresolvable)");
    H = (target * mass_skirt - conc_skirt * spec.m0) / det;
    tail = (conc_core * spec.m0 - mass_core * target) / det;
    if (tail < 0.0) {
      std::ostringstream os;
      os << "build_initial_data: infeasible, binding constraint: tail nonnegativity"
         << " (m_tilde " << spec.m_tilde << " too close to m0 " << spec.m0
         << " for r1 " << spec.r1 << "; solved tail level " << tail << ")";
      throw InfeasibleError(os.str());
    }
    if (H < tail) {
      // the uniform profile already concentrates more than m_tilde inside r1;
      // the constraint is an inequality, so fall back to it
      H = tail = uniform;
      fallback = true;
    }
  }

  FieldU u(grid.n_nodes());
  for (std::size_t j = 0; j < grid.n_nodes(); ++j)
    u[j] = H * core[j] + tail * skirt[j];

  const double mass = mass_of(grid, u);
  const double conc = concentration(grid, u, spec.r1);
  if (std::abs(mass - spec.m0) > 1e-8 * spec.m0)
    throw NumericalError("build_initial_data: mass target missed");
  if (spec.m_tilde > 0.0 && conc < spec.m_tilde * (1.0 - 1e-12))
    throw NumericalError("build_initial_data: concentration target missed");
  if (report) *report = {H, tail, mass, conc, fallback};
  return u;
}

}  // namespace kslab
