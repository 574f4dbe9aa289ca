#pragma once

#include "kslab/fields.hpp"
#include "kslab/grid.hpp"

namespace kslab {

enum class ProfileKind { PlateauTail, CosineCap, Constant };

const char* to_string(ProfileKind k);

// Radially nonincreasing bump: a core of height H inside r1 (flat plateau up
// to r1/2 with a cosine taper, or a cosine cap), glued to a constant tail on
// [r1, R]. H and the tail level are chosen so that the grid quadrature gives
//   2 pi trapezoid(rho u)          = m0        (total mass)
//   2 pi trapezoid(rho u; [0,r1]) >= m_tilde   (concentration)
struct BumpSpec {
  ProfileKind profile = ProfileKind::PlateauTail;
  double m0 = 0.0;       // target total mass, > 0
  double r1 = 0.0;       // concentration radius, in [2 dr, R)
  double m_tilde = 0.0;  // mass to place inside r1, < m0; <= 0 disables
};

struct BuildReport {
  double plateau = 0.0;  // core height H
  double tail = 0.0;     // tail level
  double mass = 0.0;
  double concentration = 0.0;
  bool constant_fallback = false;  // requested m_tilde already held by the
                                   // uniform profile; returned u is constant
};

// Throws InfeasibleError naming the binding constraint when no nonnegative
// nonincreasing profile exists (m_tilde too close to m0 with a tight r1).
FieldU build_initial_data(const RadialGrid& grid, const BumpSpec& spec,
                          BuildReport* report = nullptr);

// 2 pi trapezoid(rho u) over [0, r1], with linear interpolation of u at r1.
double concentration(const RadialGrid& grid, const FieldU& u, double r1);

}  // namespace kslab
