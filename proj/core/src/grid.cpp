#include "kslab/grid.hpp"

#include <cmath>
#include <numbers>

#include "kslab/errors.hpp"

namespace kslab {

double RadialGrid::area() const { return std::numbers::pi * R * R; }

RadialGrid RadialGrid::make(std::size_t n_cells, double R) {
  if (n_cells < 16) throw ConfigError("RadialGrid: need at least 16 cells");
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("RadialGrid: R must be positive");
  RadialGrid g;
  g.R = R;
  g.dr = R / static_cast<double>(n_cells);
  g.r.resize(n_cells + 1);
  g.s.resize(n_cells + 1);
  for (std::size_t j = 0; j <= n_cells; ++j) {
    // last node exactly at R so boundary identities hold to machine precision
    const double rj = (j == n_cells) ? R : g.dr * static_cast<double>(j);
    g.r[j] = rj;
    g.s[j] = rj * rj;
  }
  return g;
}

}  // namespace kslab
