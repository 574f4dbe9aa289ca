#pragma once

#include <cstddef>
#include <vector>

namespace kslab {

// Node-centered radial grid on the disk of radius R. The r-nodes are uniform,
// 0 = r_0 < r_1 < ... < r_N = R, and carry the paired abscissae s_j = r_j^2
// used by the mass-coordinate solver. The quadratic grading of s packs nodes
// near the origin, which is where solutions concentrate.
struct RadialGrid {
  double R = 1.0;
  double dr = 0.0;
  std::vector<double> r;  // size N+1
  std::vector<double> s;  // s[j] = r[j]^2

  std::size_t n_cells() const { return r.size() - 1; }
  std::size_t n_nodes() const { return r.size(); }

  // First interior s-spacing s_1 - s_0 = dr^2; the smallest s cell.
  double first_s_spacing() const { return s[1]; }

  double area() const;  // |Omega| = pi R^2

  // n_cells >= 16, R > 0.
  static RadialGrid make(std::size_t n_cells, double R);
};

}  // namespace kslab
