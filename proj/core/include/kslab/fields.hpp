#pragma once

#include <cstddef>
#include <vector>

namespace kslab {

// Samples of the cell density u(r) on the r-nodes. Nonnegative for valid
// states; the steppers clip and account for any negative undershoot.
struct FieldU {
  std::vector<double> values;

  FieldU() = default;
  explicit FieldU(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit FieldU(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }
};

// Samples of the cumulative mass density w(s) = \int_0^{sqrt(s)} rho u drho
// on the s-nodes. w[0] = 0 and w is nondecreasing; 2*pi*w back() is the mass.
struct FieldW {
  std::vector<double> values;

  FieldW() = default;
  explicit FieldW(std::size_t n, double fill = 0.0) : values(n, fill) {}
  explicit FieldW(std::vector<double> v) : values(std::move(v)) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }
  double back() const { return values.back(); }
};

// Chemical concentration and its radial derivative on the r-nodes. v is
// normalized to zero mean over the disk; vr(0) = vr(R) = 0.
struct FieldV {
  std::vector<double> v;
  std::vector<double> vr;
};

}  // namespace kslab
