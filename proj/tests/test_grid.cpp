#include <doctest.h>

#include <numbers>

#include "kslab/errors.hpp"
#include "kslab/grid.hpp"

using namespace kslab;

TEST_SUITE("grid") {

TEST_CASE("make lays out uniform r-nodes with squared s") {
  const auto g = RadialGrid::make(16, 2.0);
  CHECK(g.n_cells() == 16);
  CHECK(g.n_nodes() == 17);
  CHECK(g.r[0] == 0.0);
  CHECK(g.r.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.dr == doctest::Approx(0.125).epsilon(1e-15));
  for (std::size_t j = 0; j < g.n_nodes(); ++j) {
    CHECK(g.s[j] == doctest::Approx(g.r[j] * g.r[j]).epsilon(1e-15));
    if (j > 0)
      CHECK(g.r[j] - g.r[j - 1] == doctest::Approx(g.dr).epsilon(1e-12));
  }
  CHECK(g.area() == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-15));
  CHECK(g.first_s_spacing() == doctest::Approx(g.dr * g.dr).epsilon(1e-15));
}

TEST_CASE("make rejects invalid shapes") {
  CHECK_THROWS_AS(RadialGrid::make(8, 1.0), ConfigError);
  CHECK_THROWS_AS(RadialGrid::make(64, 0.0), ConfigError);
  CHECK_THROWS_AS(RadialGrid::make(64, -1.0), ConfigError);
}

}  // TEST_SUITE
