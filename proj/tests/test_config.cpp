#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "kslab/config.hpp"
#include "kslab/errors.hpp"

using namespace kslab;

TEST_SUITE("config") {

TEST_CASE("defaults are the documented baseline") {
  const auto cfg = default_config();
  CHECK(cfg.grid.n == 256);
  CHECK(cfg.run.solver == SolverChoice::Primitive);
  CHECK(cfg.run.t_end == 1.0);
  CHECK(cfg.init.profile == ProfileKind::PlateauTail);
  CHECK(cfg.init.m0_over_8pi == 0.9);
  CHECK(cfg.init.r1 == 0.2);
  CHECK(!cfg.certificate.enabled);
  CHECK(cfg.model.p == 2.0);
  CHECK(cfg.model.kappa(0.5) == 0.0);
  CHECK(cfg.model.mu(0.5) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(cfg.m0() ==
        doctest::Approx(0.9 * 8.0 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("empty document means defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.grid.n == default_config().grid.n);
  CHECK(render_config(cfg) == render_config(default_config()));
}

TEST_CASE("a full document round-trips through render and parse") {
  const char* text = R"json({
    "model": {
      "R": 2.0, "p": 3.0, "alpha": 0.5, "mu1": 2.0,
      "kappa": {"kind": "const", "c": 0.2},
      "mu": {"kind": "power", "c": 1.5, "q": 0.5}
    },
    "grid": {"n": 128},
    "init": {"profile": "cosine_cap", "m0_over_8pi": 1.25,
             "r1": 0.3, "m_tilde_fraction": 0.4},
    "run": {"solver": "both", "t_end": 2.5, "output_interval": 0.1,
            "dt_min": 1e-10, "dt_max": 0.01, "dt_init": 1e-5,
            "detect_linf_factor": 100.0, "detect_window": 5},
    "certificate": {"enabled": true, "T_tilde": 0.25, "grid_floor_cells": 12}
  })json";
  const auto cfg = parse_config(text);
  CHECK(cfg.model.R == 2.0);
  CHECK(cfg.model.p == 3.0);
  CHECK(cfg.model.kappa(1.0) == 0.2);
  CHECK(cfg.model.mu(0.25) == doctest::Approx(1.5 * 0.5).epsilon(1e-15));
  CHECK(cfg.grid.n == 128);
  CHECK(cfg.init.profile == ProfileKind::CosineCap);
  CHECK(cfg.run.solver == SolverChoice::Both);
  CHECK(cfg.run.detect_window == 5);
  CHECK(cfg.certificate.enabled);
  CHECK(cfg.certificate.grid_floor_cells == 12);

  const auto text2 = render_config(cfg);
  const auto cfg2 = parse_config(text2);
  CHECK(render_config(cfg2) == text2);
}

TEST_CASE("unknown keys are rejected with their name") {
  for (const char* bad : {
           R"({"bogus": 1})",
           R"({"model": {"bogus": 1}})",
           R"({"grid": {"cells": 64}})",
           R"({"init": {"m0": 3.0}})",
           R"({"run": {"tEnd": 1.0}})",
           R"({"certificate": {"enable": true}})",
       }) {
    CHECK_THROWS_AS(parse_config(bad), ConfigError);
    try {
      parse_config(bad);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("config") != std::string::npos);
    }
  }
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS(parse_config(R"({"grid": {"n": 32}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"p": 1.0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"t_end": -1.0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"solver": "magic"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"init": {"profile": "blob"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"run": {"detect_window": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"certificate": {"T_tilde": 0.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"init": {"r1": 1.5}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"kappa": {"kind": "spline"}}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"model": {"kappa": {"kind": "const"}}})"),
                  ConfigError);  // missing c
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("solver names map both ways") {
  CHECK(solver_from_string("primitive") == SolverChoice::Primitive);
  CHECK(solver_from_string("mass") == SolverChoice::Mass);
  CHECK(solver_from_string("both") == SolverChoice::Both);
  CHECK(std::string(to_string(SolverChoice::Primitive)) == "primitive");
  CHECK(std::string(to_string(SolverChoice::Mass)) == "mass");
  CHECK(std::string(to_string(SolverChoice::Both)) == "both");
  CHECK_THROWS_AS(solver_from_string("magic"), ConfigError);
}

TEST_CASE("load_config reads files and reports missing ones") {
  const std::string path = "/tmp/kslab_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"grid": {"n": 96}})";
  }
  const auto cfg = load_config(path);
  CHECK(cfg.grid.n == 96);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("/tmp/kslab_no_such_file.json"), ConfigError);
}

}  // TEST_SUITE
