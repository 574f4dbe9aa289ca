#pragma once

#include <cstddef>
#include <string>

#include "kslab/initdata.hpp"
#include "kslab/model.hpp"

namespace kslab {

enum class SolverChoice { Primitive, Mass, Both };

const char* to_string(SolverChoice solver);
SolverChoice solver_from_string(const std::string& name);

struct GridConfig {
  std::size_t n = 256;  // >= 64 for experiments
};

struct InitConfig {
  ProfileKind profile = ProfileKind::PlateauTail;
  double m0_over_8pi = 0.9;
  double r1 = 0.2;
  double m_tilde_fraction = 0.5;  // m_tilde = fraction * m0; <= 0 disables
};

struct RunSection {
  SolverChoice solver = SolverChoice::Primitive;
  double t_end = 1.0;
  double output_interval = 0.0;  // 0 -> t_end / 100
  double dt_min = 1e-12;
  double dt_max = 0.0;  // 0 -> 1e-2 t_end
  double dt_init = 0.0; // 0 -> 1e-6 t_end
  double detect_linf_factor = 1e6;
  int detect_window = 10;
};

struct CertificateConfig {
  bool enabled = false;
  double T_tilde = 0.5;
  // The certified concentration radius is far below any grid scale; the
  // builder widens it to this many cells and records both values.
  std::size_t grid_floor_cells = 8;
};

// One experiment: sections model, grid, init, run, certificate.
struct RunConfig {
  ModelParams model = ModelParams::make(1.0, 2.0, 2.0, 1.0,
                                        CoefficientFn::constant(0.0),
                                        CoefficientFn::power(1.0, 2.0));
  GridConfig grid;
  InitConfig init;
  RunSection run;
  CertificateConfig certificate;

  double m0() const;  // m0_over_8pi * 8 pi
};

RunConfig default_config();

// Strict JSON: unknown keys are errors, sections are optional, fields have
// the defaults above. Throws ConfigError with the offending key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Canonical JSON rendering (alphabetical keys); parse(render(c)) == c.
std::string render_config(const RunConfig& cfg);

}  // namespace kslab
