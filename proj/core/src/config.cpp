#include "kslab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

void require_keys(const json& obj, const std::string& section,
                  const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      bad("unknown key '" + section + "." + it.key() + "'");
    }
  }
}

double number_at(const json& obj, const std::string& section, const std::string& key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) bad("'" + section + "." + key + "' must be a number");
  return v.get<double>();
}

double required_at(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) bad("'" + where + "." + key + "' is required");
  return number_at(obj, where, key, 0.0);
}

CoefficientFn coefficient_from(const json& obj, const std::string& where) {
  if (!obj.is_object()) bad("'" + where + "' must be an object with a 'kind'");
  std::string kind = obj.value("kind", std::string());
  if (kind == "const") {
    require_keys(obj, where, {"kind", "c"});
    return CoefficientFn::constant(required_at(obj, where, "c"));
  }
  if (kind == "power") {
    require_keys(obj, where, {"kind", "c", "q"});
    return CoefficientFn::power(required_at(obj, where, "c"),
                                required_at(obj, where, "q"));
  }
  if (kind == "affine") {
    require_keys(obj, where, {"kind", "a", "b"});
    return CoefficientFn::affine(required_at(obj, where, "a"),
                                 required_at(obj, where, "b"));
  }
  bad("'" + where + ".kind' must be one of const, power, affine");
}

json coefficient_to(const CoefficientFn& f) {
  json out;
  switch (f.kind) {
    case CoefficientFn::Kind::Const:
      out["kind"] = "const";
      out["c"] = f.p0;
      break;
    case CoefficientFn::Kind::Power:
      out["kind"] = "power";
      out["c"] = f.p0;
      out["q"] = f.p1;
      break;
    case CoefficientFn::Kind::Affine:
      out["kind"] = "affine";
      out["a"] = f.p0;
      out["b"] = f.p1;
      break;
  }
  return out;
}

ProfileKind profile_from(const std::string& name) {
  if (name == "plateau_tail") return ProfileKind::PlateauTail;
  if (name == "cosine_cap") return ProfileKind::CosineCap;
  if (name == "constant") return ProfileKind::Constant;
  bad("'init.profile' must be one of plateau_tail, cosine_cap, constant");
}

RunConfig from_json(const json& root) {
  if (!root.is_object()) bad("top level must be an object");
  require_keys(root, "<top>", {"model", "grid", "init", "run", "certificate"});

  RunConfig cfg = default_config();

  if (root.contains("model")) {
    const json& m = root.at("model");
    require_keys(m, "model", {"R", "p", "alpha", "mu1", "kappa", "mu"});
    double R = number_at(m, "model", "R", 1.0);
    double p = number_at(m, "model", "p", 2.0);
    double alpha = number_at(m, "model", "alpha", 2.0);
    double mu1 = number_at(m, "model", "mu1", 1.0);
    CoefficientFn kappa = m.contains("kappa")
                              ? coefficient_from(m.at("kappa"), "model.kappa")
                              : CoefficientFn::constant(0.0);
    CoefficientFn mu = m.contains("mu") ? coefficient_from(m.at("mu"), "model.mu")
                                        : CoefficientFn::power(1.0, 2.0);
    if (!(R > 0.0)) bad("'model.R' must be positive");
    if (!(p > 1.0)) bad("'model.p' must exceed 1");
    if (!(mu1 > 0.0)) bad("'model.mu1' must be positive");
    if (!(alpha >= 0.0)) bad("'model.alpha' must be nonnegative");
    cfg.model = ModelParams::make(R, p, alpha, mu1, kappa, mu);
  }

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    require_keys(g, "grid", {"n"});
    double n = number_at(g, "grid", "n", 256.0);
    if (!(n >= 64.0) || n != std::floor(n)) {
      bad("'grid.n' must be an integer >= 64");
    }
    cfg.grid.n = static_cast<std::size_t>(n);
  }

  if (root.contains("init")) {
    const json& i = root.at("init");
    require_keys(i, "init", {"profile", "m0_over_8pi", "r1", "m_tilde_fraction"});
    if (i.contains("profile")) {
      if (!i.at("profile").is_string()) bad("'init.profile' must be a string");
      cfg.init.profile = profile_from(i.at("profile").get<std::string>());
    }
    cfg.init.m0_over_8pi = number_at(i, "init", "m0_over_8pi", cfg.init.m0_over_8pi);
    cfg.init.r1 = number_at(i, "init", "r1", cfg.init.r1);
    cfg.init.m_tilde_fraction =
        number_at(i, "init", "m_tilde_fraction", cfg.init.m_tilde_fraction);
    if (!(cfg.init.m0_over_8pi > 0.0)) bad("'init.m0_over_8pi' must be positive");
    if (!(cfg.init.r1 > 0.0 && cfg.init.r1 < cfg.model.R)) {
      bad("'init.r1' must lie in (0, R)");
    }
    if (cfg.init.m_tilde_fraction >= 1.0) {
      bad("'init.m_tilde_fraction' must be below 1");
    }
  }

  if (root.contains("run")) {
    const json& r = root.at("run");
    require_keys(r, "run",
                 {"solver", "t_end", "output_interval", "dt_min", "dt_max", "dt_init",
                  "detect_linf_factor", "detect_window"});
    if (r.contains("solver")) {
      if (!r.at("solver").is_string()) bad("'run.solver' must be a string");
      cfg.run.solver = solver_from_string(r.at("solver").get<std::string>());
    }
    cfg.run.t_end = number_at(r, "run", "t_end", cfg.run.t_end);
    cfg.run.output_interval =
        number_at(r, "run", "output_interval", cfg.run.output_interval);
    cfg.run.dt_min = number_at(r, "run", "dt_min", cfg.run.dt_min);
    cfg.run.dt_max = number_at(r, "run", "dt_max", cfg.run.dt_max);
    cfg.run.dt_init = number_at(r, "run", "dt_init", cfg.run.dt_init);
    cfg.run.detect_linf_factor =
        number_at(r, "run", "detect_linf_factor", cfg.run.detect_linf_factor);
    double window = number_at(r, "run", "detect_window",
                              static_cast<double>(cfg.run.detect_window));
    if (!(window >= 2.0) || window != std::floor(window)) {
      bad("'run.detect_window' must be an integer >= 2");
    }
    cfg.run.detect_window = static_cast<int>(window);
    if (!(cfg.run.t_end >= 0.0)) bad("'run.t_end' must be nonnegative");
    if (cfg.run.output_interval < 0.0) bad("'run.output_interval' must be >= 0");
    if (!(cfg.run.dt_min > 0.0)) bad("'run.dt_min' must be positive");
    if (cfg.run.dt_max < 0.0 || cfg.run.dt_init < 0.0) {
      bad("'run.dt_max' and 'run.dt_init' must be >= 0");
    }
    if (!(cfg.run.detect_linf_factor > 1.0)) {
      bad("'run.detect_linf_factor' must exceed 1");
    }
  }

  if (root.contains("certificate")) {
    const json& c = root.at("certificate");
    require_keys(c, "certificate", {"enabled", "T_tilde", "grid_floor_cells"});
    if (c.contains("enabled")) {
      if (!c.at("enabled").is_boolean()) bad("'certificate.enabled' must be a bool");
      cfg.certificate.enabled = c.at("enabled").get<bool>();
    }
    cfg.certificate.T_tilde =
        number_at(c, "certificate", "T_tilde", cfg.certificate.T_tilde);
    double cells = number_at(c, "certificate", "grid_floor_cells",
                             static_cast<double>(cfg.certificate.grid_floor_cells));
    if (!(cells >= 2.0) || cells != std::floor(cells)) {
      bad("'certificate.grid_floor_cells' must be an integer >= 2");
    }
    cfg.certificate.grid_floor_cells = static_cast<std::size_t>(cells);
    if (!(cfg.certificate.T_tilde > 0.0 && cfg.certificate.T_tilde <= 1.0)) {
      bad("'certificate.T_tilde' must lie in (0, 1]");
    }
  }

  return cfg;
}

}  // namespace

const char* to_string(SolverChoice solver) {
  switch (solver) {
    case SolverChoice::Primitive:
      return "primitive";
    case SolverChoice::Mass:
      return "mass";
    case SolverChoice::Both:
      return "both";
  }
  return "?";
}

SolverChoice solver_from_string(const std::string& name) {
  if (name == "primitive") return SolverChoice::Primitive;
  if (name == "mass") return SolverChoice::Mass;
  if (name == "both") return SolverChoice::Both;
  bad("'run.solver' must be one of primitive, mass, both");
}

double RunConfig::m0() const { return init.m0_over_8pi * 8.0 * kPi; }

RunConfig default_config() { return RunConfig{}; }

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  return from_json(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const RunConfig& cfg) {
  json root;
  root["model"] = {{"R", cfg.model.R},
                   {"p", cfg.model.p},
                   {"alpha", cfg.model.alpha},
                   {"mu1", cfg.model.mu1},
                   {"kappa", coefficient_to(cfg.model.kappa)},
                   {"mu", coefficient_to(cfg.model.mu)}};
  root["grid"] = {{"n", cfg.grid.n}};
  root["init"] = {{"profile", to_string(cfg.init.profile)},
                  {"m0_over_8pi", cfg.init.m0_over_8pi},
                  {"r1", cfg.init.r1},
                  {"m_tilde_fraction", cfg.init.m_tilde_fraction}};
  root["run"] = {{"solver", to_string(cfg.run.solver)},
                 {"t_end", cfg.run.t_end},
                 {"output_interval", cfg.run.output_interval},
                 {"dt_min", cfg.run.dt_min},
                 {"dt_max", cfg.run.dt_max},
                 {"dt_init", cfg.run.dt_init},
                 {"detect_linf_factor", cfg.run.detect_linf_factor},
                 {"detect_window", cfg.run.detect_window}};
  root["certificate"] = {{"enabled", cfg.certificate.enabled},
                         {"T_tilde", cfg.certificate.T_tilde},
                         {"grid_floor_cells", cfg.certificate.grid_floor_cells}};
  return root.dump(2) + "\n";
}

}  // namespace kslab
