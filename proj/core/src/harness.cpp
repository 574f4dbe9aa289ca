#include "kslab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "kslab/elliptic.hpp"
#include "kslab/errors.hpp"
#include "kslab/initdata.hpp"
#include "kslab/numerics.hpp"
#include "kslab/stepper_u.hpp"
#include "kslab/stepper_w.hpp"
#include "kslab/transform.hpp"

namespace kslab {

namespace fs = std::filesystem;
using nlohmann::json;

const char* const kSeriesHeader =
    "t,m,linf_u,phi,phi_rhs_odi,ws_bound_margin,monotonicity_margin,"
    "vrr_margin,supersolution_margin,dt";

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

const char* kDetectPrefix = "blow-up detected";

bool kappa_vanishes(const ModelParams& params) {
  for (int i = 0; i <= 32; ++i) {
    double r = params.R * static_cast<double>(i) / 32.0;
    if (std::abs(params.kappa(r)) > 1e-14) return false;
  }
  return true;
}

std::string map_outcome(const RunRecord& rec) {
  switch (rec.outcome) {
    case RunOutcome::Completed:
      return "completed";
    case RunOutcome::DtUnderflow:
      return "blowup_detected";
    case RunOutcome::NumericalFailure:
      return "numerical_failure";
    case RunOutcome::Stopped:
      return rec.detail.rfind(kDetectPrefix, 0) == 0 ? "blowup_detected"
                                                     : "numerical_failure";
  }
  return "numerical_failure";
}

double report_margin(const std::vector<MonitorReport>& reports,
                     const std::string& name) {
  for (const MonitorReport& r : reports) {
    if (r.name == name) return r.margin;
  }
  return kNan;
}

struct SeriesRow {
  double phi = kNan;
  double phi_rhs = kNan;
};

// Monitors for one snapshot; shared by both solver legs.
std::vector<MonitorReport> snapshot_reports(const RadialGrid& grid,
                                            const Snapshot& snap, double m0,
                                            const ModelParams& params,
                                            const Supersolution* sup) {
  std::vector<MonitorReport> reports;
  FieldU u{snap.u};
  FieldW w{snap.w};
  reports.push_back(check_mass_bound(snap.m, snap.t, m0, params.kappa1));
  reports.push_back(check_ws_bound(grid, w, snap.t, m0, params.kappa1));
  reports.push_back(check_radial_monotonicity(u, snap.t));
  std::vector<double> vr = solve_vr(grid, w, snap.m);
  std::vector<double> vrr = compute_vrr(grid, u, vr, snap.m);
  reports.push_back(check_vrr_bound(grid, u, vrr, snap.t));
  if (sup != nullptr) {
    reports.push_back(check_supersolution_ordering(grid, w, *sup, snap.t));
  }
  return reports;
}

SolverRun digest_record(RunRecord&& rec, const std::string& solver,
                        const RadialGrid& grid, double m0,
                        const ModelParams& params, const Supersolution* sup) {
  SolverRun run;
  run.solver = solver;
  run.outcome = map_outcome(rec);
  run.detail = rec.detail;
  run.t_final = rec.t_final;
  run.peak_linf = rec.peak_linf;
  run.steps_accepted = rec.steps_accepted;
  run.steps_rejected = rec.steps_rejected;
  run.snapshots = std::move(rec.snapshots);

  const bool blowup = run.outcome == "blowup_detected";
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const Snapshot& snap = run.snapshots[i];
    SnapshotMonitors sm;
    sm.t = snap.t;
    sm.reports = snapshot_reports(grid, snap, m0, params, sup);
    const bool collapse_state = blowup && i + 1 == run.snapshots.size();
    if (!collapse_state) {
      for (const MonitorReport& r : sm.reports) run.monitors.absorb(r);
    }
    run.snapshot_monitors.push_back(std::move(sm));
  }
  if (sup != nullptr && !run.snapshots.empty()) {
    std::vector<double> m_series;
    m_series.reserve(run.snapshots.size());
    for (const Snapshot& snap : run.snapshots) m_series.push_back(snap.m);
    run.monitors.absorb(
        check_supersolution_residual(grid, *sup, params, m_series));
  }
  return run;
}

void write_series_csv(const std::string& path, const RadialGrid& grid,
                      const SolverRun& run, const MomentConfig* mc,
                      const OdiCoefficients& k) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write series file '" + path + "'");
  out << kSeriesHeader << "\n";
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    const Snapshot& snap = run.snapshots[i];
    const std::vector<MonitorReport>& reports = run.snapshot_monitors[i].reports;
    SeriesRow row;
    if (mc != nullptr) {
      FieldW w{snap.w};
      row.phi = moment_phi(grid, w, *mc);
      row.phi_rhs = k.c1 * row.phi * row.phi - k.c2 * row.phi - (k.c31 + k.c32);
    }
    out << format_double(snap.t) << ',' << format_double(snap.m) << ','
        << format_double(snap.linf_u) << ',' << format_double(row.phi) << ','
        << format_double(row.phi_rhs) << ','
        << format_double(report_margin(reports, "ws_bound")) << ','
        << format_double(report_margin(reports, "radial_monotonicity")) << ','
        << format_double(report_margin(reports, "vrr_bound")) << ','
        << format_double(report_margin(reports, "supersolution_ordering")) << ','
        << format_double(snap.dt) << "\n";
  }
}

json monitors_json(const MonitorSummary& summary) {
  json arr = json::array();
  for (const MonitorTotals& t : summary.totals) {
    arr.push_back({{"name", t.name},
                   {"checked", t.checked},
                   {"passed", t.passed},
                   {"worst_margin", t.worst_margin}});
  }
  return arr;
}

json hypotheses_json(const HypothesisReport& rep) {
  return {{"pass", rep.pass},
          {"violations", rep.total_violations},
          {"samples", rep.samples}};
}

}  // namespace

bool detect_blowup(double linf, double linf0, const StepHistory& history,
                   const DetectionPolicy& policy) {
  if (linf >= policy.linf_factor * std::max(1.0, linf0)) return true;
  if (policy.window <= 0) return false;
  const std::size_t window = static_cast<std::size_t>(policy.window);
  if (history.size() < window || window < 2) return false;
  const std::size_t n = history.size();
  for (std::size_t i = n - window; i < n; ++i) {
    if (!history[i].at_dt_min) return false;
  }
  return history[n - 1].linf > history[n - window].linf;
}

void MonitorSummary::absorb(const MonitorReport& report) {
  for (MonitorTotals& t : totals) {
    if (t.name == report.name) {
      ++t.checked;
      if (report.pass) ++t.passed;
      t.worst_margin = std::min(t.worst_margin, report.margin);
      return;
    }
  }
  MonitorTotals t;
  t.name = report.name;
  t.checked = 1;
  t.passed = report.pass ? 1 : 0;
  t.worst_margin = report.margin;
  totals.push_back(std::move(t));
}

const MonitorTotals* MonitorSummary::find(const std::string& name) const {
  for (const MonitorTotals& t : totals) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

bool MonitorSummary::all_pass() const {
  for (const MonitorTotals& t : totals) {
    if (t.passed != t.checked) return false;
  }
  return true;
}

std::string MonitorSummary::render() const {
  std::ostringstream out;
  for (const MonitorTotals& t : totals) {
    out << "  " << t.name << ": " << t.passed << "/" << t.checked
        << " pass, worst margin " << format_double(t.worst_margin) << "\n";
  }
  return out.str();
}

RunResult run_experiment(const RunConfig& cfg, const std::string& out_dir) {
  const ModelParams& params = cfg.model;
  RunResult result;
  result.config_echo = render_config(cfg);
  result.r1_requested = kNan;
  result.r1_effective = kNan;
  result.m_tilde = kNan;
  result.cross_solver_linf_rel = kNan;

  if (!out_dir.empty()) fs::create_directories(out_dir);

  result.blowup_hypotheses = check_blowup_hypotheses(params);
  result.global_hypotheses = check_global_hypotheses(params);

  const RadialGrid grid = RadialGrid::make(cfg.grid.n, params.R);
  const double m0 = cfg.m0();

  std::optional<MomentConfig> moment;
  OdiCoefficients coeffs;
  if (cfg.certificate.enabled) {
    SearchConfig search;
    search.T_tilde = cfg.certificate.T_tilde;
    CertificateSearch found = select_blowup_parameters(m0, params, search);
    result.certificate = found.certificate;
    result.certificate_diagnostic = found.diagnostic;
    if (result.certificate) {
      moment = MomentConfig{result.certificate->s0, result.certificate->beta};
      coeffs = result.certificate->coeffs;
      if (!out_dir.empty()) {
        std::ofstream cert_out(out_dir + "/certificate.txt");
        cert_out << serialize(*result.certificate);
      }
    }
  }

  BumpSpec spec;
  spec.profile = cfg.init.profile;
  spec.m0 = m0;
  if (result.certificate) {
    result.r1_requested =
        std::min(result.certificate->r1, result.certificate->r1_alt);
    result.m_tilde = result.certificate->m_tilde;
    const double floor_r =
        grid.dr * static_cast<double>(cfg.certificate.grid_floor_cells);
    result.r1_effective =
        std::min(std::max(result.r1_requested, floor_r), 0.9 * params.R);
  } else {
    result.r1_requested = cfg.init.r1;
    result.r1_effective = cfg.init.r1;
    result.m_tilde =
        cfg.init.m_tilde_fraction > 0.0 ? cfg.init.m_tilde_fraction * m0 : 0.0;
  }
  spec.r1 = result.r1_effective;
  spec.m_tilde = result.m_tilde;

  BuildReport build;
  const FieldU u0 = build_initial_data(grid, spec, &build);
  const FieldW w0 = forward_transform(grid, u0);
  const double linf0 = max_abs(u0.values);

  std::optional<Supersolution> sup;
  if (kappa_vanishes(params) && m0 < 8.0 * kPi) {
    try {
      sup = select_supersolution(grid, m0, w0);
    } catch (const Error&) {
      // No static majorant available; the ordering monitor is skipped.
    }
  }

  StepControls controls;
  controls.dt_min = cfg.run.dt_min;
  controls.dt_max = cfg.run.dt_max;
  controls.dt_init = cfg.run.dt_init;

  const DetectionPolicy policy{cfg.run.detect_linf_factor,
                               cfg.run.detect_window};

  std::vector<SolverChoice> legs;
  if (cfg.run.solver == SolverChoice::Both) {
    legs = {SolverChoice::Primitive, SolverChoice::Mass};
  } else {
    legs = {cfg.run.solver};
  }

  for (SolverChoice leg : legs) {
    RunRecord rec;
    if (leg == SolverChoice::Primitive) {
      RunOptionsU opts;
      opts.snapshot_interval = cfg.run.output_interval;
      opts.stop_check = [&](const SimStateU& st, const StepHistory& hist)
          -> std::optional<std::string> {
        if (detect_blowup(st.linf, linf0, hist, policy)) {
          return std::string(kDetectPrefix) + ": linf " + format_double(st.linf);
        }
        return std::nullopt;
      };
      rec = run_u(u0, params, grid, cfg.run.t_end, controls, opts);
    } else {
      RunOptionsW opts;
      opts.snapshot_interval = cfg.run.output_interval;
      opts.stop_check = [&](const SimStateW& st, const StepHistory& hist)
          -> std::optional<std::string> {
        if (detect_blowup(st.linf, linf0, hist, policy)) {
          return std::string(kDetectPrefix) + ": linf " + format_double(st.linf);
        }
        return std::nullopt;
      };
      rec = run_w(w0, params, grid, cfg.run.t_end, controls, opts);
    }
    SolverRun run = digest_record(std::move(rec), to_string(leg), grid, m0,
                                  params, sup ? &*sup : nullptr);
    if (!out_dir.empty()) {
      run.series_path = out_dir + "/series_" + run.solver + ".csv";
      write_series_csv(run.series_path, grid, run, moment ? &*moment : nullptr,
                       coeffs);
    }
    result.runs.push_back(std::move(run));
  }

  // Aggregate over legs.
  result.outcome = result.runs.front().outcome;
  result.t_final = result.runs.front().t_final;
  result.peak_linf = result.runs.front().peak_linf;
  for (const SolverRun& run : result.runs) {
    if (run.outcome != result.outcome) result.outcome = "numerical_failure";
    result.peak_linf = std::max(result.peak_linf, run.peak_linf);
  }
  if (result.runs.size() == 2 && result.outcome == "blowup_detected") {
    result.t_final = std::min(result.runs[0].t_final, result.runs[1].t_final);
  }

  if (result.runs.size() == 2) {
    const std::vector<Snapshot>& sp = result.runs[0].snapshots;
    const std::vector<Snapshot>& sm = result.runs[1].snapshots;
    if (!sp.empty() && !sm.empty()) {
      const std::vector<double>& up = sp.back().u;
      const std::vector<double>& um = sm.back().u;
      double diff = 0.0;
      for (std::size_t j = 0; j < up.size(); ++j) {
        diff = std::max(diff, std::abs(up[j] - um[j]));
      }
      const double scale =
          std::max({max_abs(up), max_abs(um), 1e-300});
      result.cross_solver_linf_rel = diff / scale;
      if (!out_dir.empty()) {
        std::ofstream out(out_dir + "/cross_solver.csv");
        out << "t_primitive,t_mass,linf_rel_diff\n";
        const std::size_t count = std::min(sp.size(), sm.size());
        for (std::size_t i = 0; i < count; ++i) {
          double d = 0.0;
          for (std::size_t j = 0; j < sp[i].u.size(); ++j) {
            d = std::max(d, std::abs(sp[i].u[j] - sm[i].u[j]));
          }
          const double sc =
              std::max({max_abs(sp[i].u), max_abs(sm[i].u), 1e-300});
          out << format_double(sp[i].t) << ',' << format_double(sm[i].t) << ','
              << format_double(d / sc) << "\n";
        }
      }
    }
  }

  if (!out_dir.empty()) {
    json doc;
    doc["outcome"] = result.outcome;
    doc["t_final"] = result.t_final;
    doc["peak_linf"] = result.peak_linf;
    doc["certificate_diagnostic"] = result.certificate_diagnostic;
    if (result.certificate) {
      const Certificate& c = *result.certificate;
      doc["certificate"] = {
          {"m0", c.m0},           {"beta", c.beta},
          {"m_tilde", c.m_tilde}, {"T_tilde", c.T_tilde},
          {"lambda", c.lambda},   {"eta", c.eta},
          {"epsilon", c.epsilon}, {"s0", c.s0},
          {"r1", c.r1},           {"r1_alt", c.r1_alt},
          {"f_value", c.f_value}, {"threshold", c.threshold},
          {"c1", c.coeffs.c1},    {"c2", c.coeffs.c2},
          {"c31", c.coeffs.c31},  {"c32", c.coeffs.c32},
          {"phi0", c.coeffs.phi0}};
    } else {
      doc["certificate"] = nullptr;
    }
    doc["r1_requested"] = result.r1_requested;
    doc["r1_effective"] = result.r1_effective;
    doc["m_tilde"] = result.m_tilde;
    doc["build"] = {{"plateau", build.plateau},
                    {"tail", build.tail},
                    {"mass", build.mass},
                    {"concentration", build.concentration},
                    {"constant_fallback", build.constant_fallback}};
    doc["hypotheses"] = {{"blowup", hypotheses_json(result.blowup_hypotheses)},
                         {"global", hypotheses_json(result.global_hypotheses)}};
    json runs = json::array();
    for (const SolverRun& run : result.runs) {
      runs.push_back({{"solver", run.solver},
                      {"outcome", run.outcome},
                      {"detail", run.detail},
                      {"t_final", run.t_final},
                      {"peak_linf", run.peak_linf},
                      {"steps_accepted", run.steps_accepted},
                      {"steps_rejected", run.steps_rejected},
                      {"series", run.series_path},
                      {"monitors", monitors_json(run.monitors)}});
    }
    doc["runs"] = runs;
    doc["cross_solver_linf_rel"] = result.cross_solver_linf_rel;
    doc["config"] = json::parse(result.config_echo);
    {
      // Canonical snapshot; feeding it back to `run --config` reproduces
      // the experiment.
      const std::string path = out_dir + "/config.json";
      std::ofstream out(path);
      if (!out) throw Error("cannot write '" + path + "'");
      out << result.config_echo;
    }
    result.result_path = out_dir + "/result.json";
    std::ofstream out(result.result_path);
    if (!out) throw Error("cannot write '" + result.result_path + "'");
    out << doc.dump(2) << "\n";
  }

  return result;
}

unsigned sweep_thread_cap() {
  if (const char* env = std::getenv("KSLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && parsed >= 1) {
      return static_cast<unsigned>(std::min(parsed, 1024ul));
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1u;
}

SweepResult sweep_mass(const RunConfig& base, const std::vector<double>& m0_over_8pi,
                       const std::string& out_dir) {
  SweepResult result;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  result.rows.resize(m0_over_8pi.size());

  auto run_one = [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.m0_over_8pi = m0_over_8pi[i];
    std::ostringstream name;
    name << "run_" << i;
    row.dir = out_dir.empty() ? std::string() : out_dir + "/" + name.str();
    try {
      RunConfig cfg = base;
      cfg.init.m0_over_8pi = m0_over_8pi[i];
      RunResult r = run_experiment(cfg, row.dir);
      row.outcome = r.outcome;
      row.t_final = r.t_final;
      row.peak_linf = r.peak_linf;
    } catch (const std::exception& e) {
      row.outcome = "error";
      row.t_final = kNan;
      row.peak_linf = kNan;
      row.error = e.what();
    }
  };

  const std::size_t jobs = m0_over_8pi.size();
  const unsigned workers =
      std::min<unsigned>(sweep_thread_cap(),
                         static_cast<unsigned>(std::max<std::size_t>(jobs, 1)));
  if (workers <= 1 || jobs <= 1) {
    for (std::size_t i = 0; i < jobs; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= jobs) return;
          run_one(i);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  if (!out_dir.empty()) {
    result.summary_path = out_dir + "/summary.csv";
    std::ofstream out(result.summary_path);
    if (!out) throw Error("cannot write '" + result.summary_path + "'");
    out << "m0_over_8pi,outcome,t_final,peak_linf\n";
    for (const SweepRow& row : result.rows) {
      out << format_double(row.m0_over_8pi) << ',' << row.outcome << ','
          << format_double(row.t_final) << ',' << format_double(row.peak_linf)
          << "\n";
    }

    json doc;
    json rows = json::array();
    for (const SweepRow& row : result.rows) {
      rows.push_back({{"m0_over_8pi", row.m0_over_8pi},
                      {"outcome", row.outcome},
                      {"t_final", row.t_final},
                      {"peak_linf", row.peak_linf},
                      {"dir", row.dir},
                      {"error", row.error}});
    }
    doc["rows"] = rows;
    result.index_path = out_dir + "/index.json";
    std::ofstream idx(result.index_path);
    idx << doc.dump(2) << "\n";
  }

  return result;
}

CertifyReport certify_report(const ModelParams& params, double m0,
                             const SearchConfig& search) {
  CertifyReport report;
  const HypothesisReport hyp = check_blowup_hypotheses(params);
  if (!hyp.pass) {
    report.status = CertifyReport::Status::Refused;
    report.text = "refused: model hypotheses fail\n" + hyp.render();
    return report;
  }

  const CertificateSearch found = select_blowup_parameters(m0, params, search);
  if (!found.certificate) {
    report.status = CertifyReport::Status::None;
    report.text = "none: " + found.diagnostic + "\n";
    return report;
  }

  const Certificate& c = *found.certificate;
  report.status = CertifyReport::Status::Found;
  report.certificate = c;

  const OdiCoefficients& k = c.coeffs;
  const double eps_phi = (c.epsilon / 3.0) * k.phi0;
  const double one_eps_phi = (1.0 - c.epsilon) * k.phi0;
  std::ostringstream out;
  out << "certificate: " << found.diagnostic << "\n\n";
  out << serialize(c);
  out << "\nthreshold chain\n";
  out << "  (1-eps)^2 f        = "
      << format_double((1.0 - c.epsilon) * (1.0 - c.epsilon) * c.f_value)
      << "  >= 1\n";
  out << "  (eps/3) phi0       = " << format_double(eps_phi)
      << "  >= c2/c1       = " << format_double(k.c2 / k.c1) << "\n";
  out << "  ((eps/3) phi0)^2   = " << format_double(eps_phi * eps_phi)
      << "  >= c31/c1      = " << format_double(k.c31 / k.c1) << "\n";
  out << "  ((1-eps) phi0)^2   = " << format_double(one_eps_phi * one_eps_phi)
      << "  >= c32/c1      = " << format_double(k.c32 / k.c1) << "\n";
  out << "  (eps/3) phi0       = " << format_double(eps_phi)
      << "  >= 2/(c1 T)    = " << format_double(2.0 / (k.c1 * c.T_tilde))
      << "\n";
  out << "  phi0               = " << format_double(k.phi0)
      << "  >= threshold   = " << format_double(c.threshold) << "\n";
  out << "\ninitial data requirements\n";
  out << "  total mass            m0      = " << format_double(c.m0) << "\n";
  out << "  concentrated mass     m_tilde = " << format_double(c.m_tilde)
      << "\n";
  out << "  inside radius    min(r1, r1_alt) = "
      << format_double(std::min(c.r1, c.r1_alt)) << "\n";
  out << "    r1     = (lambda s0)^2 = " << format_double(c.r1) << "\n";
  out << "    r1_alt = sqrt(lambda s0) = " << format_double(c.r1_alt) << "\n";
  report.text = out.str();
  return report;
}

}  // namespace kslab
