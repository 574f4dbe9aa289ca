#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kslab/certificate.hpp"
#include "kslab/config.hpp"
#include "kslab/model.hpp"
#include "kslab/monitors.hpp"
#include "kslab/stepping.hpp"

namespace kslab {

struct DetectionPolicy {
  double linf_factor = 1e6;
  int window = 10;
};

// Blow-up proxy: the density has grown past linf_factor * max(1, ||u0||inf),
// or the step size sat at dt_min for the last `window` accepted steps while
// the density kept growing. Never "proved", only detected.
bool detect_blowup(double linf, double linf0, const StepHistory& history,
                   const DetectionPolicy& policy = {});

struct MonitorTotals {
  std::string name;
  std::size_t checked = 0;
  std::size_t passed = 0;
  double worst_margin = 0.0;  // min of margin over absorbed reports
};

struct MonitorSummary {
  std::vector<MonitorTotals> totals;

  void absorb(const MonitorReport& report);
  const MonitorTotals* find(const std::string& name) const;
  bool all_pass() const;
  std::string render() const;
};

struct SnapshotMonitors {
  double t = 0.0;
  std::vector<MonitorReport> reports;
};

// Artifacts of one solver leg inside an experiment.
struct SolverRun {
  std::string solver;   // "primitive" or "mass"
  std::string outcome;  // "completed", "blowup_detected", "numerical_failure"
  std::string detail;
  double t_final = 0.0;
  double peak_linf = 0.0;
  std::uint64_t steps_accepted = 0;
  std::uint64_t steps_rejected = 0;
  std::vector<Snapshot> snapshots;
  std::vector<SnapshotMonitors> snapshot_monitors;  // aligned with snapshots
  // Totals over pre-detection snapshots (the final snapshot of a
  // blowup_detected leg is the collapse state and is reported per-snapshot
  // only). The one-off supersolution residual check is absorbed here too.
  MonitorSummary monitors;
  std::string series_path;  // empty when out_dir was empty
};

struct RunResult {
  std::string outcome;  // agreement over legs; disagreement degrades to
                        // "numerical_failure"
  double t_final = 0.0;
  double peak_linf = 0.0;
  std::optional<Certificate> certificate;
  std::string certificate_diagnostic;
  double r1_requested = 0.0;  // nan when no bump was requested
  double r1_effective = 0.0;
  double m_tilde = 0.0;
  HypothesisReport blowup_hypotheses;
  HypothesisReport global_hypotheses;
  std::vector<SolverRun> runs;
  double cross_solver_linf_rel = 0.0;  // nan unless solver = both
  std::string result_path;             // result.json, empty if not written
  std::string config_echo;             // canonical config snapshot
};

// Orchestrates one experiment: hypotheses recorded, grid and initial data
// built (certificate-driven when enabled and found), solver legs run with
// blow-up detection, monitors evaluated at every snapshot, CSV series and
// result.json written under out_dir. Pass out_dir = "" to skip all file
// output (results stay in memory).
RunResult run_experiment(const RunConfig& cfg, const std::string& out_dir);

struct SweepRow {
  double m0_over_8pi = 0.0;
  std::string outcome;  // per-run outcome, or "error"
  double t_final = 0.0;
  double peak_linf = 0.0;
  std::string dir;
  std::string error;  // exception text when outcome = "error"
};

struct SweepResult {
  std::vector<SweepRow> rows;  // input order
  std::string summary_path;    // summary.csv
  std::string index_path;      // index.json
};

// Independent runs of the base config at each mass, executed on a small
// thread pool (capped by KSLAB_THREADS). A failure in one run never
// disturbs the others.
SweepResult sweep_mass(const RunConfig& base, const std::vector<double>& m0_over_8pi,
                       const std::string& out_dir);

// Number of worker threads a sweep may use.
unsigned sweep_thread_cap();

// Human-readable certificate report: all fields, the coefficient values, the
// threshold chain, and what the initial data must satisfy. Refuses when the
// model hypotheses fail, reports "none" when the search is exhausted.
struct CertifyReport {
  enum class Status { Found, None, Refused };
  Status status = Status::None;
  std::string text;
  std::optional<Certificate> certificate;
};

CertifyReport certify_report(const ModelParams& params, double m0,
                             const SearchConfig& search = {});

// Pinned CSV schema shared by every series file.
extern const char* const kSeriesHeader;

}  // namespace kslab
