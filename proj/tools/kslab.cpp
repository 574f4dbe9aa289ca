// Command line front end: check / run / sweep / certify.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kslab/config.hpp"
#include "kslab/errors.hpp"
#include "kslab/harness.hpp"
#include "kslab/numerics.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::string solver;
  long grid = 0;
  double t_end = -1.0;
};

void add_common(CLI::App* cmd, CommonArgs* args, bool with_out) {
  cmd->add_option("--config", args->config_path, "Config file (JSON)")
      ->check(CLI::ExistingFile);
  if (with_out) {
    cmd->add_option("--out", args->out_dir, "Output directory");
  }
  cmd->add_option("--solver", args->solver, "Solver: primitive, mass or both")
      ->check(CLI::IsMember({"primitive", "mass", "both"}));
  cmd->add_option("--grid", args->grid, "Grid cells (>= 64)");
  cmd->add_option("--t-end", args->t_end, "Final time");
}

kslab::RunConfig build_config(const CommonArgs& args) {
  kslab::RunConfig cfg = args.config_path.empty()
                             ? kslab::default_config()
                             : kslab::load_config(args.config_path);
  if (!args.solver.empty()) cfg.run.solver = kslab::solver_from_string(args.solver);
  if (args.grid != 0) {
    if (args.grid < 64) throw kslab::ConfigError("--grid must be >= 64");
    cfg.grid.n = static_cast<std::size_t>(args.grid);
  }
  if (args.t_end >= 0.0) cfg.run.t_end = args.t_end;
  return cfg;
}

int cmd_check(const CommonArgs& args) {
  kslab::RunConfig cfg = build_config(args);
  kslab::HypothesisReport blowup = kslab::check_blowup_hypotheses(cfg.model);
  kslab::HypothesisReport global = kslab::check_global_hypotheses(cfg.model);
  std::printf("config: valid\n\n");
  std::printf("blow-up regime hypotheses: %s\n%s\n",
              blowup.pass ? "pass" : "fail", blowup.render().c_str());
  std::printf("global regime hypotheses: %s\n%s",
              global.pass ? "pass" : "fail", global.render().c_str());
  if (blowup.pass || global.pass) return 0;
  return 2;
}

int cmd_run(const CommonArgs& args) {
  kslab::RunConfig cfg = build_config(args);
  kslab::RunResult result = kslab::run_experiment(cfg, args.out_dir);
  std::printf("outcome:    %s\n", result.outcome.c_str());
  std::printf("t_final:    %s\n", kslab::format_double(result.t_final).c_str());
  std::printf("peak_linf:  %s\n", kslab::format_double(result.peak_linf).c_str());
  if (result.certificate) {
    std::printf("certificate: %s\n", result.certificate_diagnostic.c_str());
  } else if (!result.certificate_diagnostic.empty()) {
    std::printf("certificate: %s\n", result.certificate_diagnostic.c_str());
  }
  for (const kslab::SolverRun& run : result.runs) {
    std::printf("\n[%s] %s (%s)\n  steps %llu accepted / %llu rejected\n",
                run.solver.c_str(), run.outcome.c_str(), run.detail.c_str(),
                static_cast<unsigned long long>(run.steps_accepted),
                static_cast<unsigned long long>(run.steps_rejected));
    std::printf("%s", run.monitors.render().c_str());
    if (!run.series_path.empty()) {
      std::printf("  series: %s\n", run.series_path.c_str());
    }
  }
  if (result.runs.size() == 2) {
    std::printf("\ncross-solver linf relative difference: %s\n",
                kslab::format_double(result.cross_solver_linf_rel).c_str());
  }
  if (!result.result_path.empty()) {
    std::printf("\nresult: %s\n", result.result_path.c_str());
  }
  if (result.outcome == "numerical_failure") return 2;
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::vector<double>& masses) {
  kslab::RunConfig cfg = build_config(args);
  kslab::SweepResult sweep = kslab::sweep_mass(cfg, masses, args.out_dir);
  std::printf("%-14s %-18s %-24s %s\n", "m0/8pi", "outcome", "t_final",
              "peak_linf");
  for (const kslab::SweepRow& row : sweep.rows) {
    std::printf("%-14g %-18s %-24s %s\n", row.m0_over_8pi, row.outcome.c_str(),
                kslab::format_double(row.t_final).c_str(),
                kslab::format_double(row.peak_linf).c_str());
    if (!row.error.empty()) std::printf("    error: %s\n", row.error.c_str());
  }
  if (!sweep.summary_path.empty()) {
    std::printf("\nsummary: %s\nindex:   %s\n", sweep.summary_path.c_str(),
                sweep.index_path.c_str());
  }
  return 0;
}

int cmd_certify(const CommonArgs& args, double m0_over_8pi) {
  kslab::RunConfig cfg = build_config(args);
  double over = m0_over_8pi > 0.0 ? m0_over_8pi : cfg.init.m0_over_8pi;
  const double m0 = over * 8.0 * 3.14159265358979323846;
  kslab::SearchConfig search;
  search.T_tilde = cfg.certificate.T_tilde;
  kslab::CertifyReport report = kslab::certify_report(cfg.model, m0, search);
  std::printf("%s", report.text.c_str());
  return report.status == kslab::CertifyReport::Status::Found ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial chemotaxis laboratory: dichotomy runs, mass sweeps and "
               "blow-up certificates"};
  app.require_subcommand(1);

  CommonArgs check_args, run_args, sweep_args, certify_args;
  std::vector<double> masses = {0.5, 0.9, 1.25, 2.0};
  double m0_over_8pi = 0.0;

  CLI::App* check = app.add_subcommand("check", "Validate config and model hypotheses");
  add_common(check, &check_args, false);

  CLI::App* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, &run_args, true);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a mass sweep");
  add_common(sweep, &sweep_args, true);
  sweep->add_option("--masses", masses,
                    "Masses in units of 8 pi (default 0.5 0.9 1.25 2.0)");

  CLI::App* certify = app.add_subcommand("certify", "Search a blow-up certificate");
  add_common(certify, &certify_args, false);
  certify->add_option("--m0-over-8pi", m0_over_8pi,
                      "Mass in units of 8 pi (default: init.m0_over_8pi)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(check_args);
    if (run->parsed()) return cmd_run(run_args);
    if (sweep->parsed()) return cmd_sweep(sweep_args, masses);
    if (certify->parsed()) return cmd_certify(certify_args, m0_over_8pi);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
