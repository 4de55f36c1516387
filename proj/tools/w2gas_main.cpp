// Command-line front end: configured simulation runs, verification suites
// with auditable reports, exact transport distances between stored
// snapshots, and the closed-form constant table.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "w2gas/collision.hpp"
#include "w2gas/config.hpp"
#include "w2gas/dynamics.hpp"
#include "w2gas/io_util.hpp"
#include "w2gas/moments.hpp"
#include "w2gas/report.hpp"
#include "w2gas/snapshot.hpp"
#include "w2gas/suites.hpp"
#include "w2gas/timeseries.hpp"
#include "w2gas/transport.hpp"

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  return dir + "/" + file;
}

int cmd_simulate(const std::string& config_path) {
  const w2gas::SimConfig cfg = w2gas::parse_config(config_path);
  std::size_t records = 0;
  if (cfg.ic_b) {
    const w2gas::PairedRun run = w2gas::run_paired(cfg);
    w2gas::emit_paired_outputs(cfg, run);
    records = run.records.size();
    if (!run.records.empty()) {
      const w2gas::PairedRecord& last = run.records.back();
      std::printf("final: tau=%s w2=%s bound=%s slack=%s\n",
                  w2gas::fmt_g17(last.tau).c_str(),
                  w2gas::fmt_g17(last.w2).c_str(),
                  w2gas::fmt_g17(last.bound).c_str(),
                  w2gas::fmt_g17(last.slack).c_str());
    }
  } else {
    const w2gas::SingleRun run = w2gas::run_single(cfg);
    w2gas::emit_single_outputs(cfg, run);
    records = run.records.size();
    if (!run.records.empty()) {
      const w2gas::SingleRecord& last = run.records.back();
      std::printf("final: tau=%s theta=%s m4=%s\n",
                  w2gas::fmt_g17(last.tau).c_str(),
                  w2gas::fmt_g17(last.theta).c_str(),
                  w2gas::fmt_g17(last.m4).c_str());
    }
  }
  std::printf("run %s: %zu records\n", cfg.name.c_str(), records);
  if (!cfg.outputs.csv.empty())
    std::printf("csv: %s\n", join_path(cfg.outputs.dir, cfg.outputs.csv).c_str());
  if (!cfg.outputs.svg.empty())
    std::printf("svg: %s\n", join_path(cfg.outputs.dir, cfg.outputs.svg).c_str());
  if (!cfg.outputs.snapshot.empty())
    std::printf("snapshot: %s\n",
                join_path(cfg.outputs.dir, cfg.outputs.snapshot).c_str());
  return 0;
}

int cmd_verify(const std::string& suite, const std::string& config_path) {
  const w2gas::SimConfig cfg = w2gas::parse_config(config_path);
  const w2gas::VerificationReport report = w2gas::run_suite(suite, cfg);
  w2gas::print_report(std::cout, report);
  if (!cfg.outputs.report_csv.empty()) {
    const std::string path = join_path(cfg.outputs.dir, cfg.outputs.report_csv);
    w2gas::atomic_write(path,
                        [&](std::ostream& out) { w2gas::write_report_csv(out, report); });
    std::printf("report: %s\n", path.c_str());
  }
  return report.all_pass() ? 0 : 1;
}

int cmd_w2(const std::string& path_a, const std::string& path_b) {
  const w2gas::Snapshot a = w2gas::load_snapshot(path_a);
  const w2gas::Snapshot b = w2gas::load_snapshot(path_b);
  if (a.ens.dim() != b.ens.dim())
    throw std::invalid_argument("snapshots have different dimensions");

  double dist = 0.0;
  if (a.ens.size() == b.ens.size()) {
    if (a.ens.dim() == 1) {
      dist = w2gas::w2_exact_1d(a.ens.v.row(0).transpose(),
                                b.ens.v.row(0).transpose());
    } else {
      if (a.ens.size() > w2gas::kAssignmentCap)
        throw std::invalid_argument(
            "snapshots exceed the assignment solver cap of " +
            std::to_string(w2gas::kAssignmentCap) + " points");
      dist = w2gas::w2_exact_assignment(a.ens.v, b.ens.v).distance;
    }
  } else {
    if (a.ens.size() > w2gas::kLpCap || b.ens.size() > w2gas::kLpCap)
      throw std::invalid_argument(
          "snapshots of unequal size are compared through the weighted "
          "solver, which allows at most " +
          std::to_string(w2gas::kLpCap) + " points per side");
    dist = w2gas::w2_discrete_lp(w2gas::DiscreteMeasure::uniform(a.ens.v),
                                 w2gas::DiscreteMeasure::uniform(b.ens.v))
               .distance;
  }
  std::printf("%s\n", w2gas::fmt_g17(dist).c_str());
  return 0;
}

int cmd_coeffs(double e, double p) {
  const w2gas::FourthMomentCoefficients c = w2gas::fourth_moment_coefficients(e);
  const double rate = 8.0 / (1.0 - e * e);  // inf at e = 1
  std::printf("e = %s\n", w2gas::fmt_g17(e).c_str());
  std::printf("scaled-collision-rate = %s\n", w2gas::fmt_g17(rate).c_str());
  std::printf("gain-factor = %s\n",
              w2gas::fmt_g17(w2gas::contraction_factor_gain(e)).c_str());
  std::printf("quartic-lambda = %s\n", w2gas::fmt_g17(c.lambda).c_str());
  std::printf("quartic-mu1 = %s\n", w2gas::fmt_g17(c.mu1).c_str());
  std::printf("quartic-mu2 = %s\n", w2gas::fmt_g17(c.mu2).c_str());
  std::printf("kac-beta(p=%s) = %s\n", w2gas::fmt_g17(p).c_str(),
              w2gas::fmt_g17(w2gas::kac_rate(p)).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "inelastic Maxwell gas simulator with an exact transport-distance "
      "engine"};
  app.require_subcommand(1);

  std::string sim_config;
  CLI::App* sim = app.add_subcommand(
      "simulate", "run one configured simulation and write its outputs");
  sim->add_option("config", sim_config, "configuration file")->required();

  std::string suite, verify_config;
  CLI::App* ver = app.add_subcommand(
      "verify", "run a verification suite and write its report");
  std::string suite_help = "suite name:";
  for (const std::string& n : w2gas::suite_names()) suite_help += " " + n;
  ver->add_option("suite", suite, suite_help)->required();
  ver->add_option("config", verify_config, "configuration file")->required();

  std::string snap_a, snap_b;
  CLI::App* w2c = app.add_subcommand(
      "w2", "exact transport distance between two snapshot files");
  w2c->add_option("a", snap_a, "first snapshot")->required();
  w2c->add_option("b", snap_b, "second snapshot")->required();

  double e = 0.5, p = 1.0;
  CLI::App* co = app.add_subcommand(
      "coeffs", "closed-form constants for a restitution value");
  co->add_option("--e", e, "restitution in (0, 1]")->required();
  co->add_option("--p", p, "one-dimensional kernel exponent (default 1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(sim_config);
    if (ver->parsed()) return cmd_verify(suite, verify_config);
    if (w2c->parsed()) return cmd_w2(snap_a, snap_b);
    if (co->parsed()) return cmd_coeffs(e, p);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
