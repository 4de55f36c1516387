#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "w2gas/config.hpp"
#include "w2gas/dynamics.hpp"
#include "w2gas/report.hpp"
#include "w2gas/suites.hpp"
#include "w2gas/timeseries.hpp"

using namespace w2gas;

namespace {

std::string write_cfg(const std::string& tag, const std::string& text) {
  const std::string path = "tmp_cfg_" + tag + ".cfg";
  std::ofstream out(path);
  out << text;
  return path;
}

const char* kMinimal = R"cfg([run]
name = demo
family = homogeneous
seed = 9
n = 64
dtau = 0.005
tau_end = 1.0
record_every = 0.5

[model]
e = 0.5
b_rate = 1.0

[ic]
kind = gaussian
theta0 = 1.0
mean = 0 0 0
)cfg";

}  // namespace

TEST_CASE("config: minimal file fills only output defaults") {
  unsetenv("W2GAS_OUTDIR");
  const SimConfig cfg = parse_config(write_cfg("minimal", kMinimal));
  CHECK(cfg.name == "demo");
  CHECK(cfg.family == Family::homogeneous);
  CHECK(cfg.seed == 9);
  CHECK(cfg.n == 64);
  CHECK(cfg.d == 3);  // derived from the family, not silently defaulted
  CHECK(cfg.dtau == 0.005);
  CHECK(cfg.tau_end == 1.0);
  CHECK(cfg.record_every == 0.5);
  CHECK(cfg.replica_slack);
  CHECK(!cfg.ic_b);
  CHECK(!cfg.schedule);
  CHECK(cfg.outputs.dir == ".");
  CHECK(cfg.outputs.csv == "demo.csv");
  CHECK(cfg.outputs.svg.empty());
  CHECK(cfg.outputs.snapshot.empty());
  CHECK(cfg.outputs.report_csv == "demo_report.csv");
}

TEST_CASE("config: output dir comes from the environment when unset") {
  setenv("W2GAS_OUTDIR", "env_out", 1);
  const SimConfig cfg = parse_config(write_cfg("envdir", kMinimal));
  CHECK(cfg.outputs.dir == "env_out");
  unsetenv("W2GAS_OUTDIR");
}

TEST_CASE("config: unknown key is rejected with its name and line") {
  const std::string text = std::string("[run]\nbogus = 1\n") + (kMinimal + 6);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("unknown", text)),
                       doctest::Contains("unknown key 'bogus'"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("unknown", text)),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("config: structural errors are specific") {
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("nosec", "n = 4\n")),
                       doctest::Contains("before any [section]"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("badsec", "[warp]\nx = 1\n")),
                       doctest::Contains("unknown section 'warp'"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_config(write_cfg("dup", "[run]\nseed = 1\nseed = 2\n")),
      doctest::Contains("duplicate key 'run.seed'"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("noeq", "[run]\nseed 1\n")),
                       doctest::Contains("expected 'key = value'"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config("no_such_file.cfg"),
                       doctest::Contains("cannot open"), std::runtime_error);
}

TEST_CASE("config: physics parameters have no silent defaults") {
  // Drop model.e from the minimal file: the parser must name the missing key.
  std::string text(kMinimal);
  const auto pos = text.find("e = 0.5\n");
  text.erase(pos, 8);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("noe", text)),
                       doctest::Contains("missing required key 'model.e'"),
                       std::runtime_error);

  // Seed is required too: determinism is never implicit.
  std::string noseed(kMinimal);
  const auto spos = noseed.find("seed = 9\n");
  noseed.erase(spos, 9);
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("noseed", noseed)),
                       doctest::Contains("missing required key 'run.seed'"),
                       std::runtime_error);
}

TEST_CASE("config: family-specific keys are fenced") {
  // A thermostat parameter inside the freely cooling family.
  std::string text(kMinimal);
  text.insert(text.find("\n[ic]"), "a_heat = 1.0\n");
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("fence", text)),
                       doctest::Contains("model.a_heat"), std::runtime_error);

  // The one-dimensional family rejects the whole [model] section.
  const char* kac_bad = R"cfg([run]
name = k
family = kac
seed = 1
n = 32
dtau = 0.05
tau_end = 1.0
record_every = 0.5

[model]
e = 0.5

[kac]
p = 1.0

[ic]
kind = gaussian
theta0 = 1.0
mean = 0
)cfg";
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("kacmodel", kac_bad)),
                       doctest::Contains("[model]"), std::runtime_error);

  // A point mass has no temperature.
  std::string dirac(kMinimal);
  dirac.replace(dirac.find("kind = gaussian"), 15, "kind = dirac   ");
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("diractheta", dirac)),
                       doctest::Contains("ic.theta0"), std::runtime_error);
}

TEST_CASE("config: schedule replaces the grid and excludes it") {
  std::string text(kMinimal);
  text.replace(text.find("tau_end = 1.0\nrecord_every = 0.5\n"), 33,
               "schedule = 0 0.25 1.5\n");
  const SimConfig cfg = parse_config(write_cfg("sched", text));
  REQUIRE(cfg.schedule.has_value());
  CHECK(cfg.schedule->size() == 3);
  CHECK(cfg.tau_end == 1.5);

  std::string both(kMinimal);
  both.insert(both.find("\n[model]"), "schedule = 0 1\n");
  CHECK_THROWS_WITH_AS(parse_config(write_cfg("schedboth", both)),
                       doctest::Contains("excludes"), std::runtime_error);

  // Decreasing entries die in validation.
  std::string bad(kMinimal);
  bad.replace(bad.find("tau_end = 1.0\nrecord_every = 0.5\n"), 33,
              "schedule = 0 1 0.5\n");
  CHECK_THROWS_AS(parse_config(write_cfg("schedbad", bad)),
                  std::invalid_argument);
}

TEST_CASE("report: row semantics at the boundary") {
  CHECK(inequality_check("x", 1.0, 1.0, 0.0).pass);
  CHECK(inequality_check("x", 1.0, 0.8, 0.2).pass);
  CHECK_FALSE(inequality_check("x", 1.0 + 1e-9, 0.8, 0.2).pass);
  CHECK_FALSE(
      inequality_check("x", std::numeric_limits<double>::quiet_NaN(), 1.0, 1.0)
          .pass);
  CHECK_FALSE(
      inequality_check("x", std::numeric_limits<double>::infinity(), 1.0, 1.0)
          .pass);

  CHECK(equality_check("y", 0.9925, 1.0, 0.01).pass);
  CHECK(equality_check("y", 1.0075, 1.0, 0.01).pass);
  CHECK_FALSE(equality_check("y", 1.02, 1.0, 0.01).pass);
  CHECK_FALSE(
      equality_check("y", std::numeric_limits<double>::quiet_NaN(), 1.0, 0.5)
          .pass);
}

TEST_CASE("report: CSV bytes are canonical") {
  VerificationReport rep;
  rep.suite = "demo";
  rep.master_seed = 77;
  rep.rows.push_back(inequality_check("alpha", 0.5, 1.0, 0.0));
  rep.rows.push_back(equality_check("beta", 2.0, 1.0, 0.25));
  std::ostringstream out;
  write_report_csv(out, rep);
  CHECK(out.str() ==
        "# master_seed = 77\n"
        "name,bound,measured,slack,pass\n"
        "alpha,1,0.5,0,1\n"
        "beta,1,2,0.25,0\n");

  std::ostringstream pretty;
  print_report(pretty, rep);
  CHECK(pretty.str().find("[ok] alpha") != std::string::npos);
  CHECK(pretty.str().find("[FAIL] beta") != std::string::npos);
  CHECK(pretty.str().find("FAIL (2 checks)") != std::string::npos);
}

TEST_CASE("timeseries: paired CSV schema is exact") {
  std::vector<PairedRecord> recs(1);
  recs[0].tau = 0.5;
  recs[0].w2 = 1.25;
  recs[0].bound = 2.0;
  recs[0].slack = 0.1;
  recs[0].theta_a = 1.0;
  recs[0].theta_b = 2.0;
  recs[0].m4_a = 3.0;
  recs[0].m4_b = 4.0;
  std::ostringstream out;
  write_paired_csv(out, recs);
  CHECK(out.str() ==
        "tau,w2,bound,theta_a,theta_b,m4_a,m4_b\n"
        "0.5,1.25,2,1,2,3,4\n");

  std::ostringstream empty;
  write_paired_csv(empty, {});
  CHECK(empty.str() == "tau,w2,bound,theta_a,theta_b,m4_a,m4_b\n");
}

TEST_CASE("timeseries: single CSV names one mean column per component") {
  std::vector<SingleRecord> recs(1);
  recs[0].tau = 1.0;
  recs[0].t = 2.0;
  recs[0].theta = 0.5;
  recs[0].m2 = 1.5;
  recs[0].m4 = 3.75;
  recs[0].mean = Eigen::VectorXd::Zero(3);
  std::ostringstream out3;
  write_single_csv(out3, recs, 3);
  CHECK(out3.str() ==
        "tau,t,theta,m2,m4,mean_x,mean_y,mean_z\n"
        "1,2,0.5,1.5,3.75,0,0,0\n");

  recs[0].mean = Eigen::VectorXd::Zero(1);
  std::ostringstream out1;
  write_single_csv(out1, recs, 1);
  CHECK(out1.str() ==
        "tau,t,theta,m2,m4,mean\n"
        "1,2,0.5,1.5,3.75,0\n");
}

TEST_CASE("timeseries: SVG chart carries a preamble and two polylines") {
  std::vector<double> tau = {0.0, 0.5, 1.0};
  Curve a{"w2", "#1f77b4", {1.0, 0.7, 0.5}};
  Curve b{"bound", "#d62728", {1.0, 0.8, 0.6}};
  std::ostringstream out;
  write_svg_chart(out, tau, a, b);
  const std::string svg = out.str();
  CHECK(svg.rfind("<?xml version=\"1.0\"", 0) == 0);
  std::size_t polylines = 0, pos = 0;
  while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
    ++polylines;
    pos += 9;
  }
  CHECK(polylines == 2);
  CHECK(svg.find("#1f77b4") != std::string::npos);
  CHECK(svg.find("#d62728") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("outputs: an empty schedule yields header-only CSV files") {
  SimConfig cfg;
  cfg.name = "empty_sched";
  cfg.family = Family::homogeneous;
  cfg.seed = 4;
  cfg.n = 32;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.model.b_rate = 1.0;
  cfg.ic_a.kind = IcKind::gaussian;
  cfg.ic_a.theta0 = 1.0;
  cfg.ic_a.mean = Eigen::Vector3d::Zero();
  cfg.dtau = 0.005;
  cfg.schedule = std::vector<double>{};
  cfg.tau_end = 0.0;
  cfg.outputs.dir = "tmp_out";
  cfg.outputs.csv = "empty.csv";

  const SingleRun run = run_single(cfg);
  CHECK(run.records.empty());
  emit_single_outputs(cfg, run);
  std::ifstream in("tmp_out/empty.csv");
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "tau,t,theta,m2,m4,mean_x,mean_y,mean_z\n");
}

TEST_CASE("outputs: paired snapshots get endpoint suffixes") {
  SimConfig cfg;
  cfg.name = "pairsnap";
  cfg.family = Family::homogeneous;
  cfg.seed = 12;
  cfg.n = 64;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.model.b_rate = 1.0;
  cfg.ic_a.kind = IcKind::gaussian;
  cfg.ic_a.theta0 = 1.0;
  cfg.ic_a.mean = Eigen::Vector3d::Zero();
  cfg.ic_b = cfg.ic_a;
  cfg.ic_b->kind = IcKind::cube;
  cfg.dtau = 0.005;
  cfg.tau_end = 0.1;
  cfg.record_every = 0.1;
  cfg.outputs.dir = "tmp_out";
  cfg.outputs.csv = "";
  cfg.outputs.snapshot = "pair.snap";

  emit_paired_outputs(cfg, run_paired(cfg));
  CHECK(std::filesystem::exists("tmp_out/pair_a.snap"));
  CHECK(std::filesystem::exists("tmp_out/pair_b.snap"));
}

TEST_CASE("suites: names are fixed and unknown names are refused") {
  const auto& names = suite_names();
  CHECK(names.size() == 8);
  CHECK(known_suite("lemmas"));
  CHECK(known_suite("cross-section"));
  CHECK(known_suite("all"));
  CHECK_FALSE(known_suite("warp"));

  SimConfig cfg;
  cfg.seed = 1;
  CHECK_THROWS_WITH_AS(run_suite("warp", cfg),
                       doctest::Contains("unknown suite 'warp'"),
                       std::invalid_argument);
}

TEST_CASE("suites: a suite is a deterministic function of the seed") {
  SimConfig cfg;
  cfg.seed = 31337;
  const VerificationReport a = run_suite("lemmas", cfg);
  const VerificationReport b = run_suite("lemmas", cfg);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].name == b.rows[i].name);
    CHECK(a.rows[i].measured == b.rows[i].measured);
    CHECK(a.rows[i].bound == b.rows[i].bound);
    CHECK(a.rows[i].slack == b.rows[i].slack);
  }
  CHECK(a.all_pass());

  // A different seed moves the sampled rows but not the layout.
  SimConfig other;
  other.seed = 99991;
  const VerificationReport c = run_suite("lemmas", other);
  REQUIRE(c.rows.size() == a.rows.size());
  CHECK(c.all_pass());
}

TEST_CASE("suites: the tilted-kernel block passes end to end") {
  SimConfig cfg;
  cfg.seed = 20260815;
  const VerificationReport rep = run_suite("cross-section", cfg);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.all_pass());
}
