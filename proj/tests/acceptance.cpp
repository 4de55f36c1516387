// Acceptance gate: one timed line per criterion. Each criterion calls the
// same check blocks the verification suites use, with the master seed and
// every tolerance pinned here. The last criterion drives the command-line
// binary end to end and byte-compares its reports. Exit status is the number
// of failed criteria.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "w2gas/report.hpp"
#include "w2gas/suites.hpp"

namespace {

constexpr std::uint64_t kMasterSeed = 20260815;

int g_failures = 0;

std::string failed_rows(const std::vector<w2gas::CheckRow>& rows) {
  std::string out;
  int shown = 0;
  for (const auto& r : rows)
    if (!r.pass) {
      if (shown == 3) {
        out += " ...";
        break;
      }
      out += (shown ? ", " : "") + r.name + " (measured " +
             std::to_string(r.measured) + " vs bound " +
             std::to_string(r.bound) + " + slack " + std::to_string(r.slack) +
             ")";
      ++shown;
    }
  return out;
}

// budget_s <= 0 means the criterion carries no time cap.
template <class Body>
void criterion(int id, const char* text, double budget_s, Body&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = false;
  try {
    ok = body(note);
  } catch (const std::exception& ex) {
    note = std::string("exception: ") + ex.what();
  }
  const double dt =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  const bool in_budget = budget_s <= 0.0 || dt <= budget_s;
  const bool pass = ok && in_budget;
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %2d: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL",
              id, text, dt, in_budget ? "" : ", over budget");
  if (!pass && !note.empty()) std::printf("        %s\n", note.c_str());
  std::fflush(stdout);
}

bool rows_pass(std::vector<w2gas::CheckRow> rows, std::string& note) {
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.pass;
  if (!ok) note = failed_rows(rows);
  return ok;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return in ? ss.str() : std::string();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::string config = argc > 2 ? argv[2] : "";

  std::printf("acceptance gate, master seed %llu\n",
              static_cast<unsigned long long>(kMasterSeed));

  criterion(1, "closed-form constants (factors, rates, quartic drift)", 1.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::analytic_constants(kMasterSeed),
                               note);
            });

  criterion(2, "transport engine exactness (oracle, sorted, scaling, marginals)",
            30.0, [](std::string& note) {
              return rows_pass(w2gas::checks::ot_exactness(kMasterSeed), note);
            });

  criterion(3, "sphere and circle distance bounds, exact and sampled", 0.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::sphere_circle(kMasterSeed), note);
            });

  criterion(4, "one-step gain contraction across restitution values", 120.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::gain_contraction(kMasterSeed),
                               note);
            });

  criterion(5, "temperature decay in both clocks and the clock round trip",
            120.0, [](std::string& note) {
              return rows_pass(w2gas::checks::temperature_laws(kMasterSeed),
                               note);
            });

  criterion(6, "distance contraction along the cooling flow", 180.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::flow_contraction(kMasterSeed),
                               note);
            });

  criterion(7, "heated gas: pair bound and steady temperatures", 180.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::diffusive_laws(kMasterSeed),
                               note);
            });

  criterion(8, "one-dimensional relaxation rates", 60.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::kac_relaxation(kMasterSeed),
                               note);
            });

  criterion(9, "quartic moment against its closed flow, bounded throughout",
            180.0, [](std::string& note) {
              return rows_pass(w2gas::checks::moment_ode(kMasterSeed), note);
            });

  criterion(10, "rescaled flow settles into the sampling noise floor", 300.0,
            [](std::string& note) {
              return rows_pass(w2gas::checks::cooling_convergence(kMasterSeed),
                               note);
            });

  criterion(11, "repeated full verification is byte-identical", 0.0,
            [&](std::string& note) {
              if (cli.empty() || config.empty()) {
                note = "usage: acceptance <cli-binary> <config>";
                return false;
              }
              namespace fs = std::filesystem;
              const std::string dirs[2] = {"acceptance_rep_a",
                                           "acceptance_rep_b"};
              for (const auto& d : dirs) {
                fs::remove_all(d);
                fs::create_directories(d);
              }
              for (const auto& d : dirs) {
                const std::string cmd = "W2GAS_OUTDIR=" + d + " \"" + cli +
                                        "\" verify all \"" + config + "\" > " +
                                        d + "/stdout.log 2>&1";
                const auto t0 = std::chrono::steady_clock::now();
                const int rc = std::system(cmd.c_str());
                const double dt = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - t0)
                                      .count();
                if (rc != 0) {
                  note = "verify all failed in " + d + " (see stdout.log)";
                  return false;
                }
                if (dt > 900.0) {
                  note = "verify all took " + std::to_string(dt) +
                         " s, over its 900 s budget";
                  return false;
                }
              }
              const std::string rep_a = slurp(dirs[0] + "/verify_report.csv");
              const std::string rep_b = slurp(dirs[1] + "/verify_report.csv");
              if (rep_a.empty()) {
                note = "missing report CSV";
                return false;
              }
              if (rep_a != rep_b) {
                note = "report CSVs differ between identical runs";
                return false;
              }
              return true;
            });

  std::printf("acceptance: %d/11 criteria passed\n", 11 - g_failures);
  return g_failures;
}
