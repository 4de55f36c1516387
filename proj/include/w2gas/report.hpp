// Verification bookkeeping: one row per check, a report per suite run, and
// the CSV/console emitters. An inequality row passes when
// measured <= bound + slack; an equality row passes when
// |measured - bound| <= slack.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace w2gas {

struct CheckRow {
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  double slack = 0.0;
  bool equality = false;
  bool pass = false;
};

CheckRow inequality_check(std::string name, double measured, double bound,
                          double slack);
CheckRow equality_check(std::string name, double measured, double target,
                        double tol);

struct VerificationReport {
  std::string suite;
  std::uint64_t master_seed = 0;
  std::vector<CheckRow> rows;

  bool all_pass() const;
};

// Columns: name,bound,measured,slack,pass. A single leading comment line
// records the master seed. Values are formatted with 17 significant digits
// so reruns compare byte for byte.
void write_report_csv(std::ostream& out, const VerificationReport& report);

// Console rendering: one aligned line per row plus a final verdict.
void print_report(std::ostream& out, const VerificationReport& report);

}  // namespace w2gas
