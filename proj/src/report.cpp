#include "w2gas/report.hpp"

#include <cmath>
#include <ostream>

#include "w2gas/io_util.hpp"

namespace w2gas {

CheckRow inequality_check(std::string name, double measured, double bound,
                          double slack) {
  CheckRow row;
  row.name = std::move(name);
  row.bound = bound;
  row.measured = measured;
  row.slack = slack;
  row.equality = false;
  row.pass = std::isfinite(measured) && measured <= bound + slack;
  return row;
}

CheckRow equality_check(std::string name, double measured, double target,
                        double tol) {
  CheckRow row;
  row.name = std::move(name);
  row.bound = target;
  row.measured = measured;
  row.slack = tol;
  row.equality = true;
  row.pass = std::isfinite(measured) && std::abs(measured - target) <= tol;
  return row;
}

bool VerificationReport::all_pass() const {
  for (const CheckRow& row : rows)
    if (!row.pass) return false;
  return true;
}

void write_report_csv(std::ostream& out, const VerificationReport& report) {
  out << "# master_seed = " << report.master_seed << "\n";
  out << "name,bound,measured,slack,pass\n";
  for (const CheckRow& row : report.rows) {
    out << row.name << ',' << fmt_g17(row.bound) << ',' << fmt_g17(row.measured)
        << ',' << fmt_g17(row.slack) << ',' << (row.pass ? "1" : "0") << '\n';
  }
}

void print_report(std::ostream& out, const VerificationReport& report) {
  out << "suite " << report.suite << " (seed " << report.master_seed << ")\n";
  for (const CheckRow& row : report.rows) {
    out << "  [" << (row.pass ? "ok" : "FAIL") << "] " << row.name
        << ": measured " << fmt_g17(row.measured)
        << (row.equality ? " == " : " <= ") << fmt_g17(row.bound);
    if (row.slack != 0.0) out << " +- " << fmt_g17(row.slack);
    out << "\n";
  }
  out << (report.all_pass() ? "PASS" : "FAIL") << " (" << report.rows.size()
      << " checks)\n";
}

}  // namespace w2gas
