// CSV and SVG emitters for recorded runs. Schemas are fixed:
//   paired CSV: tau,w2,bound,theta_a,theta_b,m4_a,m4_b
//   single CSV: tau,t,theta,m2,m4,mean... (one mean column per component)
// Empty record lists produce a header-only CSV. The SVG plot is a
// self-contained two-polyline chart (value and reference against tau).
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "w2gas/dynamics.hpp"

namespace w2gas {

void write_paired_csv(std::ostream& out, const std::vector<PairedRecord>& recs);
void write_single_csv(std::ostream& out, const std::vector<SingleRecord>& recs,
                      int d);

// One named curve of the chart; both polylines share the tau axis.
struct Curve {
  std::string label;
  std::string color;
  std::vector<double> values;
};

void write_svg_chart(std::ostream& out, const std::vector<double>& tau,
                     const Curve& a, const Curve& b);

// Convenience wrappers: curves are (w2, bound) for paired runs and
// (theta, reference) for single runs, with the per-family reference law.
void write_paired_svg(std::ostream& out, const std::vector<PairedRecord>& recs);
void write_single_svg(std::ostream& out, const std::vector<SingleRecord>& recs,
                      const SimConfig& cfg);

// Atomic to-disk variants; parent directories are created on demand.
void emit_paired_outputs(const SimConfig& cfg, const PairedRun& run);
void emit_single_outputs(const SimConfig& cfg, const SingleRun& run);

}  // namespace w2gas
