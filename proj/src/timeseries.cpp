#include "w2gas/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "w2gas/io_util.hpp"
#include "w2gas/snapshot.hpp"

namespace w2gas {

namespace {

std::string join_dir(const std::string& dir, const std::string& file) {
  std::filesystem::path p(file);
  if (p.is_absolute() || dir.empty()) return file;
  return (std::filesystem::path(dir) / p).string();
}

std::string with_suffix(const std::string& file, const char* tag) {
  std::filesystem::path p(file);
  const std::string ext = p.extension().string();
  p.replace_extension();
  return p.string() + tag + ext;
}

std::string fmt_coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void polyline(std::ostream& out, const std::vector<double>& xs,
              const std::vector<double>& ys, const std::string& color,
              double x0, double x1, double y0, double y1) {
  // Chart area 60..620 x 20..380, y grows downward.
  const double xs_span = std::max(x1 - x0, 1e-300);
  const double ys_span = std::max(y1 - y0, 1e-300);
  out << "<polyline fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (k) out << ' ';
    const double px = 60.0 + 560.0 * (xs[k] - x0) / xs_span;
    const double py = 380.0 - 360.0 * (ys[k] - y0) / ys_span;
    out << fmt_coord(px) << ',' << fmt_coord(py);
  }
  out << "\"/>\n";
}

}  // namespace

void write_paired_csv(std::ostream& out,
                      const std::vector<PairedRecord>& recs) {
  out << "tau,w2,bound,theta_a,theta_b,m4_a,m4_b\n";
  for (const PairedRecord& r : recs) {
    out << fmt_g17(r.tau) << ',' << fmt_g17(r.w2) << ',' << fmt_g17(r.bound)
        << ',' << fmt_g17(r.theta_a) << ',' << fmt_g17(r.theta_b) << ','
        << fmt_g17(r.m4_a) << ',' << fmt_g17(r.m4_b) << '\n';
  }
}

void write_single_csv(std::ostream& out, const std::vector<SingleRecord>& recs,
                      int d) {
  out << "tau,t,theta,m2,m4";
  if (d == 1) {
    out << ",mean";
  } else {
    const char* names[] = {",mean_x", ",mean_y", ",mean_z"};
    for (int r = 0; r < d; ++r) out << names[r];
  }
  out << '\n';
  for (const SingleRecord& r : recs) {
    out << fmt_g17(r.tau) << ',' << fmt_g17(r.t) << ',' << fmt_g17(r.theta)
        << ',' << fmt_g17(r.m2) << ',' << fmt_g17(r.m4);
    for (int c = 0; c < d; ++c) out << ',' << fmt_g17(r.mean[c]);
    out << '\n';
  }
}

void write_svg_chart(std::ostream& out, const std::vector<double>& tau,
                     const Curve& a, const Curve& b) {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!tau.empty()) {
    x0 = *std::min_element(tau.begin(), tau.end());
    x1 = *std::max_element(tau.begin(), tau.end());
    y0 = y1 = a.values.empty() ? 0.0 : a.values.front();
    for (const double v : a.values) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
    for (const double v : b.values) {
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (x1 <= x0) x1 = x0 + 1.0;
  if (y1 <= y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"420\" viewBox=\"0 0 640 420\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"420\" fill=\"white\"/>\n"
      << "<line x1=\"60\" y1=\"380\" x2=\"620\" y2=\"380\" stroke=\"black\"/>\n"
      << "<line x1=\"60\" y1=\"20\" x2=\"60\" y2=\"380\" stroke=\"black\"/>\n"
      << "<text x=\"340\" y=\"408\" font-size=\"12\" "
         "text-anchor=\"middle\">tau (" << fmt_coord(x0) << " to "
      << fmt_coord(x1) << ")</text>\n"
      << "<text x=\"16\" y=\"200\" font-size=\"12\" transform=\"rotate(-90 16 "
         "200)\" text-anchor=\"middle\">value (" << fmt_coord(y0) << " to "
      << fmt_coord(y1) << ")</text>\n";
  polyline(out, tau, a.values, a.color, x0, x1, y0, y1);
  polyline(out, tau, b.values, b.color, x0, x1, y0, y1);
  out << "<text x=\"470\" y=\"36\" font-size=\"12\" fill=\"" << a.color
      << "\">" << a.label << "</text>\n"
      << "<text x=\"470\" y=\"52\" font-size=\"12\" fill=\"" << b.color
      << "\">" << b.label << "</text>\n"
      << "</svg>\n";
}

void write_paired_svg(std::ostream& out,
                      const std::vector<PairedRecord>& recs) {
  std::vector<double> tau;
  Curve w2{"w2", "#1f77b4", {}};
  Curve bound{"bound", "#d62728", {}};
  for (const PairedRecord& r : recs) {
    tau.push_back(r.tau);
    w2.values.push_back(r.w2);
    bound.values.push_back(r.bound);
  }
  write_svg_chart(out, tau, w2, bound);
}

void write_single_svg(std::ostream& out, const std::vector<SingleRecord>& recs,
                      const SimConfig& cfg) {
  std::vector<double> tau;
  Curve theta{"theta", "#1f77b4", {}};
  Curve ref{"reference", "#d62728", {}};
  const double tau0 = recs.empty() ? 0.0 : recs.front().tau;
  const double th0 = recs.empty() ? 0.0 : recs.front().theta;
  for (const SingleRecord& r : recs) {
    tau.push_back(r.tau);
    theta.values.push_back(r.theta);
    const double dt = r.tau - tau0;
    double guide = th0;
    switch (cfg.family) {
      case Family::homogeneous:
        guide = th0 * std::exp(-2.0 * dt);
        break;
      case Family::diffusive:
        guide = std::pow(8.0 * cfg.model.a_heat /
                             (cfg.model.b_rate *
                              (1.0 - cfg.model.e * cfg.model.e)),
                         2.0 / (3.0 - 2.0 * cfg.model.p_diff));
        break;
      case Family::selfsimilar:
        guide = 1.0;
        break;
      case Family::kac:
        guide = th0 * std::exp(-2.0 * kac_rate(cfg.kac.p) * dt);
        break;
      case Family::unit_rate:
        // Mean-field energy decay of a centered gas under the stored kernel.
        guide = th0 * std::exp(-0.25 * (1.0 - cfg.model.e * cfg.model.e) *
                               (1.0 - cfg.xs.mean_cos()) * dt);
        break;
    }
    ref.values.push_back(guide);
  }
  write_svg_chart(out, tau, theta, ref);
}

void emit_paired_outputs(const SimConfig& cfg, const PairedRun& run) {
  const OutputSpec& o = cfg.outputs;
  if (!o.csv.empty()) {
    atomic_write(join_dir(o.dir, o.csv),
                 [&](std::ostream& out) { write_paired_csv(out, run.records); });
  }
  if (!o.svg.empty()) {
    atomic_write(join_dir(o.dir, o.svg),
                 [&](std::ostream& out) { write_paired_svg(out, run.records); });
  }
  if (!o.snapshot.empty()) {
    save_snapshot(join_dir(o.dir, with_suffix(o.snapshot, "_a")), run.final_a,
                  cfg.seed);
    save_snapshot(join_dir(o.dir, with_suffix(o.snapshot, "_b")), run.final_b,
                  cfg.seed);
  }
}

void emit_single_outputs(const SimConfig& cfg, const SingleRun& run) {
  const OutputSpec& o = cfg.outputs;
  if (!o.csv.empty()) {
    atomic_write(join_dir(o.dir, o.csv), [&](std::ostream& out) {
      write_single_csv(out, run.records, cfg.d);
    });
  }
  if (!o.svg.empty()) {
    atomic_write(join_dir(o.dir, o.svg), [&](std::ostream& out) {
      write_single_svg(out, run.records, cfg);
    });
  }
  if (!o.snapshot.empty())
    save_snapshot(join_dir(o.dir, o.snapshot), run.final_state, cfg.seed);
}

}  // namespace w2gas
