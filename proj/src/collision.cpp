#include "w2gas/collision.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "w2gas/accum.hpp"
#include "w2gas/quadrature.hpp"

namespace w2gas {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

// Nodes must span [-1, 1]; h_raw holds 2*pi*b_raw at the nodes. The stored
// pdf is the piecewise-linear interpolant scaled so its exact integral is 1.
void CrossSection::build_from_nodes(std::vector<double> c,
                                    std::vector<double> h_raw,
                                    double raw_integral) {
  if (!(raw_integral > 0.0))
    throw std::invalid_argument("CrossSection: density integrates to zero");
  residual_ = std::abs(raw_integral - 1.0);

  c_ = std::move(c);
  h_ = std::move(h_raw);
  for (double& h : h_) h /= raw_integral;

  cdf_.assign(c_.size(), 0.0);
  Kahan acc;
  for (std::size_t k = 1; k < c_.size(); ++k) {
    acc.add(0.5 * (h_[k] + h_[k - 1]) * (c_[k] - c_[k - 1]));
    cdf_[k] = acc.value();
  }
  // Trapezoid is exact for the interpolant; pin the endpoint against dust.
  cdf_.back() = 1.0;

  // First moment of the interpolant, cell by cell in closed form.
  Kahan m;
  for (std::size_t k = 1; k < c_.size(); ++k) {
    const double c0 = c_[k - 1], c1 = c_[k];
    const double h0 = h_[k - 1], h1 = h_[k];
    const double dc = c1 - c0;
    // Int_{c0}^{c1} c * (h0 + (h1-h0)(c-c0)/dc) dc
    m.add(dc * (h0 * (2.0 * c0 + c1) + h1 * (c0 + 2.0 * c1)) / 6.0);
  }
  mean_cos_ = m.value();
}

CrossSection CrossSection::constant() {
  CrossSection xs;
  xs.constant_ = true;
  xs.residual_ = 0.0;
  xs.c_ = {-1.0, 1.0};
  xs.h_ = {0.5, 0.5};
  xs.cdf_ = {0.0, 1.0};
  xs.mean_cos_ = 0.0;
  return xs;
}

CrossSection CrossSection::from_density(std::function<double(double)> b,
                                        int cells) {
  if (!b) throw std::invalid_argument("CrossSection: empty density");
  if (cells < 8) throw std::invalid_argument("CrossSection: too few cells");

  const double raw = kTwoPi * integrate([&](double c) { return b(c); }, -1.0,
                                        1.0, 1e-12);
  if (!(raw > 0.0))
    throw std::invalid_argument("CrossSection: density integrates to zero");

  std::vector<double> nodes(cells + 1), h(cells + 1);
  for (int k = 0; k <= cells; ++k) {
    nodes[k] = -1.0 + 2.0 * k / cells;
    const double bk = b(nodes[k]);
    if (!(bk >= 0.0) || !std::isfinite(bk))
      throw std::invalid_argument("CrossSection: density must be >= 0");
    h[k] = kTwoPi * bk;
  }
  // Normalize the interpolant by its own exact integral so sampling is
  // unbiased for the stored table; the recorded residual reflects the raw
  // density.
  Kahan z;
  for (int k = 1; k <= cells; ++k)
    z.add(0.5 * (h[k] + h[k - 1]) * (nodes[k] - nodes[k - 1]));

  CrossSection xs;
  xs.constant_ = false;
  xs.build_from_nodes(std::move(nodes), std::move(h), z.value());
  xs.residual_ = std::abs(raw - 1.0);
  // For a closed-form density the mean cosine honors the quadrature
  // contract instead of the table.
  xs.mean_cos_ =
      kTwoPi * integrate([&](double c) { return c * b(c); }, -1.0, 1.0, 1e-12) /
      raw;
  return xs;
}

CrossSection CrossSection::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("CrossSection: cannot open table '" + path + "'");

  std::vector<double> c, h;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double ci, bi;
    if (!(row >> ci)) continue;  // blank or comment line
    if (!(row >> bi))
      throw std::runtime_error("CrossSection: '" + path + "' line " +
                               std::to_string(lineno) + ": need two columns");
    std::string extra;
    if (row >> extra)
      throw std::runtime_error("CrossSection: '" + path + "' line " +
                               std::to_string(lineno) + ": trailing tokens");
    if (!std::isfinite(ci) || !std::isfinite(bi) || bi < 0.0)
      throw std::runtime_error("CrossSection: '" + path + "' line " +
                               std::to_string(lineno) + ": bad value");
    if (!c.empty() && ci <= c.back())
      throw std::runtime_error("CrossSection: '" + path + "' line " +
                               std::to_string(lineno) +
                               ": cosines must increase strictly");
    c.push_back(ci);
    h.push_back(kTwoPi * bi);
  }
  if (c.size() < 2)
    throw std::runtime_error("CrossSection: '" + path +
                             "': need at least two rows");
  if (std::abs(c.front() + 1.0) > 1e-9 || std::abs(c.back() - 1.0) > 1e-9)
    throw std::runtime_error("CrossSection: '" + path +
                             "': table must span cosines [-1, 1]");
  c.front() = -1.0;
  c.back() = 1.0;

  Kahan z;
  for (std::size_t k = 1; k < c.size(); ++k)
    z.add(0.5 * (h[k] + h[k - 1]) * (c[k] - c[k - 1]));

  CrossSection xs;
  xs.constant_ = false;
  xs.build_from_nodes(std::move(c), std::move(h), z.value());
  return xs;
}

double CrossSection::density(double c) const {
  if (c < -1.0 || c > 1.0)
    throw std::invalid_argument("CrossSection::density: cosine outside [-1,1]");
  const auto it = std::upper_bound(c_.begin(), c_.end(), c);
  const std::size_t k =
      std::min(c_.size() - 1,
               static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                   1, it - c_.begin())));
  const double t = (c - c_[k - 1]) / (c_[k] - c_[k - 1]);
  return (h_[k - 1] + t * (h_[k] - h_[k - 1])) / kTwoPi;
}

double CrossSection::sample_cos(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const std::size_t k =
      std::min(cdf_.size() - 1,
               static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                   1, it - cdf_.begin())));
  const double c0 = c_[k - 1], dc = c_[k] - c_[k - 1];
  const double h0 = h_[k - 1];
  const double s = (h_[k] - h0) / dc;
  const double du = u - cdf_[k - 1];
  // Invert C(c) = C0 + h0 t + s t^2 / 2 for t = c - c0, in the form that
  // stays stable as the slope vanishes.
  const double disc = std::sqrt(std::max(0.0, h0 * h0 + 2.0 * s * du));
  const double t = (h0 + disc > 0.0) ? 2.0 * du / (h0 + disc) : 0.0;
  return std::min(c_[k], std::max(c0, c0 + t));
}

double contraction_factor_cross_section(double e, const CrossSection& xs) {
  if (!(e > 0.0) || e > 1.0)
    throw std::invalid_argument(
        "contraction_factor_cross_section: e outside (0, 1]");
  const double gamma =
      0.25 * (3.0 + e * e) + 0.25 * (1.0 - e * e) * xs.mean_cos();
  if (gamma > 1.0 + 1e-12)
    throw std::logic_error(
        "contraction_factor_cross_section: factor exceeded 1");
  return gamma;
}

double kac_rate(double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("kac_rate: p must be >= 0");
  const double q = 2.0 * (p + 1.0);
  // Quarter-period symmetry of |cos| and |sin| powers.
  const double I =
      (4.0 / std::numbers::pi) *
      integrate([q](double t) { return std::pow(std::cos(t), q); }, 0.0,
                0.5 * std::numbers::pi, 1e-12);
  return 0.5 * (1.0 - I);
}

}  // namespace w2gas
