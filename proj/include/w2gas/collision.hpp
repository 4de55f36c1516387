// Binary collision rules and angular cross-sections for the dissipative
// Maxwell gas, plus the exact contraction factors they induce on quadratic
// transport distances.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "w2gas/frame.hpp"
#include "w2gas/rng.hpp"

namespace w2gas {

// Restitution e in (0,1], rate prefactor B > 0, thermostat strength A >= 0
// with temperature exponent p_diff in [0, 3/2).
struct ModelParams {
  double e = 0.5;
  double b_rate = 1.0;
  double a_heat = 0.0;
  double p_diff = 0.0;

  void validate() const {
    if (!(e > 0.0) || e > 1.0)
      throw std::invalid_argument("ModelParams: e must lie in (0, 1]");
    if (!(b_rate > 0.0))
      throw std::invalid_argument("ModelParams: b_rate must be positive");
    if (a_heat < 0.0)
      throw std::invalid_argument("ModelParams: a_heat must be nonnegative");
    if (p_diff < 0.0 || !(p_diff < 1.5))
      throw std::invalid_argument("ModelParams: p_diff must lie in [0, 3/2)");
  }

  double eps() const { return 0.5 * (1.0 - e); }
  double eps_prime() const { return 0.5 * (1.0 + e); }

  // Collisions per particle per unit of logarithmic time; this is the rate
  // that makes the temperature of the homogeneous gas decay exactly at rate
  // 2. Diverges in the elastic limit, which is rejected.
  double tau_collision_rate() const {
    if (e >= 1.0)
      throw std::invalid_argument(
          "tau_collision_rate: undefined for the elastic gas (e = 1)");
    return 8.0 / (1.0 - e * e);
  }
};

// One-dimensional caricature with collision exponent p >= 0; p = 0 is the
// elastic rotation model.
struct KacParams {
  double p = 1.0;

  void validate() const {
    if (!(p >= 0.0)) throw std::invalid_argument("KacParams: p must be >= 0");
  }
  bool elastic() const { return p == 0.0; }
};

// Angular collision kernel as a density b(c) of the scattering cosine
// c = sigma.khat. The stored density is normalized so that the full solid-
// angle integral is one (2*pi Int_{-1}^{1} b(c) dc = 1); any supplied density
// is renormalized on construction and the relative residual |Z - 1| of the
// raw normalization is recorded. Sampling inverts the piecewise-quadratic
// CDF of the tabulated density, which is exact for the stored interpolant.
class CrossSection {
 public:
  static CrossSection constant();
  static CrossSection from_density(std::function<double(double)> b,
                                   int cells = 4096);
  static CrossSection from_table_file(const std::string& path);

  // Normalized density at c in [-1, 1].
  double density(double c) const;
  // Draws the scattering cosine; the density of the draw is 2*pi*b(c).
  double sample_cos(Rng& rng) const;
  // E[sigma.khat] under the normalized kernel, evaluated by adaptive
  // quadrature for closed-form densities (abs tol 1e-10) and in closed form
  // for tabulated ones.
  double mean_cos() const { return mean_cos_; }
  double normalization_residual() const { return residual_; }
  bool is_constant() const { return constant_; }

 private:
  CrossSection() = default;
  void build_from_nodes(std::vector<double> c, std::vector<double> h_raw,
                        double raw_integral);

  bool constant_ = true;
  double residual_ = 0.0;
  double mean_cos_ = 0.0;
  std::vector<double> c_;    // nodes, ascending, c_.front() = -1, back() = 1
  std::vector<double> h_;    // normalized pdf of c at the nodes
  std::vector<double> cdf_;  // exact cdf of the piecewise-linear pdf
};

// Post-collision velocities given the scattering direction sigma:
//   v' = (v+w)/2 + (1-e)/4 (v-w) + (1+e)/4 |v-w| sigma
//   w' = (v+w)/2 - (1-e)/4 (v-w) - (1+e)/4 |v-w| sigma
// Momentum is conserved exactly; the kinetic-energy change is <= 0 and
// vanishes identically at e = 1 when sigma has unit length.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> post_collision_pair(
    const Eigen::Vector3d& v, const Eigen::Vector3d& w,
    const Eigen::Vector3d& sigma, double e) {
  const Eigen::Vector3d center = 0.5 * (v + w);
  const Eigen::Vector3d rel = 0.5 * (v - w);
  const Eigen::Vector3d kick =
      0.5 * (1.0 - e) * rel + 0.5 * (1.0 + e) * rel.norm() * sigma;
  return {center + kick, center - kick};
}

// Scattering direction about the unit relative direction khat: the cosine is
// drawn from the cross-section, the azimuth uniformly. Draw order (cosine,
// then azimuth) is part of the reproducibility contract.
inline Eigen::Vector3d sample_sigma(const Eigen::Vector3d& khat,
                                    const CrossSection& xs, Rng& rng) {
  const Frame f = frame_from_axis(khat);
  const double c = xs.sample_cos(rng);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return c * f.axis + s * (std::cos(phi) * f.t1 + std::sin(phi) * f.t2);
}

// One-dimensional collision: a rotation warped by the exponent p,
//   v' = v cos(t)|cos(t)|^p - w sin(t)|sin(t)|^p
//   w' = v sin(t)|sin(t)|^p + w cos(t)|cos(t)|^p.
inline std::pair<double, double> kac_post_collision(double v, double w,
                                                    double t, double p) {
  const double ct = std::cos(t), st = std::sin(t);
  const double a = ct * std::pow(std::abs(ct), p);
  const double b = st * std::pow(std::abs(st), p);
  return {v * a - w * b, v * b + w * a};
}

// Factor multiplying the squared distance under one application of the gain
// operator with the isotropic kernel (means equal): (3 + e^2)/4.
inline double contraction_factor_gain(double e) {
  if (!(e > 0.0) || e > 1.0)
    throw std::invalid_argument("contraction_factor_gain: e outside (0, 1]");
  return 0.25 * (3.0 + e * e);
}

// Same factor for a general kernel:
//   gamma_b = (3 + e^2)/4 + (1 - e^2)/4 * E[sigma.khat].
// Always <= 1; equals the isotropic factor when the mean cosine vanishes.
double contraction_factor_cross_section(double e, const CrossSection& xs);

// Relaxation rate beta of the one-dimensional model,
//   2*beta = 1 - (1/2pi) Int_0^{2pi} (|cos t|^(2p+2) + |sin t|^(2p+2)) dt,
// evaluated by adaptive quadrature (abs tol 1e-10). beta(0) = 0,
// beta(1) = 1/8, and beta < 1/2 for every finite p.
double kac_rate(double p);

}  // namespace w2gas
