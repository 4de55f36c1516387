#include "w2gas/moments.hpp"

#include <cmath>
#include <stdexcept>

#include "w2gas/accum.hpp"

namespace w2gas {

MomentState moments_of(const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(v.rows());
  const int n = static_cast<int>(v.cols());
  if (n == 0) throw std::invalid_argument("moments_of: empty ensemble");
  if (d < 1 || d > 3)
    throw std::invalid_argument("moments_of: dimension must be 1..3");

  MomentState ms;
  ms.mean.resize(d);
  for (int r = 0; r < d; ++r) {
    Kahan acc;
    for (int i = 0; i < n; ++i) acc.add(v(r, i));
    ms.mean[r] = acc.value() / n;
  }

  ms.p_tensor = Eigen::MatrixXd::Zero(d, d);
  std::vector<Kahan> second(d * d);
  Kahan quart;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd c = v.col(i) - ms.mean;
    for (int r = 0; r < d; ++r)
      for (int s = r; s < d; ++s) second[r * d + s].add(c[r] * c[s]);
    const double c2 = c.squaredNorm();
    quart.add(c2 * c2);
  }
  for (int r = 0; r < d; ++r)
    for (int s = r; s < d; ++s) {
      const double val = second[r * d + s].value() / n;
      ms.p_tensor(r, s) = val;
      ms.p_tensor(s, r) = val;
    }
  ms.m2 = ms.p_tensor.trace();
  ms.theta = ms.m2 / d;
  ms.m4 = quart.value() / n;
  ms.m2bar = ms.p_tensor.squaredNorm();
  return ms;
}

CoolingLaw haff_theta(double t, double theta0, const ModelParams& pm) {
  pm.validate();
  if (!(theta0 > 0.0))
    throw std::invalid_argument("haff_theta: theta0 must be positive");
  if (t < 0.0) throw std::invalid_argument("haff_theta: t must be >= 0");
  if (pm.e >= 1.0) return {theta0, true};
  const double root =
      1.0 / std::sqrt(theta0) + (1.0 - pm.e * pm.e) * pm.b_rate * t / 8.0;
  return {1.0 / (root * root), false};
}

FourthMomentCoefficients fourth_moment_coefficients(double e) {
  if (!(e > 0.0) || e > 1.0)
    throw std::invalid_argument("fourth_moment_coefficients: e outside (0,1]");
  const double ep = 0.5 * (1.0 - e);
  const double epp = 0.5 * (1.0 + e);
  const double s = ep * ep + epp * epp;
  FourthMomentCoefficients k;
  k.alpha = s * s - 1.0 + (4.0 / 3.0) * ep * ep * epp * epp;
  k.beta = 2.0 * (s - 1.0 + (2.0 / 3.0) * epp * epp);
  k.gamma = 4.0 * (ep * ep - 1.0);
  k.lambda = -(k.alpha + k.beta + k.gamma) / 8.0;
  k.mu1 = (k.alpha + k.beta - k.gamma) / 8.0;
  k.mu2 = (k.alpha - k.beta) / 4.0;
  return k;
}

double m4_rhs(double m4, double m2, double m2bar, const ModelParams& pm) {
  pm.validate();
  const double E = pm.tau_collision_rate();
  const FourthMomentCoefficients k = fourth_moment_coefficients(pm.e);
  return (4.0 - E * k.lambda) * m4 + E * (k.mu1 * m2 * m2 + k.mu2 * m2bar);
}

double m4_fixed_point(double m2, const ModelParams& pm) {
  pm.validate();
  const double E = pm.tau_collision_rate();
  const FourthMomentCoefficients k = fourth_moment_coefficients(pm.e);
  const double drift = E * k.lambda - 4.0;
  if (!(drift > 0.0))
    throw std::runtime_error("m4_fixed_point: flow is not contracting");
  return E * (k.mu1 + k.mu2 / 3.0) * m2 * m2 / drift;
}

std::vector<std::pair<double, double>> integrate_m4(const MomentState& ms0,
                                                    const ModelParams& pm,
                                                    double tau_end,
                                                    double dtau) {
  pm.validate();
  if (!(tau_end >= 0.0)) throw std::invalid_argument("integrate_m4: tau_end");
  if (!(dtau > 0.0) || dtau > 0.01)
    throw std::invalid_argument("integrate_m4: dtau must lie in (0, 0.01]");

  const double m2 = ms0.m2;
  const double m2bar = ms0.m2bar;
  auto f = [&](double m4) { return m4_rhs(m4, m2, m2bar, pm); };

  std::vector<std::pair<double, double>> trace;
  trace.reserve(static_cast<std::size_t>(tau_end / dtau) + 2);
  double tau = 0.0, m4 = ms0.m4;
  trace.emplace_back(tau, m4);
  while (tau < tau_end - 1e-12) {
    const double h = std::min(dtau, tau_end - tau);
    const double k1 = f(m4);
    const double k2 = f(m4 + 0.5 * h * k1);
    const double k3 = f(m4 + 0.5 * h * k2);
    const double k4 = f(m4 + h * k3);
    m4 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    tau += h;
    trace.emplace_back(tau, m4);
  }
  return trace;
}

}  // namespace w2gas
