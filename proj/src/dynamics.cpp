#include "w2gas/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "w2gas/accum.hpp"
#include "w2gas/snapshot.hpp"
#include "w2gas/transport.hpp"

namespace w2gas {

namespace {

// Two-pass compensated temperature; cheaper than full moments inside the
// steppers.
double ensemble_theta(const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(v.rows());
  const int n = static_cast<int>(v.cols());
  Eigen::VectorXd mean(d);
  for (int r = 0; r < d; ++r) {
    Kahan acc;
    for (int i = 0; i < n; ++i) acc.add(v(r, i));
    mean[r] = acc.value() / n;
  }
  Kahan acc;
  for (int i = 0; i < n; ++i) acc.add((v.col(i) - mean).squaredNorm());
  return acc.value() / (static_cast<double>(n) * d);
}

std::uint64_t collide_pairs(Eigen::MatrixXd& v, double rate, double e,
                            const CrossSection& xs, double dtau, Rng& rng) {
  const auto n = static_cast<std::uint64_t>(v.cols());
  const std::int64_t events = rng.poisson(0.5 * n * rate * dtau);
  for (std::int64_t k = 0; k < events; ++k) {
    const auto i = rng.uniform_index(n);
    auto j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    const Eigen::Vector3d vi = v.col(i);
    const Eigen::Vector3d vj = v.col(j);
    const Eigen::Vector3d rel = vi - vj;
    if (rel.squaredNorm() < 1e-280) continue;  // equal velocities: identity
    const Eigen::Vector3d sigma = sample_sigma(rel, xs, rng);
    const auto [vp, wp] = post_collision_pair(vi, vj, sigma, e);
    v.col(i) = vp;
    v.col(j) = wp;
  }
  return static_cast<std::uint64_t>(events);
}

std::uint64_t collide_pairs_kac(Eigen::MatrixXd& v, double p, double dtau,
                                Rng& rng) {
  const auto n = static_cast<std::uint64_t>(v.cols());
  const std::int64_t events = rng.poisson(0.5 * n * dtau);
  for (std::int64_t k = 0; k < events; ++k) {
    const auto i = rng.uniform_index(n);
    auto j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto [vp, wp] = kac_post_collision(v(0, i), v(0, j), t, p);
    v(0, i) = vp;
    v(0, j) = wp;
  }
  return static_cast<std::uint64_t>(events);
}

}  // namespace

double SimConfig::collision_rate() const {
  switch (family) {
    case Family::homogeneous:
    case Family::diffusive:
    case Family::selfsimilar:
      return model.tau_collision_rate();
    case Family::kac:
    case Family::unit_rate:
      return 1.0;
  }
  throw std::logic_error("SimConfig: bad family");
}

void SimConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be at least 2");
  if (family == Family::kac) {
    if (d != 1)
      throw std::invalid_argument("config: family 'kac' requires d = 1");
    kac.validate();
  } else {
    if (d != 3)
      throw std::invalid_argument("config: this family requires d = 3");
    model.validate();
  }
  if (family == Family::homogeneous || family == Family::diffusive ||
      family == Family::selfsimilar) {
    if (!xs.is_constant())
      throw std::invalid_argument(
          "config: this family is defined for the isotropic kernel; use "
          "family 'unit_rate' for a general cross-section");
  }
  if (family == Family::diffusive && !(model.a_heat > 0.0))
    throw std::invalid_argument(
        "config: family 'diffusive' requires a_heat > 0");
  if (!(dtau > 0.0)) throw std::invalid_argument("config: dtau must be > 0");
  if (!(tau_end >= 0.0))
    throw std::invalid_argument("config: tau_end must be >= 0");
  if (!(record_every > 0.0))
    throw std::invalid_argument("config: record_every must be > 0");
  if (schedule) {
    double prev = -1.0;
    for (const double t : *schedule) {
      if (!std::isfinite(t) || t < 0.0)
        throw std::invalid_argument("config: schedule times must be >= 0");
      if (t <= prev)
        throw std::invalid_argument(
            "config: schedule must increase strictly");
      prev = t;
    }
  }
  if (dtau * collision_rate() > 0.1 + 1e-12)
    throw std::invalid_argument(
        "config: dtau * collision rate exceeds the stability bound 0.1");

  auto check_ic = [&](const IcSpec& ic, const char* which) {
    if (ic.kind != IcKind::dirac && ic.kind != IcKind::file &&
        !(ic.theta0 > 0.0))
      throw std::invalid_argument(std::string("config: ") + which +
                                  ": theta0 must be positive");
    if (ic.mean.size() != d)
      throw std::invalid_argument(std::string("config: ") + which +
                                  ": mean dimension mismatch");
    if (ic.kind == IcKind::two_point && n % 2 != 0)
      throw std::invalid_argument(std::string("config: ") + which +
                                  ": two_point needs even n");
    if (ic.kind == IcKind::file && ic.path.empty())
      throw std::invalid_argument(std::string("config: ") + which +
                                  ": missing snapshot path");
    if (family == Family::selfsimilar && ic.kind == IcKind::dirac)
      throw std::invalid_argument(
          "config: a zero-temperature state cannot be rescaled");
  };
  check_ic(ic_a, "ic");
  if (ic_b) check_ic(*ic_b, "pair ic");

  if (ic_b && d > 1 && n > kAssignmentCap)
    throw std::invalid_argument(
        "config: paired runs in d = 3 need n <= assignment cap (16384)");
}

VelocityEnsemble make_gaussian(int d, int n, const Eigen::VectorXd& mean,
                               double theta, Rng& rng) {
  VelocityEnsemble ens;
  ens.v.resize(d, n);
  const double sd = std::sqrt(theta);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r) ens.v(r, i) = mean[r] + sd * rng.normal();
  return ens;
}

VelocityEnsemble make_uniform_cube(int d, int n, const Eigen::VectorXd& mean,
                                   double theta, Rng& rng) {
  VelocityEnsemble ens;
  ens.v.resize(d, n);
  const double half = std::sqrt(3.0 * theta);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r)
      ens.v(r, i) = mean[r] + rng.uniform(-half, half);
  return ens;
}

VelocityEnsemble make_two_point(int d, int n, const Eigen::VectorXd& mean,
                                double theta) {
  VelocityEnsemble ens;
  ens.v.resize(d, n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(d);
  u[0] = std::sqrt(static_cast<double>(d) * theta);
  for (int i = 0; i < n; ++i)
    ens.v.col(i) = (i % 2 == 0) ? (mean + u).eval() : (mean - u).eval();
  return ens;
}

VelocityEnsemble make_dirac(int d, int n, const Eigen::VectorXd& a) {
  VelocityEnsemble ens;
  ens.v.resize(d, n);
  for (int i = 0; i < n; ++i) ens.v.col(i) = a;
  return ens;
}

VelocityEnsemble make_ic(const IcSpec& ic, int d, int n, Rng& rng) {
  switch (ic.kind) {
    case IcKind::gaussian:
      return make_gaussian(d, n, ic.mean, ic.theta0, rng);
    case IcKind::cube:
      return make_uniform_cube(d, n, ic.mean, ic.theta0, rng);
    case IcKind::two_point:
      return make_two_point(d, n, ic.mean, ic.theta0);
    case IcKind::dirac:
      return make_dirac(d, n, ic.mean);
    case IcKind::file: {
      Snapshot snap = load_snapshot(ic.path);
      if (snap.ens.dim() != d || snap.ens.size() != n)
        throw std::runtime_error("make_ic: snapshot '" + ic.path +
                                 "' does not match configured d and n");
      snap.ens.time = 0.0;
      snap.ens.collisions = 0;
      return std::move(snap.ens);
    }
  }
  throw std::logic_error("make_ic: bad kind");
}

void step_homogeneous(VelocityEnsemble& ens, const ModelParams& pm,
                      const CrossSection& xs, double dtau, Rng& rng) {
  ens.collisions +=
      collide_pairs(ens.v, pm.tau_collision_rate(), pm.e, xs, dtau, rng);
  ens.time += dtau;
}

void step_unit_rate(VelocityEnsemble& ens, double e, const CrossSection& xs,
                    double dtau, Rng& rng) {
  ens.collisions += collide_pairs(ens.v, 1.0, e, xs, dtau, rng);
  ens.time += dtau;
}

void step_diffusive(VelocityEnsemble& ens, const ModelParams& pm,
                    const CrossSection& xs, double dtau, Rng& rng) {
  const double E = pm.tau_collision_rate();
  ens.collisions += collide_pairs(ens.v, E, pm.e, xs, dtau, rng);
  // Lie splitting: heating kick after the collision substep. The squared
  // forcing strength tracks the current temperature, floored so exponents
  // p < 1/2 stay finite near a cold state.
  const double theta = std::max(ensemble_theta(ens.v), 1e-12);
  const double theta_sq = (E * pm.a_heat / pm.b_rate) *
                          std::pow(theta, pm.p_diff - 0.5);
  const double sd = std::sqrt(2.0 * theta_sq * dtau);
  for (int i = 0; i < ens.v.cols(); ++i)
    for (int r = 0; r < ens.v.rows(); ++r) ens.v(r, i) += sd * rng.normal();
  ens.time += dtau;
}

void step_selfsimilar(VelocityEnsemble& ens, const ModelParams& pm,
                      const CrossSection& xs, double dtau, Rng& rng) {
  ens.collisions +=
      collide_pairs(ens.v, pm.tau_collision_rate(), pm.e, xs, dtau, rng);
  // The drift term of the scaled equation is integrated exactly by pinning
  // the ensemble back to zero mean and unit temperature.
  const int d = ens.dim(), n = ens.size();
  Eigen::VectorXd mean(d);
  for (int r = 0; r < d; ++r) {
    Kahan acc;
    for (int i = 0; i < n; ++i) acc.add(ens.v(r, i));
    mean[r] = acc.value() / n;
  }
  ens.v.colwise() -= mean;
  const double theta = ensemble_theta(ens.v);
  if (!(theta > 1e-280))
    throw std::runtime_error("step_selfsimilar: ensemble collapsed");
  ens.v /= std::sqrt(theta);
  ens.time += dtau;
}

void step_kac(VelocityEnsemble& ens, const KacParams& kp, double dtau,
              Rng& rng) {
  ens.collisions += collide_pairs_kac(ens.v, kp.p, dtau, rng);
  ens.time += dtau;
}

double tau_of_t(double t, double theta0, const ModelParams& pm) {
  pm.validate();
  if (pm.e >= 1.0)
    throw std::invalid_argument("tau_of_t: elastic gas has no cooling clock");
  if (!(theta0 > 0.0)) throw std::invalid_argument("tau_of_t: theta0 <= 0");
  if (t < 0.0) throw std::invalid_argument("tau_of_t: t < 0");
  const double c = (1.0 - pm.e * pm.e) * pm.b_rate / 8.0;
  return std::log1p(c * std::sqrt(theta0) * t);
}

double t_of_tau(double tau, double theta0, const ModelParams& pm) {
  pm.validate();
  if (pm.e >= 1.0)
    throw std::invalid_argument("t_of_tau: elastic gas has no cooling clock");
  if (!(theta0 > 0.0)) throw std::invalid_argument("t_of_tau: theta0 <= 0");
  if (tau < 0.0) throw std::invalid_argument("t_of_tau: tau < 0");
  const double c = (1.0 - pm.e * pm.e) * pm.b_rate / 8.0;
  return std::expm1(tau) / (c * std::sqrt(theta0));
}

namespace {

std::vector<double> record_grid(const SimConfig& cfg) {
  if (cfg.schedule) return *cfg.schedule;
  std::vector<double> ts{0.0};
  for (int k = 1; k * cfg.record_every < cfg.tau_end - 1e-9; ++k)
    ts.push_back(k * cfg.record_every);
  if (cfg.tau_end > 0.0) ts.push_back(cfg.tau_end);
  return ts;
}

void advance_to(VelocityEnsemble& ens, const SimConfig& cfg, double target,
                Rng& rng) {
  while (ens.time < target - 1e-12) {
    const double h = std::min(cfg.dtau, target - ens.time);
    switch (cfg.family) {
      case Family::homogeneous:
        step_homogeneous(ens, cfg.model, cfg.xs, h, rng);
        break;
      case Family::diffusive:
        step_diffusive(ens, cfg.model, cfg.xs, h, rng);
        break;
      case Family::selfsimilar:
        step_selfsimilar(ens, cfg.model, cfg.xs, h, rng);
        break;
      case Family::kac:
        step_kac(ens, cfg.kac, h, rng);
        break;
      case Family::unit_rate:
        step_unit_rate(ens, cfg.model.e, cfg.xs, h, rng);
        break;
    }
  }
}

double empirical_w2_impl(const VelocityEnsemble& a, const VelocityEnsemble& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("empirical_w2: dimension mismatch");
  if (a.size() != b.size())
    throw std::invalid_argument("empirical_w2: size mismatch");
  if (a.dim() == 1)
    return w2_exact_1d(a.v.row(0).transpose(), b.v.row(0).transpose());
  return w2_exact_assignment(a.v, b.v).distance;
}

}  // namespace

double empirical_w2(const VelocityEnsemble& a, const VelocityEnsemble& b) {
  return empirical_w2_impl(a, b);
}

void advance_ensemble(VelocityEnsemble& ens, const SimConfig& cfg,
                      double target, Rng& rng) {
  advance_to(ens, cfg, target, rng);
}

SingleRun run_single(const SimConfig& cfg) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, 0);
  SingleRun out;
  VelocityEnsemble ens = make_ic(cfg.ic_a, cfg.d, cfg.n, rng);

  for (const double target : record_grid(cfg)) {
    advance_to(ens, cfg, target, rng);
    const MomentState ms = moments_of(ens.v);
    SingleRecord rec;
    rec.tau = ens.time;
    rec.t = (cfg.family == Family::homogeneous)
                ? t_of_tau(ens.time, cfg.ic_a.theta0, cfg.model)
                : ens.time;
    rec.theta = ms.theta;
    rec.m2 = ms.m2;
    rec.m4 = ms.m4;
    rec.mean = ms.mean;
    out.records.push_back(std::move(rec));
  }
  out.final_state = std::move(ens);
  return out;
}

PairedRun run_paired(const SimConfig& cfg) {
  cfg.validate();
  if (!cfg.ic_b)
    throw std::invalid_argument("run_paired: config has no [pair] section");

  Rng rng_a = Rng::stream(cfg.seed, 0);
  Rng rng_b = Rng::stream(cfg.seed, 1);
  Rng rng_r = Rng::stream(cfg.seed, 2);

  PairedRun out;
  VelocityEnsemble a = make_ic(cfg.ic_a, cfg.d, cfg.n, rng_a);
  VelocityEnsemble b = make_ic(*cfg.ic_b, cfg.d, cfg.n, rng_b);
  std::optional<VelocityEnsemble> rep;
  if (cfg.replica_slack) rep = make_ic(cfg.ic_a, cfg.d, cfg.n, rng_r);

  double w2_0 = 0.0, dmean0 = 0.0, tau0 = 0.0, kac_beta = 0.0, gamma_b = 0.0;
  if (cfg.family == Family::kac) kac_beta = kac_rate(cfg.kac.p);
  if (cfg.family == Family::unit_rate)
    gamma_b = contraction_factor_cross_section(cfg.model.e, cfg.xs);

  const auto grid = record_grid(cfg);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double target = grid[k];
    advance_to(a, cfg, target, rng_a);
    advance_to(b, cfg, target, rng_b);
    if (rep) advance_to(*rep, cfg, target, rng_r);

    const MomentState ma = moments_of(a.v);
    const MomentState mb = moments_of(b.v);
    PairedRecord rec;
    rec.tau = a.time;
    rec.w2 = empirical_w2_impl(a, b);
    rec.slack = rep ? 3.0 * empirical_w2_impl(a, *rep) : 0.0;
    rec.theta_a = ma.theta;
    rec.theta_b = mb.theta;
    rec.m4_a = ma.m4;
    rec.m4_b = mb.m4;
    rec.mean_a = ma.mean;
    rec.mean_b = mb.mean;

    if (k == 0) {
      w2_0 = rec.w2;
      dmean0 = (ma.mean - mb.mean).norm();
      tau0 = rec.tau;
    }
    const double dt0 = rec.tau - tau0;
    switch (cfg.family) {
      case Family::homogeneous:
      case Family::diffusive: {
        const double decay = std::exp(-2.0 * dt0);
        rec.bound =
            std::sqrt(decay * w2_0 * w2_0 + (1.0 - decay) * dmean0 * dmean0);
        break;
      }
      case Family::selfsimilar:
        rec.bound = w2_0;
        break;
      case Family::kac:
        rec.bound = std::exp(-kac_beta * dt0) * w2_0;
        break;
      case Family::unit_rate:
        rec.bound = std::exp(-0.5 * (1.0 - gamma_b) * dt0) * w2_0;
        break;
    }
    out.records.push_back(std::move(rec));
  }
  out.final_a = std::move(a);
  out.final_b = std::move(b);
  return out;
}

}  // namespace w2gas
