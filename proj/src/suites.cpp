// Implementations of the verification blocks. Every block derives its own
// sub-seeds from the caller's master seed through block_seed(tag, slot), so
// blocks are independent of each other and of evaluation order, and a fixed
// master seed pins every draw in the whole suite.
#include "w2gas/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "w2gas/collision.hpp"
#include "w2gas/dynamics.hpp"
#include "w2gas/moments.hpp"
#include "w2gas/rng.hpp"
#include "w2gas/transport.hpp"

namespace w2gas {
namespace checks {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Tags keep the stream families of the blocks disjoint; slots separate
// experiments inside a block. Changing any tag changes only that block.
enum : std::uint64_t {
  kTagAnalytic = 1,
  kTagOt = 2,
  kTagSphere = 3,
  kTagGain = 4,
  kTagTemperature = 5,
  kTagFlow = 6,
  kTagDiffusive = 7,
  kTagKac = 8,
  kTagMoment = 9,
  kTagCooling = 10,
  kTagCrossSection = 11,
};

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t slot) {
  std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (tag * 64 + slot + 1);
  return splitmix64(s);
}

std::string label(const char* prefix, int k) {
  return std::string(prefix) + std::to_string(k);
}

std::string label(const char* prefix, double v, const char* suffix = "") {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%g%s", prefix, v, suffix);
  return buf;
}

// Ordinary least squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Factorial-search oracle for the assignment route, n <= 8.
double w2_bruteforce(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const int n = static_cast<int>(x.cols());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int i = 0; i < n; ++i)
      cost += (x.col(i) - y.col(perm[i])).squaredNorm();
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / n);
}

Eigen::MatrixXd random_points(int d, int n, Rng& rng) {
  Eigen::MatrixXd pts(d, n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < d; ++r) pts(r, j) = rng.uniform(-1.5, 1.5);
  return pts;
}

DiscreteMeasure random_measure(int d, int n, Rng& rng) {
  Eigen::MatrixXd pts = random_points(d, n, rng);
  Eigen::VectorXd w(n);
  for (int j = 0; j < n; ++j) w[j] = rng.uniform(0.1, 1.0);
  w /= w.sum();
  return DiscreteMeasure(std::move(pts), std::move(w));
}

DiscreteMeasure coordinate_marginal(const DiscreteMeasure& mu, int r) {
  Eigen::MatrixXd line(1, mu.size());
  line.row(0) = mu.atoms.row(r);
  return DiscreteMeasure(std::move(line), mu.weights);
}

// One application of the gain operator to an empirical state: each output
// velocity is the first post-collisional velocity of an independently drawn
// ordered pair (j, k), j != k, with an isotropic scattering direction.
Eigen::MatrixXd apply_gain(const Eigen::MatrixXd& in, double e, Rng& rng) {
  const int n = static_cast<int>(in.cols());
  Eigen::MatrixXd out(3, n);
  for (int i = 0; i < n; ++i) {
    const int j = static_cast<int>(rng.uniform_index(n));
    int k = static_cast<int>(rng.uniform_index(n - 1));
    if (k >= j) ++k;
    const Eigen::Vector3d sigma = rng.unit_sphere();
    out.col(i) = post_collision_pair(in.col(j), in.col(k), sigma, e).first;
  }
  return out;
}

SphereSpec random_sphere(Rng& rng, double min_radius = 0.05) {
  SphereSpec s;
  for (int r = 0; r < 3; ++r) s.center[r] = rng.uniform(-2.0, 2.0);
  s.radius = rng.uniform(min_radius, 2.0);
  return s;
}

CircleSpec random_circle(Rng& rng) {
  CircleSpec c;
  for (int r = 0; r < 3; ++r) c.center[r] = rng.uniform(-2.0, 2.0);
  c.radius = rng.uniform(0.1, 2.0);
  c.axis = rng.unit_sphere();
  return c;
}

IcSpec gaussian_ic(double theta0, const Eigen::VectorXd& mean) {
  IcSpec ic;
  ic.kind = IcKind::gaussian;
  ic.theta0 = theta0;
  ic.mean = mean;
  return ic;
}

IcSpec cube_ic(double theta0, const Eigen::VectorXd& mean) {
  IcSpec ic;
  ic.kind = IcKind::cube;
  ic.theta0 = theta0;
  ic.mean = mean;
  return ic;
}

IcSpec dirac_ic(const Eigen::VectorXd& at) {
  IcSpec ic;
  ic.kind = IcKind::dirac;
  ic.mean = at;
  return ic;
}

}  // namespace

std::vector<CheckRow> analytic_constants(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  rows.push_back(
      equality_check("gain-factor-elastic", contraction_factor_gain(1.0), 1.0, 0.0));

  // The kernel-averaged factor, evaluated through the quadrature route with a
  // constant kernel, must land on (3 + e^2)/4 across the whole e range.
  const CrossSection iso =
      CrossSection::from_density([](double) { return 1.0 / (4.0 * kPi); });
  double qdev = 0.0;
  for (int k = 1; k <= 20; ++k) {
    const double e = k / 20.0;
    qdev = std::max(qdev, std::abs(contraction_factor_cross_section(e, iso) -
                                   0.25 * (3.0 + e * e)));
  }
  rows.push_back(inequality_check("gain-factor-quadrature-dev", qdev, 0.0, 1e-10));

  rows.push_back(equality_check("kac-rate-p0", kac_rate(0.0), 0.0, 1e-10));
  rows.push_back(equality_check("kac-rate-p1", kac_rate(1.0), 0.125, 1e-10));
  rows.push_back(
      equality_check("kac-rate-p2", kac_rate(2.0), 3.0 / 16.0, 1e-10));

  rows.push_back(equality_check("quartic-lambda-elastic",
                                fourth_moment_coefficients(1.0).lambda,
                                1.0 / 3.0, 1e-12));

  // lambda agrees with its expanded polynomial and with -(alpha+beta+gamma)/8
  // on random restitution values.
  Rng rng(block_seed(seed, kTagAnalytic, 0));
  double idev = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double e = rng.uniform(0.01, 1.0);
    const FourthMomentCoefficients c = fourth_moment_coefficients(e);
    const double poly = (13.0 + 4.0 * e - 8.0 * e * e - e * e * e * e) / 24.0;
    idev = std::max(idev, std::abs(c.lambda - poly));
    idev = std::max(idev,
                    std::abs(c.lambda + (c.alpha + c.beta + c.gamma) / 8.0));
  }
  rows.push_back(inequality_check("quartic-lambda-identity-dev", idev, 0.0, 1e-12));

  // 4 - E*lambda stays strictly negative on a dense inelastic grid, so the
  // quartic moment never outruns its linear damping.
  double drift = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 1000; ++k) {
    const double e = k / 1001.0;
    const double big_e = 8.0 / (1.0 - e * e);
    drift = std::max(drift,
                     4.0 - big_e * fourth_moment_coefficients(e).lambda);
  }
  rows.push_back(inequality_check("quartic-drift-negative", drift, 0.0, 0.0));

  return rows;
}

std::vector<CheckRow> ot_exactness(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  // Assignment solver vs the factorial oracle on 100 small instances spread
  // over d = 1, 2, 3.
  Rng rng(block_seed(seed, kTagOt, 0));
  double brute_dev = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 1 + t % 3;
    const int n = 2 + static_cast<int>(rng.uniform_index(5));
    const Eigen::MatrixXd x = random_points(d, n, rng);
    const Eigen::MatrixXd y = random_points(d, n, rng);
    brute_dev = std::max(brute_dev, std::abs(w2_exact_assignment(x, y).distance -
                                             w2_bruteforce(x, y)));
  }
  rows.push_back(
      inequality_check("assignment-vs-oracle-dev", brute_dev, 0.0, 1e-12));

  // Sorted route and assignment route coincide on the line.
  Rng rng1(block_seed(seed, kTagOt, 1));
  double sort_dev = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Eigen::MatrixXd x = random_points(1, 200, rng1);
    const Eigen::MatrixXd y = random_points(1, 200, rng1);
    sort_dev = std::max(
        sort_dev, std::abs(w2_exact_1d(x.row(0).transpose(), y.row(0).transpose()) -
                           w2_exact_assignment(x, y).distance));
  }
  rows.push_back(
      inequality_check("sorted-1d-vs-assignment-dev", sort_dev, 0.0, 1e-12));

  // Temperature scaling dilates distances by exactly 1/sqrt(theta).
  Rng rng2(block_seed(seed, kTagOt, 2));
  double scale_dev = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = 1 + t % 3;
    const double theta = (t % 2 == 0) ? 0.25 : 9.0;
    const DiscreteMeasure mu = random_measure(d, 3 + t % 14, rng2);
    const DiscreteMeasure nu = random_measure(d, 2 + t % 17, rng2);
    const double base = w2_discrete_lp(mu, nu).distance;
    const double scaled =
        w2_discrete_lp(scale_measure(mu, theta), scale_measure(nu, theta))
            .distance;
    scale_dev = std::max(scale_dev, std::abs(scaled * std::sqrt(theta) - base));
  }
  rows.push_back(inequality_check("scaling-equality-dev", scale_dev, 0.0, 1e-12));

  // Coordinate marginals can only get closer: sum_r W2(P_r mu, P_r nu)^2
  // never exceeds W2(mu, nu)^2.
  Rng rng3(block_seed(seed, kTagOt, 3));
  double excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 2;
    const DiscreteMeasure mu = random_measure(d, 2 + static_cast<int>(rng3.uniform_index(19)), rng3);
    const DiscreteMeasure nu = random_measure(d, 2 + static_cast<int>(rng3.uniform_index(19)), rng3);
    const double full = w2_discrete_lp(mu, nu).distance;
    double marginal_sq = 0.0;
    for (int r = 0; r < d; ++r) {
      const double w2r = w2_discrete_lp(coordinate_marginal(mu, r),
                                        coordinate_marginal(nu, r))
                             .distance;
      marginal_sq += w2r * w2r;
    }
    excess = std::max(excess, marginal_sq - full * full);
  }
  rows.push_back(inequality_check("marginal-bound-excess", excess, 0.0, 1e-10));

  return rows;
}

std::vector<CheckRow> sphere_circle(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  // Deterministic geometry of the sphere-pair map: closed-form cost, the
  // homothety identity, and center-to-center transport.
  Rng rng(block_seed(seed, kTagSphere, 0));
  double cost_dev = 0.0, induced_dev = 0.0, center_dev = 0.0;
  for (int t = 0; t < 100; ++t) {
    SphereSpec a = random_sphere(rng);
    SphereSpec b = random_sphere(rng);
    if (t % 10 == 0) a.radius = 0.0;         // point source
    if (t % 10 == 5) b.radius = a.radius;    // pure translation
    const SphereMap map = sphere_transport_map(a, b);
    const double expect =
        (b.center - a.center).squaredNorm() +
        (b.radius - a.radius) * (b.radius - a.radius);
    cost_dev = std::max(cost_dev, std::abs(map.squared_cost - expect));
    if (map.kind == SphereMap::Kind::homothety) {
      const double f1 = map.factor - 1.0;
      const double induced =
          f1 * f1 * ((a.center - map.pivot).squaredNorm() + a.radius * a.radius);
      induced_dev = std::max(induced_dev, std::abs(map.squared_cost - induced));
    }
    if (map.kind != SphereMap::Kind::point_source)
      center_dev = std::max(
          center_dev, (map.apply(a.center) - b.center).norm());
  }
  rows.push_back(inequality_check("sphere-map-cost-dev", cost_dev, 0.0, 1e-10));
  rows.push_back(
      inequality_check("sphere-map-induced-dev", induced_dev, 0.0, 1e-10));
  rows.push_back(
      inequality_check("sphere-map-center-dev", center_dev, 0.0, 1e-10));

  // Sampled spheres: the empirical distance between 2000-point clouds stays
  // under the closed-form bound plus three sampling self-distances.
  for (int t = 0; t < 20; ++t) {
    Rng spec_rng(block_seed(seed, kTagSphere, 10 + t));
    const SphereSpec a = random_sphere(spec_rng);
    const SphereSpec b = random_sphere(spec_rng);
    Rng ra = Rng::stream(block_seed(seed, kTagSphere, 40 + t), 0);
    Rng rb = Rng::stream(block_seed(seed, kTagSphere, 40 + t), 1);
    Rng rr = Rng::stream(block_seed(seed, kTagSphere, 40 + t), 2);
    const Eigen::MatrixXd xa = sample_sphere(a, 2000, ra);
    const Eigen::MatrixXd xb = sample_sphere(b, 2000, rb);
    const Eigen::MatrixXd xa2 = sample_sphere(a, 2000, rr);
    const double bound = std::sqrt((b.center - a.center).squaredNorm() +
                                   (b.radius - a.radius) * (b.radius - a.radius));
    const double slack = 3.0 * w2_exact_assignment(xa, xa2).distance;
    rows.push_back(inequality_check(label("sphere-sampled-t", t),
                                    w2_exact_assignment(xa, xb).distance,
                                    bound, slack));
  }

  // Same experiment for uniform circles against their cost bound.
  for (int t = 0; t < 20; ++t) {
    Rng spec_rng(block_seed(seed, kTagSphere, 70 + t));
    const CircleSpec a = random_circle(spec_rng);
    const CircleSpec b = random_circle(spec_rng);
    Rng ra = Rng::stream(block_seed(seed, kTagSphere, 100 + t), 0);
    Rng rb = Rng::stream(block_seed(seed, kTagSphere, 100 + t), 1);
    Rng rr = Rng::stream(block_seed(seed, kTagSphere, 100 + t), 2);
    const Eigen::MatrixXd xa = sample_circle(a, 2000, ra);
    const Eigen::MatrixXd xb = sample_circle(b, 2000, rb);
    const Eigen::MatrixXd xa2 = sample_circle(a, 2000, rr);
    const double bound = std::sqrt(circle_cost_bound(a, b));
    const double slack = 3.0 * w2_exact_assignment(xa, xa2).distance;
    rows.push_back(inequality_check(label("circle-sampled-t", t),
                                    w2_exact_assignment(xa, xb).distance,
                                    bound, slack));
  }

  return rows;
}

std::vector<CheckRow> gain_contraction(std::uint64_t seed) {
  std::vector<CheckRow> rows;
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  const double evals[] = {0.2, 0.5, 0.9, 1.0};
  for (int ei = 0; ei < 4; ++ei) {
    const double e = evals[ei];
    for (int s = 0; s < 5; ++s) {
      const std::uint64_t sub = block_seed(seed, kTagGain, 8 * ei + s);
      Rng rf = Rng::stream(sub, 0);
      Rng rg = Rng::stream(sub, 1);
      Rng rq_f = Rng::stream(sub, 2);
      Rng rq_g = Rng::stream(sub, 3);
      Rng rq_rep = Rng::stream(sub, 4);
      const Eigen::MatrixXd f = make_gaussian(3, 2000, zero, 1.0, rf).v;
      const Eigen::MatrixXd g = make_uniform_cube(3, 2000, zero, 2.0, rg).v;
      const double before = w2_exact_assignment(f, g).distance;
      const Eigen::MatrixXd qf = apply_gain(f, e, rq_f);
      const Eigen::MatrixXd qg = apply_gain(g, e, rq_g);
      const Eigen::MatrixXd qf2 = apply_gain(f, e, rq_rep);
      const double measured = w2_exact_assignment(qf, qg).distance;
      const double bound = std::sqrt(contraction_factor_gain(e)) * before;
      const double slack = 3.0 * w2_exact_assignment(qf, qf2).distance;
      rows.push_back(inequality_check(
          label("gain-e", e, ("-s" + std::to_string(s)).c_str()), measured,
          bound, slack));
    }
  }
  return rows;
}

std::vector<CheckRow> temperature_laws(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  SimConfig cfg;
  cfg.name = "temperature-laws";
  cfg.family = Family::homogeneous;
  cfg.seed = block_seed(seed, kTagTemperature, 0);
  cfg.n = 100000;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.model.b_rate = 1.0;
  cfg.ic_a = gaussian_ic(1.0, Eigen::Vector3d::Zero());
  cfg.dtau = 0.009;
  cfg.tau_end = 3.0;
  cfg.record_every = 0.5;
  const SingleRun run = run_single(cfg);

  // theta(tau) = theta0 exp(-2 tau) in the collision clock, and the same
  // curve read through t is the algebraic cooling law.
  double tau_dev = 0.0, t_dev = 0.0;
  for (const SingleRecord& rec : run.records) {
    tau_dev = std::max(tau_dev,
                       std::abs(rec.theta / std::exp(-2.0 * rec.tau) - 1.0));
    t_dev = std::max(
        t_dev, std::abs(rec.theta / haff_theta(rec.t, 1.0, cfg.model).theta - 1.0));
  }
  rows.push_back(inequality_check("cooling-clock-decay-maxrel", tau_dev, 0.0, 0.02));
  rows.push_back(inequality_check("cooling-physical-decay-maxrel", t_dev, 0.0, 0.02));

  // The two clock maps invert each other over a spread of states.
  double round_dev = 0.0;
  for (const double e : {0.3, 0.5, 0.9}) {
    ModelParams pm;
    pm.e = e;
    pm.b_rate = 1.0;
    for (const double theta0 : {0.7, 2.0}) {
      for (const double tau : {0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0}) {
        const double back = tau_of_t(t_of_tau(tau, theta0, pm), theta0, pm);
        round_dev = std::max(round_dev, std::abs(back / tau - 1.0));
      }
    }
  }
  rows.push_back(inequality_check("clock-round-trip-dev", round_dev, 0.0, 1e-12));

  return rows;
}

std::vector<CheckRow> flow_contraction(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  // Point-mass comparison: the squared distance from the gas to the point
  // mass at its own mean equals 3 theta on the nose (two independent code
  // paths), and tracks the cooling curve.
  SimConfig cfg;
  cfg.name = "flow-dirac";
  cfg.family = Family::homogeneous;
  cfg.seed = block_seed(seed, kTagFlow, 0);
  cfg.n = 20000;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.model.b_rate = 1.0;
  cfg.ic_a = gaussian_ic(1.0, Eigen::Vector3d::Zero());
  cfg.dtau = 0.009;
  cfg.tau_end = 3.0;
  cfg.record_every = 0.5;
  cfg.validate();

  Rng rng = Rng::stream(cfg.seed, 0);
  VelocityEnsemble ens = make_ic(cfg.ic_a, cfg.d, cfg.n, rng);
  double id_dev = 0.0, track_dev = 0.0;
  for (int k = 0; k <= 6; ++k) {
    const double tau = 0.5 * k;
    advance_ensemble(ens, cfg, tau, rng);
    const MomentState ms = moments_of(ens.v);
    const double w2d = w2_to_dirac(ens.v, ms.mean);
    id_dev = std::max(id_dev, std::abs(w2d * w2d - 3.0 * ms.theta));
    track_dev = std::max(
        track_dev, std::abs(w2d * w2d / (3.0 * std::exp(-2.0 * tau)) - 1.0));
  }
  rows.push_back(inequality_check("dirac-identity-dev", id_dev, 0.0, 1e-12));
  rows.push_back(inequality_check("dirac-cooling-maxrel", track_dev, 0.0, 0.03));

  // General two-state bound along the cooling flow for a soft and a hard
  // restitution value.
  for (const double e : {0.3, 0.7}) {
    SimConfig pc;
    pc.name = "flow-pair";
    pc.family = Family::homogeneous;
    pc.seed = block_seed(seed, kTagFlow, e < 0.5 ? 1 : 2);
    pc.n = 2000;
    pc.d = 3;
    pc.model.e = e;
    pc.model.b_rate = 1.0;
    pc.ic_a = gaussian_ic(1.0, Eigen::Vector3d(0.5, 0.0, 0.0));
    pc.ic_b = cube_ic(2.0, Eigen::Vector3d::Zero());
    pc.dtau = e < 0.5 ? 0.009 : 0.006;
    pc.tau_end = 3.0;
    pc.record_every = 0.5;
    const PairedRun run = run_paired(pc);
    int k = 0;
    for (const PairedRecord& rec : run.records) {
      rows.push_back(inequality_check(
          label("flow-pair-e", e, ("-t" + std::to_string(k)).c_str()), rec.w2,
          rec.bound, rec.slack));
      ++k;
    }
  }

  return rows;
}

std::vector<CheckRow> diffusive_laws(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  // Same-energy pair under heating: the contraction bound must hold with the
  // statistical slack on every record.
  SimConfig pc;
  pc.name = "diffusive-pair";
  pc.family = Family::diffusive;
  pc.seed = block_seed(seed, kTagDiffusive, 0);
  pc.n = 2000;
  pc.d = 3;
  pc.model.e = 0.5;
  pc.model.b_rate = 1.0;
  pc.model.a_heat = 1.0;
  pc.model.p_diff = 0.0;
  pc.ic_a = gaussian_ic(2.0, Eigen::Vector3d::Zero());
  pc.ic_b = cube_ic(2.0, Eigen::Vector3d::Zero());
  pc.dtau = 0.009;
  pc.tau_end = 3.0;
  pc.record_every = 0.5;
  const PairedRun run = run_paired(pc);
  int k = 0;
  for (const PairedRecord& rec : run.records) {
    rows.push_back(inequality_check(label("diffusive-pair-t", k), rec.w2,
                                    rec.bound, rec.slack));
    ++k;
  }

  // The steady temperature matches its closed form for both forcing
  // exponents; the run starts far below the fixed point.
  for (const double p : {0.0, 1.0}) {
    SimConfig sc;
    sc.name = "diffusive-steady";
    sc.family = Family::diffusive;
    sc.seed = block_seed(seed, kTagDiffusive, p == 0.0 ? 1 : 2);
    sc.n = 20000;
    sc.d = 3;
    sc.model.e = 0.5;
    sc.model.b_rate = 1.0;
    sc.model.a_heat = 1.0;
    sc.model.p_diff = p;
    sc.ic_a = gaussian_ic(1.0, Eigen::Vector3d::Zero());
    sc.dtau = 0.009;
    sc.tau_end = 12.0;
    sc.record_every = 0.5;
    const SingleRun srun = run_single(sc);
    const double target =
        std::pow(8.0 * sc.model.a_heat /
                     (sc.model.b_rate * (1.0 - sc.model.e * sc.model.e)),
                 2.0 / (3.0 - 2.0 * p));
    double acc = 0.0;
    int cnt = 0;
    for (const SingleRecord& rec : srun.records)
      if (rec.tau >= 9.0) {
        acc += rec.theta;
        ++cnt;
      }
    rows.push_back(equality_check(label("diffusive-steady-p", p), acc / cnt,
                                  target, 0.03 * target));
  }

  return rows;
}

std::vector<CheckRow> kac_relaxation(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  // Pair a centered state with the invariant point mass at the origin: their
  // distance is sqrt(m2) and decays at exactly the model rate, so a
  // log-linear fit recovers beta with second-moment-level noise.
  SimConfig pc;
  pc.name = "kac-pair";
  pc.family = Family::kac;
  pc.seed = block_seed(seed, kTagKac, 0);
  pc.n = 100000;
  pc.d = 1;
  pc.kac.p = 1.0;
  pc.ic_a = gaussian_ic(1.0, Eigen::VectorXd::Zero(1));
  pc.ic_b = dirac_ic(Eigen::VectorXd::Zero(1));
  pc.dtau = 0.05;
  pc.tau_end = 4.0;
  pc.record_every = 0.25;
  const PairedRun run = run_paired(pc);
  std::vector<double> taus, logs;
  for (const PairedRecord& rec : run.records) {
    taus.push_back(rec.tau);
    logs.push_back(std::log(rec.w2));
  }
  const double beta_hat = -fit_slope(taus, logs);
  rows.push_back(equality_check("kac-w2-rate", beta_hat, 0.125, 0.00625));
  int k = 0;
  for (const PairedRecord& rec : run.records) {
    rows.push_back(inequality_check(label("kac-pair-t", k), rec.w2, rec.bound,
                                    rec.slack));
    ++k;
  }

  // Energy of a centered state decays at twice that rate.
  SimConfig sc;
  sc.name = "kac-energy";
  sc.family = Family::kac;
  sc.seed = block_seed(seed, kTagKac, 1);
  sc.n = 100000;
  sc.d = 1;
  sc.kac.p = 1.0;
  sc.ic_a = gaussian_ic(1.0, Eigen::VectorXd::Zero(1));
  sc.dtau = 0.05;
  sc.tau_end = 4.0;
  sc.record_every = 0.25;
  const SingleRun srun = run_single(sc);
  std::vector<double> staus, slogs;
  for (const SingleRecord& rec : srun.records) {
    const double m2u = rec.m2 + rec.mean.squaredNorm();
    staus.push_back(rec.tau);
    slogs.push_back(std::log(m2u));
  }
  const double rate_hat = -fit_slope(staus, slogs);
  rows.push_back(equality_check("kac-m2-rate", rate_hat, 0.25, 0.005));

  return rows;
}

std::vector<CheckRow> moment_ode(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  SimConfig cfg;
  cfg.name = "moment-ode";
  cfg.family = Family::selfsimilar;
  cfg.seed = block_seed(seed, kTagMoment, 0);
  cfg.n = 100000;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.ic_a = gaussian_ic(1.0, Eigen::Vector3d::Zero());
  cfg.dtau = 0.009;
  cfg.tau_end = 5.0;
  cfg.record_every = 0.5;
  const SingleRun run = run_single(cfg);

  // Closed flow started from the measured initial quartic moment; the
  // rescaled state pins m2 = 3 and an isotropic start pins m2bar = 3.
  MomentState ms0;
  ms0.m2 = 3.0;
  ms0.m2bar = 3.0;
  ms0.m4 = run.records.front().m4;
  const auto ode = integrate_m4(ms0, cfg.model, cfg.tau_end, 0.005);

  double rel_dev = 0.0, sup = 0.0;
  for (const SingleRecord& rec : run.records) {
    sup = std::max(sup, rec.m4);
    // nearest ODE sample; the integrator records every step
    const auto it = std::min_element(
        ode.begin(), ode.end(), [&](const auto& a, const auto& b) {
          return std::abs(a.first - rec.tau) < std::abs(b.first - rec.tau);
        });
    rel_dev = std::max(rel_dev, std::abs(rec.m4 / it->second - 1.0));
  }
  rows.push_back(inequality_check("m4-ode-maxrel", rel_dev, 0.0, 0.05));

  const double star = m4_fixed_point(3.0, cfg.model);
  const double cap = std::max(run.records.front().m4, star);
  rows.push_back(inequality_check("m4-sup-bounded", sup, cap, 0.05 * cap));

  return rows;
}

std::vector<CheckRow> cooling_convergence(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  const struct {
    const char* name;
    IcKind kind;
  } shapes[] = {{"gaussian", IcKind::gaussian}, {"twopoint", IcKind::two_point}};

  for (int si = 0; si < 2; ++si) {
    SimConfig cfg;
    cfg.name = "cooling-convergence";
    cfg.family = Family::selfsimilar;
    cfg.seed = block_seed(seed, kTagCooling, si);
    cfg.n = 2000;
    cfg.d = 3;
    cfg.model.e = 0.5;
    cfg.ic_a.kind = shapes[si].kind;
    cfg.ic_a.theta0 = 1.0;
    cfg.ic_a.mean = Eigen::Vector3d::Zero();
    cfg.dtau = 0.009;
    cfg.tau_end = 10.0;
    cfg.record_every = 1.0;
    cfg.validate();

    // Walk the rescaled flow and its replica on the unit grid, keeping the
    // states; consecutive-time distances must shrink into the noise floor.
    Rng ra = Rng::stream(cfg.seed, 0);
    Rng rr = Rng::stream(cfg.seed, 2);
    VelocityEnsemble a = make_ic(cfg.ic_a, cfg.d, cfg.n, ra);
    VelocityEnsemble rep = make_ic(cfg.ic_a, cfg.d, cfg.n, rr);
    std::vector<Eigen::MatrixXd> snaps;
    std::vector<double> self;
    for (int k = 0; k <= 10; ++k) {
      advance_ensemble(a, cfg, static_cast<double>(k), ra);
      advance_ensemble(rep, cfg, static_cast<double>(k), rr);
      snaps.push_back(a.v);
      self.push_back(w2_exact_assignment(a.v, rep.v).distance);
    }
    std::vector<double> step(10);
    for (int k = 0; k < 10; ++k)
      step[k] = w2_exact_assignment(snaps[k], snaps[k + 1]).distance;
    const double floor = *std::max_element(self.begin(), self.end());

    const std::string base = std::string("cooling-") + shapes[si].name;
    for (int k = 1; k < 10; ++k)
      rows.push_back(inequality_check(
          label((base + "-step").c_str(), k), step[k], step[k - 1],
          3.0 * floor));
    rows.push_back(inequality_check(base + "-floor", step[9],
                                    3.0 * self[10], 0.0));
  }

  return rows;
}

std::vector<CheckRow> cross_section_checks(std::uint64_t seed) {
  std::vector<CheckRow> rows;

  const CrossSection lin = CrossSection::from_density(
      [](double c) { return (1.0 + c) / (8.0 * kPi); });

  // Kernel-averaged contraction factor for the tilted kernel against its
  // closed form (3 + e^2)/4 + (1 - e^2)/12.
  double fdev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double e = k / 10.0;
    const double expect =
        0.25 * (3.0 + e * e) + (1.0 - e * e) / 12.0;
    fdev = std::max(fdev,
                    std::abs(contraction_factor_cross_section(e, lin) - expect));
  }
  rows.push_back(inequality_check("xs-linear-factor-dev", fdev, 0.0, 1e-9));

  // Goodness of fit of the cosine sampler: 20 equal-width bins, expected
  // counts from the exact cdf F(c) = (1+c)^2/4; the bound is the 0.999
  // quantile of chi-square with 19 degrees of freedom.
  Rng rng(block_seed(seed, kTagCrossSection, 0));
  const int draws = 200000;
  std::vector<int> counts(20, 0);
  for (int i = 0; i < draws; ++i) {
    const double c = lin.sample_cos(rng);
    int bin = static_cast<int>((c + 1.0) / 0.1);
    bin = std::clamp(bin, 0, 19);
    ++counts[bin];
  }
  double chi2 = 0.0;
  for (int b = 0; b < 20; ++b) {
    const double lo = -1.0 + 0.1 * b, hi = lo + 0.1;
    const double prob = 0.25 * ((1.0 + hi) * (1.0 + hi) - (1.0 + lo) * (1.0 + lo));
    const double expect = draws * prob;
    chi2 += (counts[b] - expect) * (counts[b] - expect) / expect;
  }
  rows.push_back(inequality_check("xs-sampler-chi2", chi2, 43.8, 0.0));

  // Energy decay under one collision per particle per unit time with the
  // tilted kernel: rate (1 - e^2)(1 - mean_cos)/4 = 1/8 at e = 0.5.
  SimConfig cfg;
  cfg.name = "xs-decay";
  cfg.family = Family::unit_rate;
  cfg.seed = block_seed(seed, kTagCrossSection, 1);
  cfg.n = 30000;
  cfg.d = 3;
  cfg.model.e = 0.5;
  cfg.xs = lin;
  cfg.ic_a = gaussian_ic(1.0, Eigen::Vector3d::Zero());
  cfg.dtau = 0.05;
  cfg.tau_end = 3.0;
  cfg.record_every = 0.25;
  const SingleRun run = run_single(cfg);
  std::vector<double> taus, logs;
  for (const SingleRecord& rec : run.records) {
    taus.push_back(rec.tau);
    logs.push_back(std::log(rec.theta));
  }
  const double rate_hat = -fit_slope(taus, logs);
  rows.push_back(equality_check("xs-energy-decay-rate", rate_hat, 0.125, 0.00625));

  return rows;
}

}  // namespace checks

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "lemmas", "gain",    "flow", "diffusive", "cross-section",
      "kac",    "moments", "all"};
  return names;
}

bool known_suite(const std::string& name) {
  const auto& names = suite_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

VerificationReport run_suite(const std::string& suite, const SimConfig& cfg) {
  if (!known_suite(suite)) {
    std::string msg = "unknown suite '" + suite + "' (expected one of";
    for (const auto& n : suite_names()) msg += " " + n;
    throw std::invalid_argument(msg + ")");
  }

  using Block = std::vector<CheckRow> (*)(std::uint64_t);
  std::vector<Block> blocks;
  const bool all = suite == "all";
  if (all || suite == "lemmas") {
    blocks.push_back(&checks::analytic_constants);
    blocks.push_back(&checks::ot_exactness);
  }
  if (all || suite == "gain") {
    blocks.push_back(&checks::sphere_circle);
    blocks.push_back(&checks::gain_contraction);
  }
  if (all || suite == "flow") {
    blocks.push_back(&checks::temperature_laws);
    blocks.push_back(&checks::flow_contraction);
    blocks.push_back(&checks::cooling_convergence);
  }
  if (all || suite == "diffusive") blocks.push_back(&checks::diffusive_laws);
  if (all || suite == "cross-section")
    blocks.push_back(&checks::cross_section_checks);
  if (all || suite == "kac") blocks.push_back(&checks::kac_relaxation);
  if (all || suite == "moments") blocks.push_back(&checks::moment_ode);

  // Blocks are pure functions of the master seed, so they may run
  // concurrently; rows are appended in declaration order either way, which
  // keeps the report bytes independent of scheduling.
  std::vector<std::future<std::vector<CheckRow>>> futures;
  futures.reserve(blocks.size());
  for (Block b : blocks)
    futures.push_back(std::async(std::launch::async, b, cfg.seed));

  VerificationReport report;
  report.suite = suite;
  report.master_seed = cfg.seed;
  for (auto& f : futures)
    for (auto& row : f.get()) report.rows.push_back(std::move(row));
  return report;
}

}  // namespace w2gas
