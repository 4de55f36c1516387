// Stochastic particle evolution of the dissipative gas. Each family draws
// Poisson(N * rate * dtau / 2) unordered pairs per step, uniformly with
// replacement across events and with distinct indices within a pair, and
// updates both partners; `rate` is the per-particle collision rate in the
// family's own clock. The stability guard dtau * rate <= 0.1 is enforced at
// configuration time.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "w2gas/collision.hpp"
#include "w2gas/moments.hpp"
#include "w2gas/rng.hpp"

namespace w2gas {

struct VelocityEnsemble {
  Eigen::MatrixXd v;  // d x N, columns are particles
  double time = 0.0;  // clock of the family that evolves this ensemble
  std::uint64_t collisions = 0;

  int dim() const { return static_cast<int>(v.rows()); }
  int size() const { return static_cast<int>(v.cols()); }
};

enum class Family { homogeneous, diffusive, selfsimilar, kac, unit_rate };

enum class IcKind { gaussian, cube, two_point, dirac, file };

struct IcSpec {
  IcKind kind = IcKind::gaussian;
  double theta0 = 1.0;
  Eigen::VectorXd mean;  // sized d at validation
  std::string path;      // IcKind::file only
};

struct OutputSpec {
  std::string dir;  // default: W2GAS_OUTDIR env var, else "."
  std::string csv;
  std::string svg;
  std::string snapshot;
  std::string report_csv;
};

// Validated product of the configuration parser; also constructible in code
// for the verification suites.
struct SimConfig {
  std::string name = "run";
  Family family = Family::homogeneous;
  std::uint64_t seed = 1;
  int n = 1000;
  int d = 3;
  ModelParams model;
  KacParams kac;
  CrossSection xs = CrossSection::constant();
  IcSpec ic_a;
  std::optional<IcSpec> ic_b;  // present => paired run
  bool replica_slack = true;   // evolve a third stream for the noise floor
  double dtau = 0.01;
  double tau_end = 1.0;
  double record_every = 0.25;
  // Explicit record times (strictly increasing, >= 0). When set they replace
  // the tau_end/record_every grid; an empty list means "run nothing, emit
  // header-only output".
  std::optional<std::vector<double>> schedule;

  OutputSpec outputs;

  void validate() const;
  double collision_rate() const;  // per particle, in the family clock
};

// Initial conditions at prescribed mean and temperature.
VelocityEnsemble make_gaussian(int d, int n, const Eigen::VectorXd& mean,
                               double theta, Rng& rng);
VelocityEnsemble make_uniform_cube(int d, int n, const Eigen::VectorXd& mean,
                                   double theta, Rng& rng);
// Two symmetric atoms mean +- u with |u|^2 = d * theta; signs alternate so
// the sample mean is exact for even n.
VelocityEnsemble make_two_point(int d, int n, const Eigen::VectorXd& mean,
                                double theta);
VelocityEnsemble make_dirac(int d, int n, const Eigen::VectorXd& a);
VelocityEnsemble make_ic(const IcSpec& ic, int d, int n, Rng& rng);

// One step of each family. All advance ens.time by dtau.
void step_homogeneous(VelocityEnsemble& ens, const ModelParams& pm,
                      const CrossSection& xs, double dtau, Rng& rng);
void step_unit_rate(VelocityEnsemble& ens, double e, const CrossSection& xs,
                    double dtau, Rng& rng);
void step_diffusive(VelocityEnsemble& ens, const ModelParams& pm,
                    const CrossSection& xs, double dtau, Rng& rng);
void step_selfsimilar(VelocityEnsemble& ens, const ModelParams& pm,
                      const CrossSection& xs, double dtau, Rng& rng);
void step_kac(VelocityEnsemble& ens, const KacParams& kp, double dtau,
              Rng& rng);

// Logarithmic collision clock of the freely cooling gas and its inverse:
//   tau(t) = log(1 + (1-e^2) B sqrt(theta0) t / 8).
// Round trips are exact to relative 1e-12. Rejected for e = 1.
double tau_of_t(double t, double theta0, const ModelParams& pm);
double t_of_tau(double tau, double theta0, const ModelParams& pm);

// Exact transport distance between equal-size ensembles: sorted order
// statistics in one dimension, optimal assignment otherwise.
double empirical_w2(const VelocityEnsemble& a, const VelocityEnsemble& b);

struct SingleRecord {
  double tau = 0.0;
  double t = 0.0;  // physical time for the homogeneous family, else = tau
  double theta = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  Eigen::VectorXd mean;
};

struct SingleRun {
  std::vector<SingleRecord> records;
  VelocityEnsemble final_state;
};

struct PairedRecord {
  double tau = 0.0;
  double w2 = 0.0;
  double bound = 0.0;  // family contraction bound seeded by the first record
  double slack = 0.0;  // 3x replica self-distance; 0 when replica disabled
  double theta_a = 0.0, theta_b = 0.0;
  double m4_a = 0.0, m4_b = 0.0;
  Eigen::VectorXd mean_a, mean_b;
};

struct PairedRun {
  std::vector<PairedRecord> records;
  VelocityEnsemble final_a, final_b;
};

// Advances an ensemble to the target clock value in steps of at most
// cfg.dtau, dispatching on cfg.family. Building block for callers that need
// the ensemble itself between records; run_single / run_paired wrap it with
// the record grid.
void advance_ensemble(VelocityEnsemble& ens, const SimConfig& cfg,
                      double target, Rng& rng);

// Evolves one ensemble on the record grid (streams: seed/0 for particles).
SingleRun run_single(const SimConfig& cfg);

// Evolves two ensembles with independent derived streams (seed/0, seed/1)
// plus, when enabled, a replica of A (seed/2) whose distance to A provides
// the statistical slack; records the exact transport distance and the
// family's analytic bound on the record grid.
PairedRun run_paired(const SimConfig& cfg);

}  // namespace w2gas
