// Exact quadratic-cost optimal transport between finite samples and small
// weighted measures, plus the sphere/circle transport geometry used by the
// collision-operator contraction estimates.
//
// Three exact routes, each checkable against the others on overlapping
// instances:
//   w2_exact_1d          sorted order statistics, equal-size 1D samples
//   w2_exact_assignment  Jonker-Volgenant shortest augmenting paths, d <= 3
//   w2_discrete_lp       successive-shortest-path min-cost flow, <= 64 atoms
#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "w2gas/frame.hpp"
#include "w2gas/rng.hpp"

namespace w2gas {

// Hard size cap for the assignment solver (cubic worst case; geometric
// instances at suite sizes stay far below it).
inline constexpr int kAssignmentCap = 16384;
// Cap per side for the weighted LP backend.
inline constexpr int kLpCap = 64;

// Finitely supported probability measure in R^d, d in {1,2,3}. Atoms are
// columns of `atoms`; weights are strictly positive and sum to 1 within
// 1e-12. Zero-weight atoms are dropped on construction; negative weights and
// mismatched sizes are rejected.
struct DiscreteMeasure {
  Eigen::MatrixXd atoms;
  Eigen::VectorXd weights;

  DiscreteMeasure(Eigen::MatrixXd pts, Eigen::VectorXd w);
  static DiscreteMeasure uniform(const Eigen::MatrixXd& pts);

  int dim() const { return static_cast<int>(atoms.rows()); }
  int size() const { return static_cast<int>(atoms.cols()); }
  Eigen::VectorXd mean() const;
};

struct PlanEntry {
  int src;
  int dst;
  double mass;
  double sq_cost;  // squared Euclidean distance between the paired atoms
};

struct TransportPlan {
  std::vector<PlanEntry> entries;
  double squared_cost = 0.0;
};

struct W2Result {
  double distance = 0.0;
  TransportPlan plan;
};

// Marginal consistency of a plan against its endpoints, within tol on every
// row and column sum and on the recomputed total cost.
bool plan_matches_marginals(const TransportPlan& plan, const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double tol = 1e-10);

// Rows "src,dst,mass,sq_cost", one per plan entry.
void write_plan_csv(const TransportPlan& plan, std::ostream& out);

// Equal-size empirical samples on the line; exact by sorting.
double w2_exact_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// Equal-size empirical samples in R^d, d <= 3, N <= kAssignmentCap. Exact
// optimal permutation; costs are evaluated on the fly, no N^2 matrix is
// stored. Optimality of the returned matching is certified in the tests via
// the dual variables exposed here.
struct AssignmentW2 {
  double distance = 0.0;
  TransportPlan plan;
  std::vector<int> assignment;       // source i -> target assignment[i]
  std::vector<double> row_potential;  // dual u
  std::vector<double> col_potential;  // dual v; c_ij - u_i - v_j >= 0
};
AssignmentW2 w2_exact_assignment(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y);

// Weighted measures with at most kLpCap atoms per side. The solver verifies
// its own optimality certificate (dual feasibility + complementary
// slackness) before returning.
W2Result w2_discrete_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

// Pushforward of the temperature scaling v -> v / sqrt(theta).
DiscreteMeasure scale_measure(const DiscreteMeasure& mu, double theta);

// Distance from an empirical sample (columns) to a point mass at `a`:
// sqrt of the mean squared distance, no pairing needed.
double w2_to_dirac(const Eigen::MatrixXd& x, const Eigen::VectorXd& a);

// ---------------------------------------------------------------------------
// Uniform distributions on spheres and circles in R^3.

struct SphereSpec {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
};

struct CircleSpec {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // normal to the circle plane
};

// Optimal map between uniform sphere distributions. A translation when the
// radii agree, otherwise the homothety about the unique pivot fixed by
// (O - pivot)/r = (O' - pivot)/r'. A zero-radius source is a point mass and
// admits no map (the optimal plan is the product measure); that case is
// reported as kind point_source and apply() is invalid. In every case the
// squared transport cost is |O' - O|^2 + (r' - r)^2.
struct SphereMap {
  enum class Kind { translation, homothety, point_source };
  Kind kind = Kind::translation;
  Eigen::Vector3d shift = Eigen::Vector3d::Zero();  // translation only
  Eigen::Vector3d pivot = Eigen::Vector3d::Zero();  // homothety only
  double factor = 1.0;                              // homothety only
  double squared_cost = 0.0;

  Eigen::Vector3d apply(const Eigen::Vector3d& v) const;
};
SphereMap sphere_transport_map(const SphereSpec& a, const SphereSpec& b);

// Upper bound for the squared distance between uniform circle distributions:
// |c' - c|^2 + r^2 + r'^2 - r r' (1 + |axis . axis'|). Always >= 0.
double circle_cost_bound(const CircleSpec& a, const CircleSpec& b);

// Samplers for the empirical checks of the two bounds above.
Eigen::MatrixXd sample_sphere(const SphereSpec& s, int n, Rng& rng);
Eigen::MatrixXd sample_circle(const CircleSpec& c, int n, Rng& rng);

}  // namespace w2gas
