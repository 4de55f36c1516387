#include "w2gas/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "w2gas/accum.hpp"

namespace w2gas {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_dist(const Eigen::MatrixXd& x, int i, const Eigen::MatrixXd& y,
               int j) {
  return (x.col(i) - y.col(j)).squaredNorm();
}

// Hot path of the assignment solver: column-major point storage with the
// dimension fixed at compile time. row()/col() pin one endpoint in registers
// for the scan loops.
template <int D>
struct PointSqDist {
  const double* x;
  const double* y;

  struct Bound {
    double a[D];
    const double* pts;
    double operator()(int k) const {
      const double* b = pts + D * k;
      double s = 0.0;
      for (int r = 0; r < D; ++r) {
        const double d = a[r] - b[r];
        s += d * d;
      }
      return s;
    }
  };

  double operator()(int i, int j) const {
    const double* a = x + D * i;
    const double* b = y + D * j;
    double s = 0.0;
    for (int r = 0; r < D; ++r) {
      const double d = a[r] - b[r];
      s += d * d;
    }
    return s;
  }
  Bound row(int i) const {  // j -> cost(i, j)
    Bound bound;
    for (int r = 0; r < D; ++r) bound.a[r] = x[D * i + r];
    bound.pts = y;
    return bound;
  }
  Bound col(int j) const {  // i -> cost(i, j)
    Bound bound;
    for (int r = 0; r < D; ++r) bound.a[r] = y[D * j + r];
    bound.pts = x;
    return bound;
  }
};

// Dense Jonker-Volgenant assignment with on-the-fly costs. Column reduction,
// reduction transfer and two augmenting-row-reduction sweeps are the usual
// accelerators; the shortest-augmenting-path phase at the end is what
// guarantees optimality, so the sweeps carry an iteration guard against
// floating-point ties and hand any leftovers to that phase.
template <class CostFn>
double jv_solve(int n, CostFn cost, std::vector<int>& rowsol,
                std::vector<double>& u, std::vector<double>& v) {
  rowsol.assign(n, -1);
  u.assign(n, 0.0);
  v.assign(n, 0.0);
  std::vector<int> colsol(n, -1);

  if (n == 1) {
    rowsol[0] = 0;
    v[0] = cost(0, 0);
    Kahan total;
    total.add(v[0]);
    return total.value();
  }

  std::vector<int> matches(n, 0);
  for (int j = n - 1; j >= 0; --j) {
    const auto col_cost = cost.col(j);
    double best = col_cost(0);
    int imin = 0;
    for (int i = 1; i < n; ++i) {
      const double c = col_cost(i);
      if (c < best) {
        best = c;
        imin = i;
      }
    }
    v[j] = best;
    if (++matches[imin] == 1) {
      rowsol[imin] = j;
      colsol[j] = imin;
    } else {
      colsol[j] = -1;
    }
  }

  std::vector<int> free_rows;
  free_rows.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (matches[i] == 0) {
      free_rows.push_back(i);
    } else if (matches[i] == 1) {
      const int j1 = rowsol[i];
      const auto row_cost = cost.row(i);
      double slack = kInf;
      for (int j = 0; j < n; ++j)
        if (j != j1) slack = std::min(slack, row_cost(j) - v[j]);
      v[j1] -= slack;
    }
  }

  std::vector<int> next_free;
  for (int sweep = 0; sweep < 2; ++sweep) {
    next_free.clear();
    std::size_t k = 0;
    long guard = 0;
    const long guard_max = 60L * n + 1024;
    while (k < free_rows.size()) {
      if (++guard > guard_max) break;
      const int i = free_rows[k++];
      const auto row_cost = cost.row(i);
      double umin = row_cost(0) - v[0];
      double usubmin = kInf;
      int j1 = 0, j2 = -1;
      for (int j = 1; j < n; ++j) {
        const double h = row_cost(j) - v[j];
        if (h < usubmin) {
          if (h >= umin) {
            usubmin = h;
            j2 = j;
          } else {
            usubmin = umin;
            j2 = j1;
            umin = h;
            j1 = j;
          }
        }
      }
      int i0 = colsol[j1];
      if (umin < usubmin) {
        v[j1] -= usubmin - umin;
      } else if (i0 >= 0) {
        j1 = j2;
        i0 = colsol[j1];
      }
      rowsol[i] = j1;
      colsol[j1] = i;
      if (i0 >= 0) {
        if (umin < usubmin)
          free_rows[--k] = i0;
        else
          next_free.push_back(i0);
      }
    }
    for (std::size_t r = k; r < free_rows.size(); ++r)
      next_free.push_back(free_rows[r]);
    std::swap(free_rows, next_free);
  }

  // Shortest augmenting path per remaining free row. collist is partitioned
  // into READY [0,low), SCAN [low,up), TODO [up,n).
  std::vector<double> d(n);
  std::vector<int> pred(n), collist(n);
  for (const int freerow : free_rows) {
    const auto free_cost = cost.row(freerow);
    for (int j = 0; j < n; ++j) {
      d[j] = free_cost(j) - v[j];
      pred[j] = freerow;
      collist[j] = j;
    }
    int low = 0, up = 0, last = -1, endofpath = -1;
    double mind = 0.0;
    bool found = false;
    do {
      if (up == low) {
        last = low - 1;
        mind = d[collist[up++]];
        for (int k2 = up; k2 < n; ++k2) {
          const int j = collist[k2];
          const double h = d[j];
          if (h <= mind) {
            if (h < mind) {
              up = low;
              mind = h;
            }
            collist[k2] = collist[up];
            collist[up++] = j;
          }
        }
        for (int k2 = low; k2 < up; ++k2) {
          if (colsol[collist[k2]] < 0) {
            endofpath = collist[k2];
            found = true;
            break;
          }
        }
      }
      if (!found) {
        const int j1 = collist[low++];
        const int i = colsol[j1];
        const auto row_cost = cost.row(i);
        const double h = row_cost(j1) - v[j1] - mind;
        for (int k2 = up; k2 < n; ++k2) {
          const int j = collist[k2];
          const double v2 = row_cost(j) - v[j] - h;
          if (v2 < d[j]) {
            pred[j] = i;
            if (v2 == mind) {
              if (colsol[j] < 0) {
                endofpath = j;
                found = true;
                break;
              }
              collist[k2] = collist[up];
              collist[up++] = j;
            }
            d[j] = v2;
          }
        }
      }
    } while (!found);
    for (int k2 = 0; k2 <= last; ++k2) {
      const int j1 = collist[k2];
      v[j1] += d[j1] - mind;
    }
    int i;
    do {
      i = pred[endofpath];
      colsol[endofpath] = i;
      const int j1 = rowsol[i];
      rowsol[i] = endofpath;
      endofpath = j1;
    } while (i != freerow);
  }

  Kahan total;
  for (int i = 0; i < n; ++i) {
    const double c = cost(i, rowsol[i]);
    u[i] = c - v[rowsol[i]];
    total.add(c);
  }
  return total.value();
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Eigen::MatrixXd pts, Eigen::VectorXd w) {
  if (pts.rows() < 1 || pts.rows() > 3)
    throw std::invalid_argument("DiscreteMeasure: dimension must be 1, 2 or 3");
  if (pts.cols() != w.size())
    throw std::invalid_argument("DiscreteMeasure: atom/weight count mismatch");
  if (w.size() == 0) throw std::invalid_argument("DiscreteMeasure: empty");

  int kept = 0;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0)
      throw std::invalid_argument("DiscreteMeasure: negative weight");
    if (w[i] > 0.0) ++kept;
  }
  if (kept == 0) throw std::invalid_argument("DiscreteMeasure: all mass zero");

  atoms.resize(pts.rows(), kept);
  weights.resize(kept);
  int out = 0;
  Kahan total;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    atoms.col(out) = pts.col(i);
    weights[out] = w[i];
    total.add(w[i]);
    ++out;
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw std::invalid_argument("DiscreteMeasure: weights must sum to 1");
}

DiscreteMeasure DiscreteMeasure::uniform(const Eigen::MatrixXd& pts) {
  const int n = static_cast<int>(pts.cols());
  return DiscreteMeasure(pts, Eigen::VectorXd::Constant(n, 1.0 / n));
}

Eigen::VectorXd DiscreteMeasure::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim());
  for (int i = 0; i < size(); ++i) m += weights[i] * atoms.col(i);
  return m;
}

bool plan_matches_marginals(const TransportPlan& plan,
                            const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double tol) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(mu.size());
  Eigen::VectorXd col = Eigen::VectorXd::Zero(nu.size());
  Kahan total;
  for (const auto& e : plan.entries) {
    if (e.src < 0 || e.src >= mu.size() || e.dst < 0 || e.dst >= nu.size())
      return false;
    if (e.mass < 0.0) return false;
    row[e.src] += e.mass;
    col[e.dst] += e.mass;
    total.add(e.mass * e.sq_cost);
  }
  if ((row - mu.weights).cwiseAbs().maxCoeff() > tol) return false;
  if ((col - nu.weights).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(total.value() - plan.squared_cost) <= tol;
}

void write_plan_csv(const TransportPlan& plan, std::ostream& out) {
  out << "src,dst,mass,sq_cost\n";
  char line[128];
  for (const auto& e : plan.entries) {
    std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g\n", e.src, e.dst,
                  e.mass, e.sq_cost);
    out << line;
  }
}

double w2_exact_1d(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size() || x.size() == 0)
    throw std::invalid_argument("w2_exact_1d: need equal nonzero sizes");
  std::vector<double> xs(x.data(), x.data() + x.size());
  std::vector<double> ys(y.data(), y.data() + y.size());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  Kahan acc;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double diff = xs[i] - ys[i];
    acc.add(diff * diff);
  }
  return std::sqrt(acc.value() / static_cast<double>(xs.size()));
}

AssignmentW2 w2_exact_assignment(const Eigen::MatrixXd& x,
                                 const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows())
    throw std::invalid_argument("w2_exact_assignment: dimension mismatch");
  if (x.rows() < 1 || x.rows() > 3)
    throw std::invalid_argument("w2_exact_assignment: dimension must be <= 3");
  if (x.cols() != y.cols() || x.cols() == 0)
    throw std::invalid_argument("w2_exact_assignment: need equal sizes");
  const int n = static_cast<int>(x.cols());
  if (n > kAssignmentCap)
    throw std::invalid_argument("w2_exact_assignment: size exceeds cap");

  AssignmentW2 res;
  double total = 0.0;
  switch (x.rows()) {
    case 1:
      total = jv_solve(n, PointSqDist<1>{x.data(), y.data()}, res.assignment,
                       res.row_potential, res.col_potential);
      break;
    case 2:
      total = jv_solve(n, PointSqDist<2>{x.data(), y.data()}, res.assignment,
                       res.row_potential, res.col_potential);
      break;
    default:
      total = jv_solve(n, PointSqDist<3>{x.data(), y.data()}, res.assignment,
                       res.row_potential, res.col_potential);
      break;
  }

  res.plan.entries.reserve(n);
  const double mass = 1.0 / n;
  for (int i = 0; i < n; ++i)
    res.plan.entries.push_back(
        {i, res.assignment[i], mass, sq_dist(x, i, y, res.assignment[i])});
  res.plan.squared_cost = total / n;
  res.distance = std::sqrt(res.plan.squared_cost);
  return res;
}

W2Result w2_discrete_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (mu.dim() != nu.dim())
    throw std::invalid_argument("w2_discrete_lp: dimension mismatch");
  const int m = mu.size(), n = nu.size();
  if (m > kLpCap || n > kLpCap)
    throw std::invalid_argument("w2_discrete_lp: atom count exceeds cap");

  Eigen::MatrixXd c(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = sq_dist(mu.atoms, i, nu.atoms, j);

  Eigen::VectorXd supply = mu.weights;
  Eigen::VectorXd demand = nu.weights;
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(m, n);
  // Node potentials: reduced cost of arc i->j is c(i,j) + ps[i] - pt[j].
  Eigen::VectorXd ps = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd pt = Eigen::VectorXd::Zero(n);

  const double mass_eps = 1e-15;
  std::vector<double> dist(m + n);
  std::vector<int> from(m + n);  // predecessor node in the search forest
  std::vector<char> done(m + n);

  long rounds = 0;
  const long round_cap = 4L * kLpCap * kLpCap;
  for (;;) {
    double remaining = 0.0;
    for (int i = 0; i < m; ++i) remaining += supply[i];
    if (remaining <= m * mass_eps) break;
    if (++rounds > round_cap)
      throw std::runtime_error("w2_discrete_lp: augmentation cap exceeded");

    // Multi-source Dijkstra over the residual graph (nodes: sources then
    // sinks). Reduced costs are nonnegative up to roundoff; clamp at 0.
    for (int a = 0; a < m + n; ++a) {
      dist[a] = kInf;
      from[a] = -1;
      done[a] = 0;
    }
    for (int i = 0; i < m; ++i)
      if (supply[i] > mass_eps) dist[i] = 0.0;

    for (;;) {
      int best = -1;
      double bd = kInf;
      for (int a = 0; a < m + n; ++a)
        if (!done[a] && dist[a] < bd) {
          bd = dist[a];
          best = a;
        }
      if (best < 0) break;
      done[best] = 1;
      if (best < m) {
        const int i = best;
        for (int j = 0; j < n; ++j) {
          const double rc = std::max(0.0, c(i, j) + ps[i] - pt[j]);
          if (dist[i] + rc < dist[m + j]) {
            dist[m + j] = dist[i] + rc;
            from[m + j] = i;
          }
        }
      } else {
        const int j = best - m;
        for (int i = 0; i < m; ++i) {
          if (flow(i, j) <= mass_eps) continue;
          const double rc = std::max(0.0, pt[j] - ps[i] - c(i, j));
          if (dist[m + j] + rc < dist[i]) {
            dist[i] = dist[m + j] + rc;
            from[i] = m + j;
          }
        }
      }
    }

    int target = -1;
    double bestd = kInf;
    for (int j = 0; j < n; ++j)
      if (demand[j] > mass_eps && dist[m + j] < bestd) {
        bestd = dist[m + j];
        target = j;
      }
    if (target < 0)
      throw std::runtime_error("w2_discrete_lp: no augmenting path");

    // Potentials absorb the distances so future reduced costs stay >= 0 and
    // path arcs become tight; unreachable nodes shift by the full path
    // length, which keeps arcs into them feasible.
    for (int i = 0; i < m; ++i) ps[i] += std::min(dist[i], bestd);
    for (int j = 0; j < n; ++j) pt[j] += std::min(dist[m + j], bestd);

    // Walk the path back from the target sink, find the bottleneck.
    double delta = demand[target];
    for (int a = m + target; from[a] >= 0; a = from[a]) {
      const int b = from[a];
      if (a >= m && b < m) {
        // forward arc b -> a: uncapacitated
      } else {
        // backward arc: capacity is the current flow on (a, b - m)
        delta = std::min(delta, flow(a, b - m));
      }
      if (b < m && from[b] < 0) delta = std::min(delta, supply[b]);
    }
    for (int a = m + target; from[a] >= 0; a = from[a]) {
      const int b = from[a];
      if (a >= m && b < m)
        flow(b, a - m) += delta;
      else
        flow(a, b - m) -= delta;
      if (b < m && from[b] < 0) supply[b] -= delta;
    }
    demand[target] -= delta;
  }

  // Optimality certificate: dual feasibility everywhere, tight on support.
  double worst_feas = 0.0, worst_slack = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const double rc = c(i, j) + ps[i] - pt[j];
      worst_feas = std::min(worst_feas, rc);
      if (flow(i, j) > 1e-12) worst_slack = std::max(worst_slack, std::abs(rc));
    }
  if (worst_feas < -1e-7 || worst_slack > 1e-7)
    throw std::runtime_error("w2_discrete_lp: optimality certificate failed");

  W2Result res;
  Kahan total;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (flow(i, j) > mass_eps) {
        res.plan.entries.push_back({i, j, flow(i, j), c(i, j)});
        total.add(flow(i, j) * c(i, j));
      }
  res.plan.squared_cost = std::max(0.0, total.value());
  res.distance = std::sqrt(res.plan.squared_cost);
  return res;
}

DiscreteMeasure scale_measure(const DiscreteMeasure& mu, double theta) {
  if (!(theta > 0.0))
    throw std::invalid_argument("scale_measure: theta must be positive");
  return DiscreteMeasure(mu.atoms / std::sqrt(theta), mu.weights);
}

double w2_to_dirac(const Eigen::MatrixXd& x, const Eigen::VectorXd& a) {
  if (x.rows() != a.size())
    throw std::invalid_argument("w2_to_dirac: dimension mismatch");
  if (x.cols() == 0) throw std::invalid_argument("w2_to_dirac: empty sample");
  Kahan acc;
  for (int i = 0; i < x.cols(); ++i) acc.add((x.col(i) - a).squaredNorm());
  return std::sqrt(acc.value() / static_cast<double>(x.cols()));
}

Eigen::Vector3d SphereMap::apply(const Eigen::Vector3d& v) const {
  switch (kind) {
    case Kind::translation:
      return v + shift;
    case Kind::homothety:
      return pivot + factor * (v - pivot);
    case Kind::point_source:
      throw std::logic_error("SphereMap::apply: point source has no map");
  }
  throw std::logic_error("SphereMap::apply: bad kind");
}

SphereMap sphere_transport_map(const SphereSpec& a, const SphereSpec& b) {
  if (a.radius < 0.0 || b.radius < 0.0)
    throw std::invalid_argument("sphere_transport_map: negative radius");
  SphereMap map;
  const Eigen::Vector3d dO = b.center - a.center;
  const double dr = b.radius - a.radius;
  map.squared_cost = dO.squaredNorm() + dr * dr;
  if (std::abs(dr) <= 1e-12 * std::max(1.0, a.radius + b.radius)) {
    map.kind = SphereMap::Kind::translation;
    map.shift = dO;
  } else if (a.radius == 0.0) {
    map.kind = SphereMap::Kind::point_source;
  } else {
    map.kind = SphereMap::Kind::homothety;
    map.pivot = (b.radius * a.center - a.radius * b.center) / dr;
    map.factor = b.radius / a.radius;
  }
  return map;
}

double circle_cost_bound(const CircleSpec& a, const CircleSpec& b) {
  if (a.radius < 0.0 || b.radius < 0.0)
    throw std::invalid_argument("circle_cost_bound: negative radius");
  const double na = a.axis.norm(), nb = b.axis.norm();
  if (!(na > 1e-300) || !(nb > 1e-300))
    throw std::invalid_argument("circle_cost_bound: zero axis");
  const double cosang = std::abs(a.axis.dot(b.axis)) / (na * nb);
  return (b.center - a.center).squaredNorm() + a.radius * a.radius +
         b.radius * b.radius - a.radius * b.radius * (1.0 + cosang);
}

Eigen::MatrixXd sample_sphere(const SphereSpec& s, int n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("sample_sphere: n must be positive");
  Eigen::MatrixXd pts(3, n);
  for (int i = 0; i < n; ++i)
    pts.col(i) = s.center + s.radius * rng.unit_sphere();
  return pts;
}

Eigen::MatrixXd sample_circle(const CircleSpec& c, int n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("sample_circle: n must be positive");
  const Frame f = frame_from_axis(c.axis);
  Eigen::MatrixXd pts(3, n);
  for (int i = 0; i < n; ++i) {
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    pts.col(i) =
        c.center + c.radius * (std::cos(phi) * f.t1 + std::sin(phi) * f.t2);
  }
  return pts;
}

}  // namespace w2gas
