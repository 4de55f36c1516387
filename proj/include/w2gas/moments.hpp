// Velocity-moment observables and the closed fourth-moment flow of the
// scaled dissipative gas.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "w2gas/collision.hpp"

namespace w2gas {

// Centered moments of an empirical velocity set (columns = particles).
//   mean    sample mean velocity
//   p_tensor  <c c^T> with c = v - mean
//   theta   tr(p_tensor) / d
//   m2      tr(p_tensor) = <|c|^2>
//   m4      <|c|^4>
//   m2bar   |p_tensor|_F^2, the contracted square driving the m4 flow;
//           equals m2^2/d for isotropic states and is always >= m2^2/d.
struct MomentState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd p_tensor;
  double theta = 0.0;
  double m2 = 0.0;
  double m4 = 0.0;
  double m2bar = 0.0;
};

// Two-pass compensated evaluation; exact centering guards the quartic
// moment against cancellation at large N.
MomentState moments_of(const Eigen::MatrixXd& v);

// Algebraic cooling law of the homogeneous gas in physical time,
//   theta(t) = (theta0^{-1/2} + (1 - e^2) B t / 8)^{-2}.
// The elastic gas does not cool; that case returns theta0 with the flag set.
struct CoolingLaw {
  double theta = 0.0;
  bool elastic = false;
};
CoolingLaw haff_theta(double t, double theta0, const ModelParams& pm);

// Coefficients of the quartic collision moment in the scaled flow. With
// eps = (1-e)/2 and eps' = (1+e)/2:
//   alpha = (eps^2 + eps'^2)^2 - 1 + (4/3) eps^2 eps'^2
//   beta  = 2 (eps^2 + eps'^2 - 1 + (2/3) eps'^2)
//   gamma = 4 (eps^2 - 1)
//   lambda = -(alpha + beta + gamma)/8
//   mu1    =  (alpha + beta - gamma)/8
//   mu2    =  (alpha - beta)/4
struct FourthMomentCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
};
FourthMomentCoefficients fourth_moment_coefficients(double e);

// Right-hand side of the scaled fourth-moment equation
//   dm4/dtau = (4 - E lambda) m4 + E (mu1 m2^2 + mu2 m2bar),
// with E the collision rate per unit scaled time. m2 and m2bar are conserved
// along the scaled flow and enter as constants.
double m4_rhs(double m4, double m2, double m2bar, const ModelParams& pm);

// Stationary value of m4 under the isotropic closure m2bar = m2^2/3.
double m4_fixed_point(double m2, const ModelParams& pm);

// Classic fourth-order Runge-Kutta trace of the m4 flow from ms0 up to
// tau_end; dtau must not exceed 0.01. Returns (tau, m4) at every step
// boundary including tau = 0.
std::vector<std::pair<double, double>> integrate_m4(const MomentState& ms0,
                                                    const ModelParams& pm,
                                                    double tau_end,
                                                    double dtau);

}  // namespace w2gas
