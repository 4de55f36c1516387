// Adaptive Simpson integration with Richardson correction. The integrands in
// this project (angular cross-section weights, power-of-cosine rate
// integrals) are smooth on the requested intervals, so Simpson refinement
// reaches 1e-10 absolute tolerance quickly; the depth cap only guards against
// pathological user-supplied densities.
#pragma once

#include <cmath>
#include <stdexcept>

namespace w2gas {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adapt(F& f, double a, double fa, double b, double fb, double m,
             double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("integrate: refinement limit hit");
  if (std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
  if (!(a <= b)) throw std::invalid_argument("integrate: interval reversed");
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adapt(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace w2gas
