// Orthonormal frame completion around a direction in R^3.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace w2gas {

struct Frame {
  Eigen::Vector3d t1;
  Eigen::Vector3d t2;
  Eigen::Vector3d axis;
};

// Completes a unit axis k to a right-handed orthonormal triple (t1, t2, k).
// t1 = normalize(e_z x k) away from the poles; axes within 1e-12 of +-e_z
// take t1 = e_x so the branch is deterministic and documented.
inline Frame frame_from_axis(const Eigen::Vector3d& k_in) {
  const double n = k_in.norm();
  if (!(n > 1e-300)) throw std::invalid_argument("frame_from_axis: zero axis");
  const Eigen::Vector3d k = k_in / n;
  Frame f;
  f.axis = k;
  const double rho = std::hypot(k.x(), k.y());
  if (rho > 1e-12) {
    f.t1 = Eigen::Vector3d(-k.y(), k.x(), 0.0) / rho;
  } else {
    f.t1 = Eigen::Vector3d(1.0, 0.0, 0.0);
  }
  f.t2 = k.cross(f.t1);
  return f;
}

}  // namespace w2gas
