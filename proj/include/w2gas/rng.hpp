// Deterministic random streams: xoshiro256++ seeded through splitmix64.
// Everything downstream of a master seed is reproducible bit for bit, which is
// why no std:: distribution objects appear here (their output is
// implementation-defined and would break byte-identical reruns).
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace w2gas {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  // Independent stream k of a master seed. Streams with distinct ids are
  // seeded from disjoint splitmix64 trajectories.
  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t sm = master_seed;
    std::uint64_t base = splitmix64(sm);
    return Rng(base ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in the open interval (0,1); never returns 0 or 1, so it is safe
  // under log().
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer in [0, n). Multiply-shift bounding; bias is O(n/2^64).
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller, one spare cached per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double phi = 2.0 * std::numbers::pi * uniform01();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  Eigen::Vector3d normal3() {
    Eigen::Vector3d z;
    z << normal(), normal(), normal();
    return z;
  }

  // Uniform direction on S^2.
  Eigen::Vector3d unit_sphere() {
    for (;;) {
      Eigen::Vector3d z = normal3();
      const double n = z.norm();
      if (n > 1e-12) return z / n;
    }
  }

  // Poisson count by Knuth's product method, chunked so the comparison
  // threshold exp(-lambda_chunk) stays far from underflow for any lambda.
  std::int64_t poisson(double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson: lambda < 0");
    constexpr double chunk = 256.0;
    std::int64_t total = 0;
    while (lambda > 0.0) {
      const double step = lambda > chunk ? chunk : lambda;
      lambda -= step;
      const double threshold = std::exp(-step);
      double product = uniform01();
      while (product > threshold) {
        ++total;
        product *= uniform01();
      }
    }
    return total;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace w2gas
