// Collision-rule checks: exact conservation identities, the dissipation
// formula, cross-section construction and sampling, and the frozen values of
// the induced contraction factors and rates.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "w2gas/accum.hpp"
#include "w2gas/collision.hpp"
#include "w2gas/rng.hpp"

using namespace w2gas;

namespace {

Eigen::Vector3d random_vec(Rng& rng, double scale = 1.0) {
  return scale * rng.normal3();
}

// The density (1 + c)/(8 pi) integrates to 1/2 over the solid angle, so the
// recorded residual must be exactly 1/2 and the normalized density twice the
// raw one.
double linear_raw(double c) { return (1.0 + c) / (8.0 * std::numbers::pi); }

std::string write_table(const std::string& name, const std::string& body) {
  const std::string path = "tmp_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("pair collision conserves momentum exactly") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double e = 0.05 + 0.95 * rng.uniform01();
    const Eigen::Vector3d v = random_vec(rng, 3.0);
    const Eigen::Vector3d w = random_vec(rng, 3.0);
    const Eigen::Vector3d sigma = rng.unit_sphere();
    const auto [vp, wp] = post_collision_pair(v, w, sigma, e);
    CHECK(((vp + wp) - (v + w)).norm() <= 1e-13 * (v + w).norm() + 1e-13);
  }
}

TEST_CASE("pair collision dissipates per the closed-form energy change") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const double e = 0.05 + 0.95 * rng.uniform01();
    const Eigen::Vector3d v = random_vec(rng, 2.0);
    const Eigen::Vector3d w = random_vec(rng, 2.0);
    const Eigen::Vector3d sigma = rng.unit_sphere();
    const auto [vp, wp] = post_collision_pair(v, w, sigma, e);

    const double before = v.squaredNorm() + w.squaredNorm();
    const double after = vp.squaredNorm() + wp.squaredNorm();
    // With u = (v - w)/2: delta = (1 - e^2) |u| (u.sigma - |u|) <= 0.
    const Eigen::Vector3d u = 0.5 * (v - w);
    const double predicted =
        (1.0 - e * e) * u.norm() * (u.dot(sigma) - u.norm());
    CHECK(after - before == doctest::Approx(predicted).epsilon(1e-10));
    CHECK(after <= before + 1e-12 * before);
  }
}

TEST_CASE("elastic pair collision conserves energy") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Vector3d v = random_vec(rng);
    const Eigen::Vector3d w = random_vec(rng);
    const auto [vp, wp] = post_collision_pair(v, w, rng.unit_sphere(), 1.0);
    const double before = v.squaredNorm() + w.squaredNorm();
    CHECK(vp.squaredNorm() + wp.squaredNorm() ==
          doctest::Approx(before).epsilon(1e-12));
  }
}

TEST_CASE("model parameter validation and the collision rate") {
  ModelParams pm;
  pm.e = 0.5;
  pm.validate();
  // 8 / (1 - 1/4) = 32/3.
  CHECK(pm.tau_collision_rate() == doctest::Approx(32.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS((ModelParams{0.0, 1.0, 0.0, 0.0}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1.2, 1.0, 0.0, 0.0}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{0.5, 0.0, 0.0, 0.0}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{0.5, 1.0, -1.0, 0.0}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{0.5, 1.0, 1.0, 1.5}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1.0, 1.0, 0.0, 0.0}.tau_collision_rate()),
                  std::invalid_argument);
}

TEST_CASE("isotropic cross-section: density, mean and sampling moments") {
  const CrossSection xs = CrossSection::constant();
  CHECK(xs.is_constant());
  CHECK(xs.normalization_residual() == 0.0);
  CHECK(xs.mean_cos() == 0.0);
  const double quarter_pi = 1.0 / (4.0 * std::numbers::pi);
  for (const double c : {-1.0, -0.3, 0.0, 0.7, 1.0})
    CHECK(xs.density(c) == doctest::Approx(quarter_pi).epsilon(1e-14));

  Rng rng(21);
  const int n = 200000;
  Kahan s1, s2;
  for (int i = 0; i < n; ++i) {
    const double c = xs.sample_cos(rng);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    s1.add(c);
    s2.add(c * c);
  }
  // E c = 0 (sd 0.0013), E c^2 = 1/3 (sd 0.00067); 4 sigma margins.
  CHECK(std::abs(s1.value() / n) < 0.006);
  CHECK(std::abs(s2.value() / n - 1.0 / 3.0) < 0.003);
}

TEST_CASE("linear cross-section: residual 1/2, mean cosine 1/3") {
  const CrossSection xs = CrossSection::from_density(linear_raw);
  CHECK_FALSE(xs.is_constant());
  CHECK(xs.normalization_residual() == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(xs.mean_cos() == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  // Normalized density is twice the raw one.
  for (const double c : {-0.9, 0.0, 0.5, 1.0})
    CHECK(xs.density(c) == doctest::Approx(2.0 * linear_raw(c)).epsilon(1e-9));

  Rng rng(22);
  const int n = 200000;
  Kahan s1;
  for (int i = 0; i < n; ++i) s1.add(xs.sample_cos(rng));
  // E c = 1/3, sd of the mean 0.00105; 4 sigma margin.
  CHECK(std::abs(s1.value() / n - 1.0 / 3.0) < 0.0045);
}

TEST_CASE("cross-section table: parsing, normalization, exact mean") {
  const std::string path = write_table("xs_linear.txt",
                                       "# cosine  density\n"
                                       "-1   0.0\n"
                                       " 0   0.039788735772973836  # 1/(8 pi)\n"
                                       " 1   0.079577471545947673\n");
  const CrossSection xs = CrossSection::from_table_file(path);
  CHECK_FALSE(xs.is_constant());
  CHECK(xs.normalization_residual() == doctest::Approx(0.5).epsilon(1e-10));
  // The interpolant is exactly (1 + c)/2 after normalization.
  CHECK(xs.mean_cos() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(xs.density(0.5) ==
        doctest::Approx(1.5 / (4.0 * std::numbers::pi)).epsilon(1e-12));
  std::remove(path.c_str());
}

TEST_CASE("cross-section table: malformed inputs fail with the line") {
  const std::string one_col = write_table("xs_onecol.txt", "-1 0\n0.5\n1 1\n");
  CHECK_THROWS_WITH_AS(CrossSection::from_table_file(one_col),
                       doctest::Contains("line 2"), std::runtime_error);
  std::remove(one_col.c_str());

  const std::string extra = write_table("xs_extra.txt", "-1 0 7\n1 1\n");
  CHECK_THROWS_WITH_AS(CrossSection::from_table_file(extra),
                       doctest::Contains("line 1"), std::runtime_error);
  std::remove(extra.c_str());

  const std::string unsorted =
      write_table("xs_unsorted.txt", "-1 0\n0.5 1\n0.2 1\n1 1\n");
  CHECK_THROWS_WITH_AS(CrossSection::from_table_file(unsorted),
                       doctest::Contains("increase"), std::runtime_error);
  std::remove(unsorted.c_str());

  const std::string short_span = write_table("xs_span.txt", "-0.5 1\n1 1\n");
  CHECK_THROWS_WITH_AS(CrossSection::from_table_file(short_span),
                       doctest::Contains("[-1, 1]"), std::runtime_error);
  std::remove(short_span.c_str());

  CHECK_THROWS_AS(CrossSection::from_table_file("no_such_table_file"),
                  std::runtime_error);
}

TEST_CASE("scattering direction: unit length and correct cosine law") {
  Rng rng(23);
  const CrossSection xs = CrossSection::from_density(linear_raw);
  const Eigen::Vector3d khat = Eigen::Vector3d(1.0, -2.0, 0.5).normalized();
  const int n = 200000;
  Kahan sc, st;
  const Frame f = frame_from_axis(khat);
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d sigma = sample_sigma(khat, xs, rng);
    CHECK(std::abs(sigma.norm() - 1.0) <= 1e-12);
    sc.add(sigma.dot(khat));
    st.add(sigma.dot(f.t1));
  }
  CHECK(std::abs(sc.value() / n - 1.0 / 3.0) < 0.0045);  // 4 sigma
  CHECK(std::abs(st.value() / n) < 0.006);               // azimuth symmetry
}

TEST_CASE("one-dimensional collision rule") {
  // p = 0 is a plain rotation: energy is exact.
  Rng rng(24);
  for (int trial = 0; trial < 100; ++trial) {
    const double v = rng.normal(), w = rng.normal();
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto [vp, wp] = kac_post_collision(v, w, t, 0.0);
    CHECK(vp * vp + wp * wp == doctest::Approx(v * v + w * w).epsilon(1e-12));
  }
  // p = 1, t = pi/4: both warped coefficients are 1/2.
  const auto [vp, wp] = kac_post_collision(1.0, 0.0, std::numbers::pi / 4.0, 1.0);
  CHECK(vp == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(wp == doctest::Approx(0.5).epsilon(1e-14));
  // Energy never grows for p >= 0.
  for (int trial = 0; trial < 100; ++trial) {
    const double v = rng.normal(), w = rng.normal();
    const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double p = 3.0 * rng.uniform01();
    const auto [a, b] = kac_post_collision(v, w, t, p);
    CHECK(a * a + b * b <= (v * v + w * w) * (1.0 + 1e-12));
  }
}

TEST_CASE("contraction factors: frozen values and bounds") {
  CHECK(contraction_factor_gain(1.0) == 1.0);
  CHECK(contraction_factor_gain(0.5) == doctest::Approx(13.0 / 16.0).epsilon(1e-14));
  CHECK_THROWS_AS(contraction_factor_gain(0.0), std::invalid_argument);
  CHECK_THROWS_AS(contraction_factor_gain(1.5), std::invalid_argument);

  const CrossSection iso = CrossSection::constant();
  const CrossSection lin = CrossSection::from_density(linear_raw);
  Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    const double e = 0.05 + 0.95 * rng.uniform01();
    CHECK(contraction_factor_cross_section(e, iso) ==
          doctest::Approx(contraction_factor_gain(e)).epsilon(1e-12));
    CHECK(contraction_factor_cross_section(e, lin) <= 1.0 + 1e-12);
  }
  // gamma = (3 + e^2)/4 + (1 - e^2)/12 at e = 1/2 is exactly 7/8.
  CHECK(contraction_factor_cross_section(0.5, lin) ==
        doctest::Approx(0.875).epsilon(1e-9));
}

TEST_CASE("one-dimensional relaxation rate") {
  CHECK(kac_rate(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kac_rate(1.0) == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(kac_rate(2.0) == doctest::Approx(3.0 / 16.0).epsilon(1e-10));
  for (const double p : {0.5, 3.0, 10.0}) {
    CHECK(kac_rate(p) > 0.0);
    CHECK(kac_rate(p) < 0.5);
  }
  CHECK_THROWS_AS(kac_rate(-1.0), std::invalid_argument);
}
