#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zeroset/kostlan.hpp"
#include "zeroset/zero_set_mc.hpp"

using namespace zeroset;
using std::numbers::pi;

TEST_CASE("root counting on fixed polynomials") {
  CHECK(count_real_roots(std::vector<double>{1, 0, 1}).count == 0);   // x^2 + 1
  CHECK(count_real_roots(std::vector<double>{-1, 0, 1}).count == 2);  // x^2 - 1
  CHECK(count_real_roots(std::vector<double>{-6, 11, -6, 1}).count == 3);
  CHECK(count_real_roots(std::vector<double>{5, 2}).count == 1);
  CHECK(count_real_roots(std::vector<double>{7}).count == 0);
  CHECK_THROWS_AS(count_real_roots(std::vector<double>{0, 0}),
                  std::invalid_argument);
  // trailing exact zeros reduce the degree
  CHECK(count_real_roots(std::vector<double>{-1, 0, 1, 0, 0}).count == 2);
  // a double root trips the near-double flag
  CHECK(count_real_roots(std::vector<double>{1, -2, 1}).ill_conditioned);
  // roots far outside the unit disk are found (reversed-chart path)
  CHECK(count_real_roots(std::vector<double>{-1e8, 0, 0, 1}).count == 1);
}

TEST_CASE("sturm oracle sanity") {
  CHECK(oracles::sturm_count_real_roots({1, 0, 1}) == 0);
  CHECK(oracles::sturm_count_real_roots({-1, 0, 1}) == 2);
  CHECK(oracles::sturm_count_real_roots({-6, 11, -6, 1}) == 3);
  CHECK(oracles::sturm_count_real_roots({0.25, -1.5, 1}) == 2);
}

TEST_CASE("companion counter agrees with exact Sturm on degree-30 draws") {
  RngStream rng(101, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const std::vector<double> c = sample_kss_univariate(30, rng);
    const RootCount companion = count_real_roots_companion(c);
    CHECK(companion.count == oracles::sturm_count_real_roots(c));
  }
}

TEST_CASE("winding counter agrees with the companion counter") {
  RngStream rng(103, 0);
  for (int d : {5, 12, 30, 80, 150, 300}) {
    const int reps = d <= 80 ? 60 : 25;
    for (int rep = 0; rep < reps; ++rep) {
      const std::vector<double> c = sample_kss_univariate(d, rng);
      const RootCount w = count_real_roots_winding(c);
      const RootCount comp = count_real_roots_companion(c);
      INFO("d=", d, " rep=", rep);
      CHECK(w.count == comp.count);
      CHECK(w.count >= 0);
      CHECK(w.count <= d);
      CHECK((w.count - d) % 2 == 0);
    }
  }
}

TEST_CASE("winding counter on non-KSS coefficient patterns") {
  RngStream rng(105, 0);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<double> c(41);
    for (double& v : c) v = rng.normal();  // flat random coefficients
    if (c.back() == 0.0) c.back() = 1.0;
    CHECK(count_real_roots_winding(c).count ==
          count_real_roots_companion(c).count);
  }
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> c(31);
    for (size_t k = 0; k < c.size(); ++k)
      c[k] = rng.normal() * std::exp(0.8 * (rng.uniform() - 0.5) * k);
    if (c.back() == 0.0) c.back() = 1.0;
    CHECK(count_real_roots_winding(c).count ==
          count_real_roots_companion(c).count);
  }
}

TEST_CASE("empirical root stats: degree one is exact") {
  const ZeroStats st = empirical_root_stats(1, 500, 107, 1);
  CHECK(st.mean == doctest::Approx(1.0));
  CHECK(st.var == doctest::Approx(0.0));
  CHECK(st.histogram[1] == 500);
}

TEST_CASE("empirical root stats at moderate degree") {
  const ZeroStats st = empirical_root_stats(16, 4000, 109, 1);
  // exact mean sqrt(d) = 4
  CHECK(std::abs(st.mean - 4.0) < st.mean_ci);
  CHECK(st.var > 0.0);
  CHECK(st.var_ci > 0.0);
  std::int64_t total = 0;
  for (size_t k = 0; k < st.histogram.size(); ++k) {
    if (k % 2 == 1) CHECK(st.histogram[k] == 0);  // parity: d even
    total += st.histogram[k];
  }
  CHECK(total == 4000);
}

TEST_CASE("empirical root stats are deterministic and thread-invariant") {
  const ZeroStats a = empirical_root_stats(12, 2000, 111, 1);
  const ZeroStats b = empirical_root_stats(12, 2000, 111, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.var == b.var);
  CHECK(a.histogram == b.histogram);
  const ZeroStats c = empirical_root_stats(12, 2000, 112, 1);
  CHECK(a.mean != c.mean);  // different seed, different draw
}

TEST_CASE("mean pipeline consistency at several degrees") {
  for (int d : {4, 25, 100}) {
    const ZeroStats st = empirical_root_stats(d, d <= 25 ? 4000 : 2000, 113, 1);
    CHECK(std::abs(st.mean - std::sqrt(static_cast<double>(d))) < st.mean_ci);
  }
}

TEST_CASE("line restriction of a Kostlan sample is again KSS") {
  RngStream rng(115, 0);
  const int d = 6;
  const int samples = 4000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d + 1, d + 1);
  std::vector<double> sqrt_binom(d + 1);
  for (int k = 0; k <= d; ++k) {
    std::array<int, 2> a{d - k, k};
    sqrt_binom[k] = std::sqrt(multinomial(d, a));
  }
  for (int s = 0; s < samples; ++s) {
    const KostlanSample ks = sample_kostlan(2, d, 1, rng);
    Eigen::Matrix<double, 3, 2> g;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
    const Eigen::Matrix<double, 3, 2> q =
        Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>>(g).householderQ() *
        Eigen::Matrix<double, 3, 2>::Identity();
    const std::vector<double> rc =
        restrict_kostlan_to_line(ks, 0, q.col(0), q.col(1));
    Eigen::VectorXd y(d + 1);
    for (int k = 0; k <= d; ++k) y[k] = rc[k] / sqrt_binom[k];
    acc += y * y.transpose();
  }
  acc /= samples;
  const double tol = 4.0 / std::sqrt(static_cast<double>(samples));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j)
      CHECK(std::abs(acc(i, j) - (i == j ? 1.0 : 0.0)) < tol);
}

TEST_CASE("crofton estimate is exactly pi for a projective line") {
  const ZeroStats st = crofton_length_stats(1, 40, 10, 117, 1);
  CHECK(st.mean == doctest::Approx(pi).epsilon(1e-12));
  CHECK(st.var == doctest::Approx(0.0));
}

TEST_CASE("crofton length at degree 9") {
  const ZeroStats st = crofton_length_stats(9, 400, 20, 119, 1);
  // E[length] = pi sqrt(d)
  CHECK(std::abs(st.mean - pi * 3.0) < 3.0 * st.mean_ci);
}

TEST_CASE("odd Hermite projections of the root count vanish") {
  // project #roots onto degree-1 and degree-3 Hermite functionals of a fixed
  // finite sub-basis of coefficient coordinates (d = 20, n = r = 1)
  const int d = 20;
  const std::array<int, 5> picks{0, 3, 7, 12, 20};
  const int samples = 30000;
  RngStream rng(121, 0);

  std::vector<double> lw(d + 1);
  const double lgd = std::lgamma(d + 1.0);
  double lmax = 0;
  for (int k = 0; k <= d; ++k) {
    lw[k] = 0.5 * (lgd - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0));
    lmax = std::max(lmax, lw[k]);
  }

  std::array<double, 5> s1{}, s1sq{}, s3{}, s3sq{};
  for (int rep = 0; rep < samples; ++rep) {
    std::array<double, 21> a;
    std::vector<double> coeffs(d + 1);
    for (int k = 0; k <= d; ++k) {
      a[k] = rng.normal();
      coeffs[k] = a[k] * std::exp(lw[k] - lmax);
    }
    if (coeffs.back() == 0.0) {
      --rep;
      continue;
    }
    const double count = count_real_roots(coeffs).count;
    for (size_t j = 0; j < picks.size(); ++j) {
      const double h1 = count * hermite(1, a[picks[j]]);
      const double h3 = count * hermite(3, a[picks[j]]);
      s1[j] += h1;
      s1sq[j] += h1 * h1;
      s3[j] += h3;
      s3sq[j] += h3 * h3;
    }
  }
  for (size_t j = 0; j < picks.size(); ++j) {
    const double m1 = s1[j] / samples;
    const double se1 = std::sqrt((s1sq[j] / samples - m1 * m1) / samples);
    CHECK(std::abs(m1) < 3 * se1);
    const double m3 = s3[j] / samples;
    const double se3 = std::sqrt((s3sq[j] / samples - m3 * m3) / samples);
    CHECK(std::abs(m3) < 3 * se3);
  }
}
