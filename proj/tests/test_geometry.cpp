#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "zeroset/geometry.hpp"

using namespace zeroset;
using std::numbers::pi;

TEST_CASE("sphere volumes at small k") {
  CHECK(sphere_volume(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sphere_volume(1) == doctest::Approx(2 * pi).epsilon(1e-14));
  CHECK(sphere_volume(2) == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(sphere_volume(3) == doctest::Approx(2 * pi * pi).epsilon(1e-14));
}

TEST_CASE("sphere volume recurrence vol(S^{k+2}) = 2 pi vol(S^k)/(k+1)") {
  for (int k = 0; k <= 60; ++k) {
    const double lhs = sphere_volume(k + 2);
    const double rhs = 2 * pi * sphere_volume(k) / (k + 1);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("gamma function values and recurrence") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(pi)).epsilon(1e-13));
  CHECK(gamma_fn(3.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
  for (double x = 0.1; x <= 40.0; x += 0.77) {
    CHECK(gamma_fn(x + 1) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-12));
  }
}

TEST_CASE("multinomial coefficients") {
  const std::array<int, 2> a11{1, 1};
  CHECK(multinomial(2, a11) == 2.0);
  const std::array<int, 2> a22{2, 2};
  CHECK(multinomial(4, a22) == 6.0);
  const std::array<int, 3> a334{3, 3, 4};
  CHECK(multinomial(10, a334) == 4200.0);  // 10!/(3!3!4!)
  const std::array<int, 20> ones = [] {
    std::array<int, 20> v{};
    v.fill(1);
    return v;
  }();
  CHECK(multinomial(20, ones) ==
        doctest::Approx(2432902008176640000.0).epsilon(1e-15));  // 20!
  const std::array<int, 3> bad{1, 1, 1};
  CHECK_THROWS_AS(multinomial(4, bad), std::invalid_argument);
  const std::array<int, 2> neg{-1, 3};
  CHECK_THROWS_AS(multinomial(2, neg), std::invalid_argument);
  // log-space route agrees with the exact one
  const std::array<int, 3> big{10, 15, 25};
  CHECK(std::exp(log_multinomial(50, big)) ==
        doctest::Approx(multinomial(50, big)).epsilon(1e-12));
}

TEST_CASE("DimPair validation") {
  CHECK_NOTHROW(DimPair(3, 1));
  CHECK_NOTHROW(DimPair(3, 3));
  CHECK_THROWS_AS(DimPair(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(DimPair(0, 0), std::invalid_argument);
}
