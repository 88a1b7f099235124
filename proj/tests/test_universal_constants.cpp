#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zeroset/universal_constants.hpp"
#include "zeroset/zero_set_mc.hpp"

using namespace zeroset;
using std::numbers::pi;

namespace {

QuadratureConfig quick_config() {
  QuadratureConfig cfg;
  cfg.nodes_per_panel = 12;
  cfg.panels_above_split = 5;
  cfg.mc_samples_per_node = 20000;
  cfg.batches = 16;
  return cfg;
}

}  // namespace

TEST_CASE("quadrature config validation") {
  QuadratureConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.t_min = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = QuadratureConfig{};
  cfg.nodes_per_panel = 2;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = QuadratureConfig{};
  cfg.mc_samples_per_node = 10;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("leading constant algebra") {
  // r = n: the Kronecker term 2/vol(S^n) is present
  CHECK(leading_constant(DimPair(1, 1), 0.0) ==
        doctest::Approx(1.0 / pi).epsilon(1e-13));
  CHECK(leading_constant(DimPair(2, 2), 0.0) ==
        doctest::Approx(2.0 / (4.0 * pi)).epsilon(1e-13));
  // r < n: pure integral term
  CHECK(leading_constant(DimPair(2, 1), 1.0) ==
        doctest::Approx(2.0 * pi / (2.0 * pi)).epsilon(1e-13));
  CHECK(leading_constant(DimPair(2, 1), 0.0) == doctest::Approx(0.0));
  // (1,1): c = (I + 1)/pi
  CHECK(leading_constant(DimPair(1, 1), -0.43) ==
        doctest::Approx((1.0 - 0.43) / pi).epsilon(1e-13));
}

TEST_CASE("positivity lower bound values") {
  // (1,1): (1/8) * 3 * sqrt(pi) * (2 / 2pi)^2 = 3 / (8 pi^{3/2})
  CHECK(positivity_lower_bound(DimPair(1, 1)) ==
        doctest::Approx(3.0 / (8.0 * std::pow(pi, 1.5))).epsilon(1e-13));
  // on the sigma^2 scale (times vol(RP^1) = pi) this is the known 3/(8 sqrt pi)
  CHECK(positivity_lower_bound(DimPair(1, 1)) * pi ==
        doctest::Approx(3.0 / (8.0 * std::sqrt(pi))).epsilon(1e-13));
  CHECK(positivity_lower_bound(DimPair(4, 2)) > 0.0);
}

TEST_CASE("inr for (1,1) lands near the known value at desk scale") {
  const InrResult res = inr(DimPair(1, 1), quick_config(), 123, 1);
  // sigma^2 = 1 + I_{1,1} ~ 0.57 => I_{1,1} ~ -0.43, and I < 0
  CHECK(res.value < 0.0);
  CHECK(res.value == doctest::Approx(-0.43).epsilon(0.12));
  CHECK(res.error > 0.0);
  CHECK(res.converged);
}

TEST_CASE("inr refinement stability and seed invariance") {
  const DimPair pair(2, 1);
  const QuadratureConfig cfg = quick_config();
  const InrResult base = inr(pair, cfg, 200, 1);

  QuadratureConfig doubled = cfg;
  doubled.nodes_per_panel *= 2;
  doubled.mc_samples_per_node *= 2;
  const InrResult fine = inr(pair, doubled, 200, 1);
  CHECK(std::abs(fine.value - base.value) <= base.error + fine.error);

  const InrResult other_seed = inr(pair, cfg, 201, 1);
  const double combined = 3.0 * std::hypot(base.mc_std_err, other_seed.mc_std_err);
  CHECK(std::abs(base.value - other_seed.value) < combined + base.quad_delta +
                                                      other_seed.quad_delta);
}

TEST_CASE("inr is deterministic given the seed") {
  const InrResult a = inr(DimPair(1, 1), quick_config(), 77, 1);
  const InrResult b = inr(DimPair(1, 1), quick_config(), 77, 2);
  CHECK(a.value == b.value);
  CHECK(a.mc_std_err == b.mc_std_err);
}

TEST_CASE("c_{1,1} vol(RP^1) reproduces the simulated variance constant") {
  // cross-module consistency: pi * c_{1,1} = 1 + I_{1,1} must agree with the
  // large-d var/sqrt(d) from direct root counting within combined error
  QuadratureConfig cfg = quick_config();
  cfg.mc_samples_per_node = 50000;
  const InrResult res = inr(DimPair(1, 1), cfg, 401, 1);
  const double sigma2_quad = leading_constant(DimPair(1, 1), res.value) * pi;

  const zeroset::ZeroStats st = zeroset::empirical_root_stats(400, 6000, 403, 1);
  const double sigma2_sim = st.var / 20.0;
  // the simulated side carries finite-d bias on top of its CI; allow 0.02
  CHECK(std::abs(sigma2_quad - sigma2_sim) <
        pi * res.error + 3.0 * st.var_ci / 20.0 + 0.02);
}

TEST_CASE("positivity report shape and verdicts at n_max = 2") {
  const auto rows = positivity_report(2, quick_config(), 300, 1);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].pair.n == 1);
  CHECK(rows[0].pair.r == 1);
  CHECK(rows[1].pair.n == 2);
  CHECK(rows[1].pair.r == 1);
  CHECK(rows[2].pair.n == 2);
  CHECK(rows[2].pair.r == 2);
  for (const ConstantReport& row : rows) {
    CHECK(row.converged);
    CHECK(row.positive);
    CHECK(row.leading_constant > positivity_lower_bound(row.pair) - 3 * row.i_err);
  }
}
