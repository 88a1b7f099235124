#pragma once

#include <cstdint>
#include <vector>

#include "zeroset/geometry.hpp"
#include "zeroset/jacobian_moments.hpp"

namespace zeroset {

enum class Substitution { kSqrtMap, kNone };

/// Grid layout for the singular integral I_{n,r}. The head (0, t_split] is
/// integrated after the substitution t = s^2 (neutralizes the 1/sqrt(t)
/// endpoint), the tail (t_split, t_max] over log-spaced Gauss-Legendre
/// panels; the remainder beyond t_max is folded into the error via the
/// e^{-t/4} decay of the integrand.
struct QuadratureConfig {
  double t_min = 1e-6;
  double t_split = 1.0;
  double t_max = 60.0;
  int nodes_per_panel = 32;
  std::int64_t mc_samples_per_node = 200000;
  Substitution substitution = Substitution::kSqrtMap;
  int panels_above_split = 8;
  int batches = 32;

  void validate() const;
};

struct InrResult {
  double value = 0;          // I_{n,r}
  double error = 0;          // quad_delta + 2 * mc_std_err + tail_bound
  double quad_delta = 0;     // |fine - coarse| node refinement difference
  double mc_std_err = 0;     // batch-propagated Monte-Carlo error on I
  double tail_bound = 0;     // truncation estimate beyond t_max
  bool converged = true;
  std::int64_t samples_per_node = 0;
  std::uint64_t seed = 0;
};

/// I_{n,r} = 1/2 int_0^inf D_{n,r}(t) t^{(n-2)/2} dt via fixed panels with
/// Monte-Carlo evaluation of D at every node (common random numbers across
/// the whole grid).
InrResult inr(DimPair pair, const QuadratureConfig& cfg, std::uint64_t seed,
              int threads = 1);

/// c_{n,r} = vol(S^{n-1}) / (2 pi)^r * I_{n,r} + delta_{rn} * 2 / vol(S^n).
double leading_constant(DimPair pair, double inr_value);

/// (r/8)(1 + 2/n) pi^{n/2} (vol S^{n-r} / vol S^n)^2.
double positivity_lower_bound(DimPair pair);

struct ConstantReport {
  DimPair pair;
  double i_nr = 0;
  double i_err = 0;
  double leading_constant = 0;
  double lower_bound = 0;
  bool positive = false;   // leading_constant - 2 * i_err_scaled > 0
  bool converged = true;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// One report row per pair 1 <= r <= n <= n_max. Non-convergence in a cell is
/// flagged on that row and never aborts the table.
std::vector<ConstantReport> positivity_report(int n_max,
                                              const QuadratureConfig& cfg,
                                              std::uint64_t seed,
                                              int threads = 1);

}  // namespace zeroset
