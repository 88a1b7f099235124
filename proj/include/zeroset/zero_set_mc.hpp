#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "zeroset/kostlan.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

struct RootCount {
  int count = 0;
  bool ill_conditioned = false;  // two roots closer than 1e-10
};

/// Number of distinct real roots of sum_k coeffs[k] x^k.
///
/// Dispatches between the two counters below: the balanced-companion
/// eigensolve (reference method) for moderate degrees and the
/// argument-principle counter for large ones, whose cost scales like
/// degree * #roots instead of degree^3.
RootCount count_real_roots(std::span<const double> coeffs);

/// Balanced companion matrix + real Schur; real eigenvalues are the 1x1
/// diagonal blocks.
RootCount count_real_roots_companion(std::span<const double> coeffs);

/// Winding-number counter: walks rectangle contours around segments of the
/// real axis (plus the reversed polynomial for |x| > 1) with
/// log-derivative-certified phase steps, and bisects until every rectangle
/// holds at most one zero. Falls back to the companion counter if a contour
/// cannot be certified.
RootCount count_real_roots_winding(std::span<const double> coeffs);

struct ZeroStats {
  int d = 0;
  std::int64_t samples = 0;
  double mean = 0;
  double var = 0;
  double mean_ci = 0;  // 99% half-width
  double var_ci = 0;   // 99% half-width via the fourth-moment formula
  std::uint64_t seed = 0;
  std::vector<std::int64_t> histogram;  // root-count histogram (index = count)
};

/// Mean/variance of #real roots of degree-d KSS draws on RP^1.
/// Asserts 0 <= #roots <= d and #roots == d (mod 2) on every draw.
ZeroStats empirical_root_stats(int d, std::int64_t samples, std::uint64_t seed,
                               int threads = 1);

/// Restriction of one component of an n=2 Kostlan sample to the projective
/// line spanned by the orthonormal pair (u, v): monomial coefficients of
/// t -> p(u + t v).
std::vector<double> restrict_kostlan_to_line(const KostlanSample& s,
                                             int component,
                                             const Eigen::Vector3d& u,
                                             const Eigen::Vector3d& v);

/// Cauchy-Crofton length estimate of a degree-d KSS curve on RP^2: per
/// sample, length = pi * (mean over random projective lines of the number of
/// intersections).
ZeroStats crofton_length_stats(int d, std::int64_t samples,
                               int slices_per_sample, std::uint64_t seed,
                               int threads = 1);

}  // namespace zeroset
