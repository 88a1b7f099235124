#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "zeroset/gaussian.hpp"
#include "zeroset/geometry.hpp"
#include "zeroset/limit_model.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

/// Law of the matrix pair (X(t), Y(t)): entries (X_ij, Y_ij) independent,
/// covariance lambda_tilde(t) in column 1 and [[1, e^{-t/2}], [e^{-t/2}, 1]]
/// in the other columns.
///
/// Sampling uses the per-entry 2x2 square roots
///   column 1:  [[alpha, beta], [beta, alpha]],  alpha/beta = (sqrt(u2) +- sqrt(u1))/2
///   column j>1:[[gamma, delta], [delta, gamma]], gamma/delta = (sqrt(1+c) +- sqrt(1-c))/2
/// which costs O(rn) per draw.
struct XYLaw {
  double t = 1;
  DimPair pair;
  double alpha = 0, beta = 0, gamma = 0, delta = 0;
  Eigen::MatrixXd lambda_hat;  // 2rn x 2rn, interleaved (X_ij, Y_ij) pairs

  static XYLaw at(double t, DimPair pair);
};

/// Draws (X, Y) ~ XYLaw; X and Y are r x n.
void sample_xy(const XYLaw& law, RngStream& rng, Eigen::MatrixXd& x,
               Eigen::MatrixXd& y);

struct JacobianMomentEstimate {
  double t = 0;
  double mean = 0;
  double std_err = 0;
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of E[ |det_perp X(t)| |det_perp Y(t)| ].
JacobianMomentEstimate moment_odet_pair(double t, DimPair pair,
                                        std::int64_t samples, RngStream rng);

/// Grid evaluation over several t values. With common_random_numbers the same
/// underlying standard normal draws feed every node, making the estimated
/// curve smooth in t; batch means are retained so downstream error
/// propagation can respect the induced correlation.
struct GridMoments {
  std::vector<double> t;
  std::vector<double> mean;     // E[odet odet] at each node (control re-added)
  std::vector<double> std_err;  // batch std error of the stored estimate
  // batch_mean[b][j]: mean over batch b at node j; with the control variate
  // on it estimates E[odet odet] - lambda_j B0^2, lambda_j = (1-e^{-t_j})^{r/2}
  std::vector<std::vector<double>> batch_mean;
  std::vector<double> control_lambda;  // empty without the control variate
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
};

/// When control_variate is set (requires common random numbers), the product
/// at t = infinity, odet(A) odet(B) with exactly known mean B0^2, is
/// subtracted per sample with weight lambda(t) = (1 - e^{-t})^{r/2}: at large
/// t the two products coincide pathwise and the correlated tail noise
/// cancels; at small t the weight vanishes with the same rate as the
/// normalization of D_{n,r}, so the subtraction is never amplified. The
/// estimator stays unbiased because E[odet(A) odet(B)] is known exactly.
GridMoments moment_odet_pair_grid(std::span<const double> ts, DimPair pair,
                                  std::int64_t samples, std::uint64_t seed,
                                  bool common_random_numbers, int batches = 32,
                                  int threads = 1, bool control_variate = false);

struct DnrEstimate {
  double value = 0;
  double std_err = 0;
  bool noisy_small_t = false;  // t < 1e-6 and r = n: 0/0 regime
};

/// D_{n,r}(t) = E[odet odet] / (1-e^{-t})^{r/2} - (2 pi)^r (vol S^{n-r} / vol S^n)^2.
DnrEstimate dnr(double t, DimPair pair, std::int64_t samples, RngStream rng);
DnrEstimate dnr_from_moment(const JacobianMomentEstimate& m, DimPair pair);

/// Fast |det_perp X| |det_perp Y| for the sampler hot path (Gram determinants
/// with fixed-size kernels for r, n <= 8); agrees with odet() to ~1e-8
/// relative on non-degenerate input.
double odet_pair_product(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

}  // namespace zeroset
