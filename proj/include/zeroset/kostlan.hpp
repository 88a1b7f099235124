#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "zeroset/gaussian.hpp"
#include "zeroset/geometry.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

/// Enumeration of multi-indices alpha in N^{n+1} with |alpha| = d, together
/// with the sqrt-multinomial weights of the Kostlan ensemble.
class MultiIndexTable {
 public:
  MultiIndexTable(int n, int d);

  int n() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(weights_.size()); }
  std::span<const int> alpha(int k) const {
    return {alphas_.data() + static_cast<size_t>(k) * (n_ + 1),
            static_cast<size_t>(n_ + 1)};
  }
  double sqrt_weight(int k) const { return weights_[k]; }

 private:
  int n_, d_;
  std::vector<int> alphas_;     // flattened, stride n+1
  std::vector<double> weights_; // sqrt of multinomial(d, alpha)
};

/// r independent Kostlan-Shub-Smale polynomials of degree d in n+1 variables:
/// each component is sum_alpha a_alpha sqrt(binom(d, alpha)) X^alpha with
/// i.i.d. standard Gaussian a_alpha.
struct KostlanSample {
  int n = 1, d = 1, r = 1;
  std::shared_ptr<const MultiIndexTable> table;
  std::vector<Eigen::VectorXd> coeffs;  // one a_alpha vector per component
};

KostlanSample sample_kostlan(int n, int d, int r, RngStream& rng);

/// sqrt of the evaluation normalization (d+n)! / (pi^n d!).
double log_kss_norm_factor(int n, int d);

/// Unit-variance value of one component at the affine chart point x
/// (x_0 = 1): (1 + |x|^2)^{-d/2} sum_alpha a_alpha sqrt(binom) x^alpha.
double kss_value_normalized(const KostlanSample& s, int component,
                            const Eigen::Ref<const Eigen::VectorXd>& x);

/// Value together with the chart-coordinate gradient of the normalized
/// trivialized section (value and gradient at a point are independent).
void kss_value_and_gradient(const KostlanSample& s, int component,
                            const Eigen::Ref<const Eigen::VectorXd>& x,
                            double* value, Eigen::VectorXd* gradient);

/// Monomial coefficients (degree-ordered, c[k] t^k) of a fresh univariate
/// KSS draw, scaled by the largest sqrt-binomial weight; roots are unchanged
/// by the scaling.
std::vector<double> sample_kss_univariate(int d, RngStream& rng);

/// Correlation kernel xi_d(w, z) = ((1 + <w,z>) / sqrt((1+|w|^2)(1+|z|^2)))^d,
/// evaluated through d * log of the base (signed power for a negative base).
double xi_d(const Eigen::Ref<const Eigen::VectorXd>& w,
            const Eigen::Ref<const Eigen::VectorXd>& z, std::int64_t d);

struct XiJet {
  Eigen::VectorXd grad_x;
  Eigen::VectorXd grad_y;
  Eigen::MatrixXd hess_xy;
};
XiJet xi_d_jet(const Eigen::Ref<const Eigen::VectorXd>& w,
               const Eigen::Ref<const Eigen::VectorXd>& z, std::int64_t d);

/// 2x2 covariance blocks of the normalized 1-jet pair
/// (t_d(0), t_d(z), L_d(0), L_d(z)) at chart separation t = |z|^2:
///   A: values, B: value/first-direction cross, D: first-direction jets,
///   C: every other jet direction.
struct JetCovarianceBlocks {
  double t = 0;
  std::int64_t d = 1;
  Eigen::Matrix2d A, B, C, D;

  /// Per-component (2n+2) x (2n+2) joint matrix, values first, then jet
  /// directions interleaved by point.
  Eigen::MatrixXd assemble_joint(int n) const;

  /// Prefactors connecting the unit-variance entries back to the raw
  /// section: Var(raw value) = exp(2 log_kss_norm_factor), raw jets carry an
  /// extra factor d, and the two-point density of r components scales by d^r.
  double log_raw_value_variance(int n) const {
    return 2.0 * log_kss_norm_factor(n, static_cast<int>(d));
  }
  double log_raw_jet_variance(int n) const {
    return log_raw_value_variance(n) + std::log(static_cast<double>(d));
  }
};
JetCovarianceBlocks jet_covariance_blocks(double t, std::int64_t d);

/// F_d(t) = (1+t/d)^{-d} ((1 + t/d - t)^2 + (n-1)(1 + t/d) - 2nt + n^2).
double f_d(double t, std::int64_t d, int n);
/// Pointwise d -> infinity limit (t^2 - 2t(n+1) + n(n+1)) e^{-t}.
double f_limit(double t, int n);

/// int_0^inf F_d(t) t^{(n-2)/2} (1+t/d)^{-(n+1)/2} dt  (-> Gamma(n/2 + 2)).
double jnr_bare_integral(std::int64_t d, int n, double rel_tol = 1e-9);

/// J_{n,r}(d) = d^{-n/2} r vol(S^{n-1}) * bare integral.
/// Throws std::domain_error below the integrability threshold d >= n/2 + 2.
double jnr_integral(std::int64_t d, DimPair pair, double rel_tol = 1e-9);

struct SecondChaos {
  double variance = 0;    // Var[vol Z_d [2]]
  double normalized = 0;  // d^{n/2 - r} * variance
  double limit = 0;       // r (1 + 2/n) pi^{n/2} vol(S^{n-r})^2 / (16 vol S^n)
};
SecondChaos second_chaos_variance(std::int64_t d, DimPair pair,
                                  double rel_tol = 1e-9);

struct ChaosCoefficients {
  double b0 = 0;  // (2 pi)^{r/2} vol(S^{n-r}) / vol(S^n)
  double b2 = 0;  // b0 / (n sqrt 2)
  DimPair pair;
};
ChaosCoefficients chaos_coefficients(DimPair pair);

/// Probabilists' Hermite polynomial H_k(x) by the three-term recurrence.
double hermite(int k, double x);

struct KacRiceDensity {
  double density = 0;  // at the d^r scale of the two-point Kac-Rice density
  double std_err = 0;
};

/// Two-point Kac-Rice density of the KSS ensemble at chart separation
/// t = |z|^2: condition the normalized jets on both values vanishing,
/// Monte-Carlo the conditional Jacobian-pair expectation, divide by the
/// value-block root determinant, subtract the one-point product, restore the
/// d^r scale.
KacRiceDensity kac_rice_density_kss(double t, std::int64_t d, DimPair pair,
                                    std::int64_t samples, RngStream& rng);

struct KacRiceVariance {
  double variance = 0;
  double std_err = 0;
  double mean = 0;  // exact sqrt(d)
};

/// Var(#roots) of one degree-d KSS polynomial on RP^1 via the Kac-Rice
/// route: (1/2pi) vol(RP^1) int_R density(z^2) (1+z^2)^{-1} dz + sqrt(d).
KacRiceVariance kac_rice_variance_rp1(std::int64_t d,
                                      std::int64_t samples_per_node,
                                      std::uint64_t seed, int threads = 1,
                                      int nodes_per_panel = 32,
                                      int batches = 32);

}  // namespace zeroset
