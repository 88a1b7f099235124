#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <stdexcept>
#include <string>

#include "zeroset/geometry.hpp"
#include "zeroset/rng.hpp"

namespace zeroset {

/// Thrown when a matrix flagged PSD has an eigenvalue below -1e-8.
struct NotPsdError : std::runtime_error {
  explicit NotPsdError(double min_eig)
      : std::runtime_error("matrix is not PSD, min eigenvalue " +
                           std::to_string(min_eig)),
        min_eigenvalue(min_eig) {}
  double min_eigenvalue;
};

/// Thrown by condition_on_zero when the value block is numerically singular.
struct SingularBlockError : std::runtime_error {
  explicit SingularBlockError(double eig)
      : std::runtime_error("value block is singular, min eigenvalue " +
                           std::to_string(eig)),
        eigenvalue(eig) {}
  double eigenvalue;
};

inline void check_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& a,
                            double tol = 1e-12) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("expected a square matrix");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("matrix is not symmetric");
}

/// Symmetric PSD square root S with S*S = cov, by spectral decomposition.
/// Eigenvalues in [-1e-8, 0) are treated as rounding noise and clamped to 0;
/// anything below raises NotPsdError carrying the most negative eigenvalue.
Eigen::MatrixXd psd_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& cov);

/// Any factor F with F F^T = cov, for sampling. Tries Cholesky first and
/// falls back to the spectral root when a pivot drops below 1e-10.
Eigen::MatrixXd sampling_factor(const Eigen::Ref<const Eigen::MatrixXd>& cov);

/// Covariance of the trailing block of a joint Gaussian conditioned on the
/// leading `split` coordinates being zero (Schur complement).
Eigen::MatrixXd condition_on_zero(const Eigen::Ref<const Eigen::MatrixXd>& joint,
                                  Eigen::Index split);

/// Jacobian |det_perp A| = sqrt(det(A A^T)) of an r x n matrix, r <= n,
/// computed as the product of singular values.
template <typename Derived>
double odet(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() > a.cols())
    throw std::invalid_argument("odet: need r <= n");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues().prod();
}

/// E|det_perp G| for a standard Gaussian r x n matrix:
/// (2 pi)^{r/2} vol(S^{n-r}) / vol(S^n).
double expected_odet_standard(DimPair pair);

/// Centered Gaussian law with a cached sampling factor.
class GaussianLaw {
 public:
  explicit GaussianLaw(Eigen::MatrixXd cov);

  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::MatrixXd& sqrt_cov() const { return factor_; }
  Eigen::Index dim() const { return cov_.rows(); }

  Eigen::VectorXd sample(RngStream& rng) const;

 private:
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

}  // namespace zeroset
