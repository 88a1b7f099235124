#include "zeroset/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace zeroset {

Eigen::MatrixXd psd_sqrt(const Eigen::Ref<const Eigen::MatrixXd>& cov) {
  check_symmetric(cov);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd eigs = es.eigenvalues();
  const double scale = std::max(1.0, eigs.cwiseAbs().maxCoeff());
  if (eigs.minCoeff() < -1e-8 * scale) throw NotPsdError(eigs.minCoeff());
  eigs = eigs.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * eigs.asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd sampling_factor(const Eigen::Ref<const Eigen::MatrixXd>& cov) {
  check_symmetric(cov);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd l = llt.matrixL();
    if (l.diagonal().minCoeff() > 1e-10) return l;
  }
  return psd_sqrt(cov);
}

Eigen::MatrixXd condition_on_zero(const Eigen::Ref<const Eigen::MatrixXd>& joint,
                                  Eigen::Index split) {
  check_symmetric(joint);
  const Eigen::Index k = split;
  const Eigen::Index m = joint.rows() - k;
  if (k <= 0 || m <= 0)
    throw std::invalid_argument("condition_on_zero: bad split index");

  const Eigen::MatrixXd value = joint.topLeftCorner(k, k);
  const Eigen::MatrixXd cross = joint.bottomLeftCorner(m, k);
  const Eigen::MatrixXd trail = joint.bottomRightCorner(m, m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(value);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() <= 1e-12 * scale)
    throw SingularBlockError(es.eigenvalues().minCoeff());

  Eigen::LDLT<Eigen::MatrixXd> ldlt(value);
  Eigen::MatrixXd schur = trail - cross * ldlt.solve(cross.transpose());
  return 0.5 * (schur + schur.transpose());
}

double expected_odet_standard(DimPair pair) {
  const double lg = 0.5 * pair.r * std::log(2.0 * std::numbers::pi) +
                    log_sphere_volume(pair.n - pair.r) - log_sphere_volume(pair.n);
  return std::exp(lg);
}

GaussianLaw::GaussianLaw(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
  factor_ = sampling_factor(cov_);
}

Eigen::VectorXd GaussianLaw::sample(RngStream& rng) const {
  Eigen::VectorXd z(dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return factor_ * z;
}

}  // namespace zeroset
