#include "zeroset/limit_model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace zeroset {

namespace {

constexpr double kSeriesCutoff = 1e-2;

double u2_series(double t) {
  // u2 = (t^2/12)(1 - t/4 + t^2/30 - t^3/320 + t^4/4032)
  return t * t / 12.0 *
         (1.0 + t * (-0.25 + t * (1.0 / 30.0 + t * (-1.0 / 320.0 + t / 4032.0))));
}

double v2_series(double t) {
  // v2 = (t^3/48)(1 - 9 t^2/80 - t^3/96 + 15 t^4/896)
  return t * t * t / 48.0 *
         (1.0 + t * t * (-9.0 / 80.0 + t * (-1.0 / 96.0 + t * 15.0 / 896.0)));
}

}  // namespace

ScalarFamilies ScalarFamilies::at(double t) {
  if (t < 0) throw std::invalid_argument("ScalarFamilies: t must be >= 0");
  ScalarFamilies s;
  s.t = t;
  const double half = 0.5 * t;
  const double root = std::sqrt(1.0 + half * half);
  const double eh = std::exp(-half);
  s.a = (1.0 - half) / root;
  s.b_plus = std::sqrt(1.0 + s.a);
  s.b_minus = std::sqrt(1.0 - s.a);
  s.v1 = 1.0 - eh * (half - root);
  s.v2 = t < kSeriesCutoff ? v2_series(t) : 1.0 - eh * (half + root);
  s.v3 = 1.0 + eh * (half - root);
  s.v4 = 1.0 + eh * (half + root);
  const double em = -std::expm1(-t);  // 1 - e^{-t}
  s.u1 = (em + t * eh) / (1.0 + eh);
  s.u2 = t < kSeriesCutoff ? u2_series(t) : (em - t * eh) / (1.0 - eh);
  if (t == 0.0) s.u2 = 0.0;
  return s;
}

double det_f(double t) {
  // f = (1 - e^{-t})^2 - t^2 e^{-t}; the expm1 form keeps the absolute error
  // near machine precision through the ~t^4/12 cancellation at small t.
  const double em = std::expm1(-t);
  return em * em - t * t * std::exp(-t);
}

double bf_kernel(const Eigen::Ref<const Eigen::VectorXd>& w,
                 const Eigen::Ref<const Eigen::VectorXd>& z) {
  return std::exp(-0.5 * (w - z).squaredNorm());
}

BfJet bf_jet_derivatives(const Eigen::Ref<const Eigen::VectorXd>& w,
                         const Eigen::Ref<const Eigen::VectorXd>& z) {
  const Eigen::VectorXd diff = w - z;
  const double k = std::exp(-0.5 * diff.squaredNorm());
  BfJet jet;
  jet.grad_x = -diff * k;
  jet.grad_y = diff * k;
  jet.hess_xy = (Eigen::MatrixXd::Identity(w.size(), w.size()) -
                 diff * diff.transpose()) *
                k;
  return jet;
}

Eigen::Matrix4d omega_tilde(double t) {
  const double c = std::exp(-0.5 * t);
  const double s = std::sqrt(t) * c;
  Eigen::Matrix4d m;
  m << 1, c, 0, -s,
       c, 1, s, 0,
       0, s, 1, (1 - t) * c,
      -s, 0, (1 - t) * c, 1;
  return m;
}

Eigen::Matrix2d lambda_tilde(double t) {
  Eigen::Matrix2d m;
  if (t == 0.0) {
    m.setZero();
    return m;
  }
  const ScalarFamilies s = ScalarFamilies::at(t);
  const double diag = 0.5 * (s.u1 + s.u2);
  const double off = 0.5 * (s.u2 - s.u1);
  m << diag, off, off, diag;
  return m;
}

Eigen::Matrix4d omega_tilde_diagonalizer(double t) {
  const ScalarFamilies s = ScalarFamilies::at(t);
  const double bp = s.b_plus, bm = s.b_minus;
  Eigen::Matrix4d p;
  p << bm, -bm, -bp, -bp,
       bp, -bp,  bm,  bm,
       bm,  bm, -bp,  bp,
       bp,  bp,  bm, -bm;
  return 0.5 * p;
}

Eigen::Matrix2d quarter_rotation() {
  Eigen::Matrix2d q;
  q << 1, -1, 1, 1;
  return q / std::sqrt(2.0);
}

OmegaTildeDiagonalization diagonalize_omega_tilde(double t) {
  const ScalarFamilies s = ScalarFamilies::at(t);
  return {omega_tilde_diagonalizer(t), {s.v1, s.v2, s.v3, s.v4}};
}

LambdaTildeDiagonalization diagonalize_lambda_tilde(double t) {
  const ScalarFamilies s = ScalarFamilies::at(t);
  return {s.u1, s.u2};
}

namespace {

// [[1, c], [c, 1]] (x) I_k, interleaved as (pair_1, ..., pair_k)
Eigen::MatrixXd pair_block(double c, int k) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  for (int j = 0; j < k; ++j) {
    m(2 * j, 2 * j + 1) = c;
    m(2 * j + 1, 2 * j) = c;
  }
  return m;
}

}  // namespace

LimitCovariances build_limit_covariances(double t, int n, int r) {
  if (n < 1 || r < 1 || r > n)
    throw std::invalid_argument("build_limit_covariances: need 1 <= r <= n");
  LimitCovariances lc;
  lc.z_norm_sq = t;
  lc.n = n;
  lc.r = r;
  const double c = std::exp(-0.5 * t);

  lc.theta = Eigen::MatrixXd::Identity(2 * r, 2 * r);
  for (int i = 0; i < r; ++i) {
    lc.theta(i, r + i) = c;
    lc.theta(r + i, i) = c;
  }

  lc.omega_tilde = omega_tilde(t);
  lc.lambda_tilde = lambda_tilde(t);
  lc.P = omega_tilde_diagonalizer(t);
  lc.Q = quarter_rotation();

  lc.omega_prime = Eigen::MatrixXd::Zero(2 * (n + 1), 2 * (n + 1));
  lc.omega_prime.topLeftCorner(4, 4) = lc.omega_tilde;
  if (n > 1) lc.omega_prime.bottomRightCorner(2 * (n - 1), 2 * (n - 1)) =
      pair_block(c, n - 1);

  lc.lambda_prime = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  lc.lambda_prime.topLeftCorner(2, 2) = lc.lambda_tilde;
  if (n > 1) lc.lambda_prime.bottomRightCorner(2 * (n - 1), 2 * (n - 1)) =
      pair_block(c, n - 1);
  return lc;
}

LimitCovariances build_limit_covariances(const Eigen::Ref<const Eigen::VectorXd>& z,
                                         int r) {
  return build_limit_covariances(z.squaredNorm(), static_cast<int>(z.size()), r);
}

std::vector<IdentityCheck> limit_identity_suite(int grid_points, double t_lo,
                                                double t_hi) {
  std::vector<double> grid(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) /
                                               (grid_points - 1));

  IdentityCheck det_theta{"det(theta) = (1 - e^{-t})^r", 0, 1e-10, false};
  IdentityCheck p_orth{"P orthogonal", 0, 1e-12, false};
  IdentityCheck p_diag{"P omega_tilde P^T diagonal = (v1..v4)", 0, 1e-10, false};
  IdentityCheck q_diag{"Q lambda_tilde Q^T = diag(u1, u2)", 0, 1e-12, false};
  IdentityCheck schur{"schur(omega') = lambda'", 0, 1e-9, false};
  IdentityCheck det_omega{"v1 v2 v3 v4 = f(t)", 0, 1e-10, false};
  IdentityCheck det_lambda{"u1 u2 = f(t)/(1 - e^{-t})", 0, 1e-10, false};
  IdentityCheck bounded{"|lambda^{1/2} omega^{-1/2}| <= 1.2", 0, 1.2, false};

  for (double t : grid) {
    const ScalarFamilies s = ScalarFamilies::at(t);
    const double em = -std::expm1(-t);
    for (int r = 1; r <= 3; ++r) {
      const LimitCovariances lc = build_limit_covariances(t, 3, r);
      det_theta.max_err = std::max(
          det_theta.max_err,
          std::abs(lc.theta.determinant() - std::pow(em, r)));
    }
    const Eigen::Matrix4d p = omega_tilde_diagonalizer(t);
    p_orth.max_err = std::max(
        p_orth.max_err,
        ((p * p.transpose()) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff());
    Eigen::Matrix4d diag = p * omega_tilde(t) * p.transpose();
    Eigen::Vector4d v(s.v1, s.v2, s.v3, s.v4);
    p_diag.max_err = std::max(
        p_diag.max_err, (diag - Eigen::Matrix4d(v.asDiagonal())).cwiseAbs().maxCoeff());

    const Eigen::Matrix2d q = quarter_rotation();
    Eigen::Matrix2d ld = q * lambda_tilde(t) * q.transpose();
    Eigen::Matrix2d expect;
    expect << s.u1, 0, 0, s.u2;
    q_diag.max_err =
        std::max(q_diag.max_err, (ld - expect).cwiseAbs().maxCoeff());

    for (int n = 1; n <= 3; ++n) {
      const LimitCovariances lc = build_limit_covariances(t, n, 1);
      const Eigen::MatrixXd cond = condition_on_zero(lc.omega_prime, 2);
      schur.max_err = std::max(
          schur.max_err, (cond - lc.lambda_prime).cwiseAbs().maxCoeff());
    }
    det_omega.max_err = std::max(
        det_omega.max_err, std::abs(s.v1 * s.v2 * s.v3 * s.v4 - det_f(t)));
    det_lambda.max_err = std::max(
        det_lambda.max_err, std::abs(s.u1 * s.u2 - det_f(t) / em));
  }
  // the norm bound runs over |z| in [1e-4, 30], i.e. t in [1e-8, 900]
  for (int i = 0; i < grid_points; ++i) {
    const double znorm =
        1e-4 * std::pow(30.0 / 1e-4, static_cast<double>(i) / (grid_points - 1));
    bounded.max_err =
        std::max(bounded.max_err, jet_whitening_norm(znorm * znorm, 3));
  }

  std::vector<IdentityCheck> checks{det_theta, p_orth,    p_diag, q_diag,
                                    schur,     det_omega, det_lambda, bounded};
  for (IdentityCheck& c : checks) c.pass = c.max_err <= c.tol;
  return checks;
}

double jet_whitening_norm(double t, int n) {
  const LimitCovariances lc = build_limit_covariances(t, n, 1);
  const int dim = 2 * (n + 1);
  Eigen::MatrixXd lam_half = Eigen::MatrixXd::Zero(dim, dim);
  lam_half.bottomRightCorner(2 * n, 2 * n) = psd_sqrt(lc.lambda_prime);

  // omega_prime^{-1/2} via spectral inverse square root
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lc.omega_prime);
  Eigen::VectorXd inv = es.eigenvalues().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd omega_mhalf =
      es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

  // the value rows of lambda_half are zero but the jet rows sit in the
  // omega_prime ordering: values first, then jets
  Eigen::MatrixXd composed = lam_half * omega_mhalf;
  return composed.jacobiSvd().singularValues().maxCoeff();
}

}  // namespace zeroset
