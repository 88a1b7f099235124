#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "zeroset/gaussian.hpp"

namespace zeroset {

/// The scalar functions of t = |z|^2 that diagonalize the 1-jet covariances
/// of the Bargmann-Fock field:
///   a(t)  = (1 - t/2) / sqrt(1 + (t/2)^2)
///   v_1..v_4(t) = 1 -+ e^{-t/2} (t/2 -+ sqrt(1 + (t/2)^2))   (eigenvalues of omega_tilde)
///   b_+- = sqrt(1 +- a)
///   u_1(t) = (1 - e^{-t} + t e^{-t/2}) / (1 + e^{-t/2})
///   u_2(t) = (1 - e^{-t} - t e^{-t/2}) / (1 - e^{-t/2}),  u_2(0) = 0.
///
/// u_2 and v_2 cancel catastrophically near 0 and switch to series there
/// (u_2 ~ t^2/12, v_2 ~ t^3/48).
struct ScalarFamilies {
  double t = 0;
  double a = 1, b_plus = 0, b_minus = 0;
  double v1 = 0, v2 = 0, v3 = 0, v4 = 0;
  double u1 = 0, u2 = 0;

  static ScalarFamilies at(double t);
};

/// det(omega_tilde(t)) = v1 v2 v3 v4 = 1 - (t^2 + 2) e^{-t} + e^{-2t}.
double det_f(double t);

/// Bargmann-Fock correlation kernel xi(w, z) = exp(-|w - z|^2 / 2).
double bf_kernel(const Eigen::Ref<const Eigen::VectorXd>& w,
                 const Eigen::Ref<const Eigen::VectorXd>& z);

struct BfJet {
  Eigen::VectorXd grad_x;   // d/dw_i xi
  Eigen::VectorXd grad_y;   // d/dz_j xi
  Eigen::MatrixXd hess_xy;  // d^2/dw_i dz_j xi
};

/// Closed-form first and mixed derivatives of the kernel.
BfJet bf_jet_derivatives(const Eigen::Ref<const Eigen::VectorXd>& w,
                         const Eigen::Ref<const Eigen::VectorXd>& z);

/// 4x4 covariance of (s(0), s(z), d1 s(0), d1 s(z)) in the basis adapted to
/// the axis e1 || z, t = |z|^2.
Eigen::Matrix4d omega_tilde(double t);

/// 2x2 covariance of (d1 s(0), d1 s(z)) given s(0) = s(z) = 0; the zero
/// matrix at t = 0 by continuous extension.
Eigen::Matrix2d lambda_tilde(double t);

/// Orthogonal P(t) with P omega_tilde P^T = diag(v1..v4).
Eigen::Matrix4d omega_tilde_diagonalizer(double t);

/// Rotation by pi/4; Q lambda_tilde Q^T = diag(u1, u2).
Eigen::Matrix2d quarter_rotation();

struct OmegaTildeDiagonalization {
  Eigen::Matrix4d P;
  std::array<double, 4> eigenvalues;  // v1..v4
};
OmegaTildeDiagonalization diagonalize_omega_tilde(double t);

struct LambdaTildeDiagonalization {
  double u1, u2;
};
LambdaTildeDiagonalization diagonalize_lambda_tilde(double t);

/// All jet covariances of the limit field at separation z, codimension r,
/// materialized in the adapted basis (first axis along z).
///
/// Layout conventions:
///   theta        (2r x 2r):     [[1, c], [c, 1]] (x) I_r,  c = e^{-t/2}
///   omega_prime  (2(n+1) sq):   blockdiag(omega_tilde(t), [[1,c],[c,1]] (x) I_{n-1})
///                               with the two value coordinates first
///   lambda_prime (2n x 2n):     blockdiag(lambda_tilde(t), [[1,c],[c,1]] (x) I_{n-1})
struct LimitCovariances {
  double z_norm_sq = 0;
  int n = 1;
  int r = 1;
  Eigen::MatrixXd theta;
  Eigen::MatrixXd omega_prime;
  Eigen::MatrixXd lambda_prime;
  Eigen::Matrix4d omega_tilde;
  Eigen::Matrix2d lambda_tilde;
  Eigen::Matrix4d P;
  Eigen::Matrix2d Q;
};

LimitCovariances build_limit_covariances(const Eigen::Ref<const Eigen::VectorXd>& z,
                                         int r);
LimitCovariances build_limit_covariances(double z_norm_sq, int n, int r);

/// Operator norm of diag(0, lambda_prime^{1/2}) * omega_prime^{-1/2}; stays
/// bounded over (0, inf) (checked by regression test).
double jet_whitening_norm(double t, int n);

struct IdentityCheck {
  std::string name;
  double max_err = 0;
  double tol = 0;
  bool pass = false;
};

/// Deterministic identity suite over a log grid of t = |z|^2 values:
/// determinant, diagonalization and Schur-complement identities of the limit
/// covariances, plus the whitened-jet norm bound.
std::vector<IdentityCheck> limit_identity_suite(int grid_points = 40,
                                                double t_lo = 1e-4,
                                                double t_hi = 40.0);

}  // namespace zeroset
