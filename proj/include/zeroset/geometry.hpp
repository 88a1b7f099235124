#pragma once

#include <span>
#include <stdexcept>

namespace zeroset {

/// Ambient dimension n and codimension r, 1 <= r <= n.
struct DimPair {
  int n = 1;
  int r = 1;

  DimPair() = default;
  DimPair(int n_, int r_) : n(n_), r(r_) {
    if (n < 1 || r < 1 || r > n)
      throw std::invalid_argument("DimPair: need 1 <= r <= n, n >= 1");
  }
};

/// Riemannian volume of the unit sphere S^k in R^{k+1}.
/// vol(S^k) = 2 pi^{(k+1)/2} / Gamma((k+1)/2), evaluated through lgamma so
/// that dimensions up to a few hundred stay finite.
double sphere_volume(int k);
double log_sphere_volume(int k);

/// Euler Gamma for x > 0; throws std::domain_error otherwise.
double gamma_fn(double x);

/// Multinomial coefficient d! / (alpha_0! ... alpha_m!), |alpha| = d.
/// Exact integer arithmetic for d <= 20, log-space otherwise.
/// Throws std::invalid_argument when |alpha| != d or a component is negative.
double multinomial(int d, std::span<const int> alpha);
double log_multinomial(int d, std::span<const int> alpha);

}  // namespace zeroset
