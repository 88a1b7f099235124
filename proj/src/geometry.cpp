#include "zeroset/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace zeroset {

double log_sphere_volume(int k) {
  if (k < 0) throw std::invalid_argument("sphere_volume: k must be >= 0");
  const double h = 0.5 * (k + 1);
  return std::numbers::ln2 + h * std::log(std::numbers::pi) - std::lgamma(h);
}

double sphere_volume(int k) { return std::exp(log_sphere_volume(k)); }

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: x must be positive");
  return std::tgamma(x);
}

double log_multinomial(int d, std::span<const int> alpha) {
  if (d < 0) throw std::invalid_argument("multinomial: d must be >= 0");
  long sum = 0;
  double lg = std::lgamma(d + 1.0);
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("multinomial: negative component");
    sum += a;
    lg -= std::lgamma(a + 1.0);
  }
  if (sum != d)
    throw std::invalid_argument("multinomial: |alpha| != d");
  return lg;
}

double multinomial(int d, std::span<const int> alpha) {
  const double lg = log_multinomial(d, alpha);  // also validates
  if (d <= 20) {
    // exact: multiply factors (prefix+1 .. prefix+a)/a! component by component
    unsigned __int128 num = 1;
    int prefix = 0;
    for (int a : alpha) {
      for (int j = 1; j <= a; ++j) {
        num = num * static_cast<unsigned>(prefix + j);
        num /= static_cast<unsigned>(j);  // exact: running value is C(prefix+j, j) * integer
      }
      prefix += a;
    }
    return static_cast<double>(num);
  }
  return std::exp(lg);
}

}  // namespace zeroset
