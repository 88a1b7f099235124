#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace zeroset {

struct QuadNode {
  double x;
  double w;
};

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
/// recurrence), exact to machine precision for m up to several hundred.
std::vector<QuadNode> gauss_legendre(int m);

/// Same nodes mapped to [a, b].
std::vector<QuadNode> gauss_legendre(int m, double a, double b);

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b] to a relative tolerance.
double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth = 48);

/// Integral over [a, inf): the tail [a+1, inf) is mapped to (0, 1] via
/// t = a + 1/v - something... t = lo + (1-v)/v on the tail piece.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol);

}  // namespace zeroset
