#include "zeroset/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace zeroset {

std::vector<QuadNode> gauss_legendre(int m) {
  if (m < 1) throw std::invalid_argument("gauss_legendre: m >= 1");
  std::vector<QuadNode> nodes(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi-style initial guess, then Newton
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double p1 = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre P_m(x) and derivative by recurrence
      double p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        p1 = m * (x * p1 - p0) / (x * x - 1.0);  // reuse p1 as P'_m
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * p1 * p1);
    nodes[i] = {-x, w};
    nodes[m - 1 - i] = {x, w};
  }
  if (m % 2 == 1) {
    // the middle node is exactly 0; recompute its weight cleanly
    double p0 = 1.0, p1 = 0.0;
    for (int k = 2; k <= m; ++k) {
      const double p2 = (-(k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = m * (0.0 - p0) / (-1.0);
    nodes[m / 2] = {0.0, 2.0 / (dp * dp)};
  }
  return nodes;
}

std::vector<QuadNode> gauss_legendre(int m, double a, double b) {
  std::vector<QuadNode> nodes = gauss_legendre(m);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (auto& n : nodes) {
    n.x = mid + half * n.x;
    n.w *= half;
  }
  return nodes;
}

namespace {

// Gauss 7 / Kronrod 15 abscissae and weights (positive half).
constexpr double kKx[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKw[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGw[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double dx = half * kKx[i];
    const double fl = f(mid - dx);
    const double fr = (i == 7) ? 0.0 : f(mid + dx);
    const double pair = (i == 7) ? fl : fl + fr;
    kron += kKw[i] * pair;
    if (i % 2 == 1) gauss += kGw[i / 2] * pair;
  }
  kron *= half;
  gauss *= half;
  return {kron, std::abs(kron - gauss)};
}

// abs_tol is an error budget for the whole of [a, b]; halves split it evenly.
double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, int depth, int max_depth) {
  const GkResult r = gk15(f, a, b);
  if (depth >= max_depth || r.error <= abs_tol) return r.value;
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * abs_tol, depth + 1, max_depth) +
         adaptive(f, mid, b, 0.5 * abs_tol, depth + 1, max_depth);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int max_depth) {
  if (!(a < b)) return 0.0;
  const GkResult rough = gk15(f, a, b);
  const double scale = std::max(std::abs(rough.value), rough.error);
  const double abs_tol = rel_tol * std::max(scale, 1e-300);
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * abs_tol, 0, max_depth) +
         adaptive(f, mid, b, 0.5 * abs_tol, 0, max_depth);
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double rel_tol) {
  const double lo = a + 1.0;
  const double head = adaptive_integrate(f, a, lo, rel_tol);
  // t = lo + (1 - v)/v, dt = -dv/v^2, v in (0, 1]
  auto tail = [&](double v) {
    const double t = lo + (1.0 - v) / v;
    return f(t) / (v * v);
  };
  const double rest = adaptive_integrate(tail, 1e-12, 1.0, rel_tol);
  return head + rest;
}

}  // namespace zeroset
