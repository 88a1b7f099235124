#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "zeroset/zero_set_mc.hpp"

namespace zeroset {

namespace {

constexpr double kNearDoubleTol = 1e-10;

// strips leading (highest-degree) exact zeros; throws if identically zero
std::vector<double> trimmed(std::span<const double> coeffs) {
  std::vector<double> c(coeffs.begin(), coeffs.end());
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty())
    throw std::invalid_argument("count_real_roots: zero polynomial");
  return c;
}

// Parlett-Reinsch balancing with power-of-two scale factors
void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = a.col(i).cwiseAbs().sum() - std::abs(a(i, i));
      double row = a.row(i).cwiseAbs().sum() - std::abs(a(i, i));
      if (col == 0.0 || row == 0.0) continue;
      const double total = col + row;
      double f = 1.0;
      while (col < 0.5 * row) {
        col *= 2.0;
        row *= 0.5;
        f *= 2.0;
      }
      while (col > 2.0 * row) {
        col *= 0.5;
        row *= 2.0;
        f *= 0.5;
      }
      if (col + row < 0.95 * total && f != 1.0) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace

RootCount count_real_roots_companion(std::span<const double> coeffs) {
  const std::vector<double> c = trimmed(coeffs);
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg == 0) return {0, false};
  if (deg == 1) return {1, false};

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  balance(comp);

  Eigen::RealSchur<Eigen::MatrixXd> schur;
  schur.compute(comp, /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("count_real_roots: Schur iteration failed");
  const Eigen::MatrixXd& t = schur.matrixT();

  RootCount out;
  std::vector<double> reals;
  for (int i = 0; i < deg;) {
    if (i + 1 < deg && t(i + 1, i) != 0.0) {
      i += 2;  // complex conjugate pair
    } else {
      reals.push_back(t(i, i));
      ++i;
    }
  }
  out.count = static_cast<int>(reals.size());
  std::sort(reals.begin(), reals.end());
  for (size_t i = 1; i < reals.size(); ++i)
    if (reals[i] - reals[i - 1] < kNearDoubleTol) out.ill_conditioned = true;
  return out;
}

namespace {

// ---- argument-principle counter ------------------------------------------
//
// Real roots of g on a segment [a, b] are counted as the winding number of g
// around the thin rectangle [a, b] x [-e, e]. By conjugate symmetry it is
// enough to track the phase along the upper half (b,0) -> (b,e) -> (a,e) ->
// (a,0); the winding is then (phase change)/pi. A step z1 -> z2 is accepted
// only when |z2 - z1| * max|g'/g| <= 0.8 at both ends, which bounds the true
// phase change along the step below pi and rules out whole-turn aliasing.
// Rectangles with winding >= 2 are bisected, halving the height each time, so
// complex conjugate pairs (winding 2, but off the axis) eventually leave the
// rectangle, while real roots stay inside until isolated.

struct ContourFailure {};

class WindingCounter {
 public:
  explicit WindingCounter(std::vector<double> c) : c_(std::move(c)) {
    dc_.resize(c_.size() > 1 ? c_.size() - 1 : 1, 0.0);
    for (size_t k = 1; k < c_.size(); ++k)
      dc_[k - 1] = static_cast<double>(k) * c_[k];
  }

  bool flagged() const { return flagged_; }

  int count_segment(double a, double b, double e) {
    return count_box(a, b, e, 0);
  }

  double real_at(double x) const {
    double v = 0;
    for (size_t k = c_.size(); k-- > 0;) v = v * x + c_[k];
    return v;
  }

 private:
  struct Eval {
    std::complex<double> g;
    double log_deriv;
    double phase;
  };

  Eval eval(std::complex<double> z) const {
    std::complex<double> g(0, 0), dg(0, 0);
    for (size_t k = c_.size(); k-- > 1;) {
      g = g * z + c_[k];
      dg = dg * z + dc_[k - 1];
    }
    g = g * z + c_[0];
    const double mag = std::abs(g);
    return {g, mag == 0.0 ? 1e300 : std::abs(dg) / mag, std::arg(g)};
  }

  double walk(std::complex<double> z1, const Eval& e1, std::complex<double> z2,
              const Eval& e2, int depth) const {
    const double h = std::abs(z2 - z1);
    const double step = std::remainder(e2.phase - e1.phase, 2 * std::numbers::pi);
    if (h * std::max(e1.log_deriv, e2.log_deriv) <= 0.8 &&
        std::abs(step) <= 0.5 * std::numbers::pi)
      return step;
    if (depth > 54) throw ContourFailure{};
    const std::complex<double> zm = 0.5 * (z1 + z2);
    const Eval em = eval(zm);
    return walk(z1, e1, zm, em, depth + 1) + walk(zm, em, z2, e2, depth + 1);
  }

  int winding_upper(double a, double b, double e) const {
    const std::complex<double> pts[4] = {{b, 0.0}, {b, e}, {a, e}, {a, 0.0}};
    Eval ev[4];
    for (int i = 0; i < 4; ++i) ev[i] = eval(pts[i]);
    double total = 0;
    for (int i = 0; i < 3; ++i)
      total += walk(pts[i], ev[i], pts[i + 1], ev[i + 1], 0);
    const double w = total / std::numbers::pi;
    const int rounded = static_cast<int>(std::lround(w));
    if (std::abs(w - rounded) > 0.25) throw ContourFailure{};
    return rounded;
  }

  int winding_retrying(double a, double b, double e) const {
    double scale = 1.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      try {
        return winding_upper(a, b, e * scale);
      } catch (const ContourFailure&) {
        scale *= 1.000173;
      }
    }
    throw ContourFailure{};
  }

  double pick_split(double a, double b) const {
    const double w = b - a;
    const double candidates[5] = {a + 0.5 * w, a + 0.43 * w, a + 0.57 * w,
                                  a + 0.31 * w, a + 0.69 * w};
    double best = candidates[0];
    double best_mag = -1.0;
    for (double m : candidates) {
      const double mag = std::abs(real_at(m));
      if (mag > best_mag) {
        best_mag = mag;
        best = m;
      }
    }
    return best;
  }

  int count_box(double a, double b, double e, int depth) {
    const int w = winding_retrying(a, b, e);
    if (w <= 0) return 0;
    if (w == 1) return 1;
    if (b - a < kNearDoubleTol || depth > 60) {
      flagged_ = true;
      return w;
    }
    const double m = pick_split(a, b);
    return count_box(a, m, 0.5 * e, depth + 1) +
           count_box(m, b, 0.5 * e, depth + 1);
  }

  std::vector<double> c_, dc_;
  bool flagged_ = false;
};

// sign-change scan on tan-spaced points; returns cut positions bracketing
// each detected root (cuts placed at scan points of locally largest |g|)
std::vector<double> scan_cuts(const WindingCounter& wc, double lo, double hi,
                              int points) {
  std::vector<double> xs(points), gs(points);
  const double th_lo = std::atan(lo), th_hi = std::atan(hi);
  for (int i = 0; i < points; ++i) {
    const double th = th_lo + (th_hi - th_lo) * i / (points - 1);
    xs[i] = (i == 0) ? lo : (i == points - 1 ? hi : std::tan(th));
    gs[i] = wc.real_at(xs[i]);
  }
  std::vector<double> cuts;
  cuts.push_back(lo);
  int last_change = -1;
  for (int i = 0; i + 1 < points; ++i) {
    if ((gs[i] > 0) == (gs[i + 1] > 0) && gs[i] != 0.0 && gs[i + 1] != 0.0)
      continue;
    if (last_change >= 0) {
      // place a cut at the scan point with largest |g| strictly between the
      // two sign-change cells
      int best = -1;
      double best_mag = -1;
      for (int j = last_change + 1; j <= i; ++j) {
        if (std::abs(gs[j]) > best_mag) {
          best_mag = std::abs(gs[j]);
          best = j;
        }
      }
      if (best > 0 && xs[best] > cuts.back()) cuts.push_back(xs[best]);
    }
    last_change = i + 1;
  }
  cuts.push_back(hi);
  return cuts;
}

int count_chart(WindingCounter& wc, double lo, double hi, double e0,
                int scan_points) {
  const std::vector<double> cuts = scan_cuts(wc, lo, hi, scan_points);
  int total = 0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k)
    total += wc.count_segment(cuts[k], cuts[k + 1], e0);
  return total;
}

}  // namespace

RootCount count_real_roots_winding(std::span<const double> coeffs) {
  const std::vector<double> c = trimmed(coeffs);
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg == 0) return {0, false};
  if (deg == 1) return {1, false};

  const double scale = *std::max_element(
      c.begin(), c.end(), [](double x, double y) { return std::abs(x) < std::abs(y); });
  std::vector<double> cn(c.size()), cr(c.size());
  for (size_t k = 0; k < c.size(); ++k) {
    cn[k] = c[k] / scale;
    cr[c.size() - 1 - k] = cn[k];
  }

  const double edge = 1.0 + 9.5367431640625e-07;  // 1 + 2^-20
  const double e0 = 0.2 / std::sqrt(static_cast<double>(deg));
  const int scan_points = std::max(64, static_cast<int>(
      12.0 * std::sqrt(static_cast<double>(deg))));

  WindingCounter direct(cn), reversed(cr);
  try {
    const int n1 = count_chart(direct, -edge, edge, e0, scan_points);
    const int n2 = count_chart(reversed, -1.0 / edge, 1.0 / edge, e0, scan_points);
    const int total = n1 + n2;
    if ((total - deg) % 2 != 0) {
      // a miscount slipped past the certificates; defer to the reference
      return count_real_roots_companion(coeffs);
    }
    return {total, direct.flagged() || reversed.flagged()};
  } catch (const ContourFailure&) {
    return count_real_roots_companion(coeffs);
  }
}

RootCount count_real_roots(std::span<const double> coeffs) {
  const std::vector<double> c = trimmed(coeffs);
  if (static_cast<int>(c.size()) - 1 <= 128) return count_real_roots_companion(c);
  return count_real_roots_winding(c);
}

}  // namespace zeroset
