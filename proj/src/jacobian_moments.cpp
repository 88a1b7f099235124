#include "zeroset/jacobian_moments.hpp"

#include <cmath>
#include <numbers>

#include "zeroset/parallel.hpp"

namespace zeroset {

XYLaw XYLaw::at(double t, DimPair pair) {
  if (!(t > 0)) throw std::invalid_argument("XYLaw: t must be positive");
  XYLaw law;
  law.t = t;
  law.pair = pair;
  const ScalarFamilies s = ScalarFamilies::at(t);
  law.alpha = 0.5 * (std::sqrt(s.u2) + std::sqrt(s.u1));
  law.beta = 0.5 * (std::sqrt(s.u2) - std::sqrt(s.u1));
  const double c = std::exp(-0.5 * t);
  law.gamma = 0.5 * (std::sqrt(1.0 + c) + std::sqrt(1.0 - c));
  law.delta = 0.5 * (std::sqrt(1.0 + c) - std::sqrt(1.0 - c));

  const int n = pair.n, r = pair.r;
  law.lambda_hat = Eigen::MatrixXd::Identity(2 * r * n, 2 * r * n);
  const Eigen::Matrix2d lam = lambda_tilde(t);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = 2 * (i * n + j);
      if (j == 0) {
        law.lambda_hat.block<2, 2>(k, k) = lam;
      } else {
        law.lambda_hat(k, k + 1) = c;
        law.lambda_hat(k + 1, k) = c;
      }
    }
  }
  return law;
}

void sample_xy(const XYLaw& law, RngStream& rng, Eigen::MatrixXd& x,
               Eigen::MatrixXd& y) {
  const int n = law.pair.n, r = law.pair.r;
  x.resize(r, n);
  y.resize(r, n);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = rng.normal();
      const double b = rng.normal();
      if (j == 0) {
        x(i, j) = law.alpha * a + law.beta * b;
        y(i, j) = law.beta * a + law.alpha * b;
      } else {
        x(i, j) = law.gamma * a + law.delta * b;
        y(i, j) = law.delta * a + law.gamma * b;
      }
    }
  }
}

namespace {

template <int R, int N>
double odet_pair_fixed(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const Eigen::Matrix<double, R, N> xf = x.topLeftCorner<R, N>();
  const Eigen::Matrix<double, R, N> yf = y.topLeftCorner<R, N>();
  const Eigen::Matrix<double, R, R> gx = xf * xf.transpose();
  const Eigen::Matrix<double, R, R> gy = yf * yf.transpose();
  const double dx = std::max(0.0, gx.determinant());
  const double dy = std::max(0.0, gy.determinant());
  return std::sqrt(dx * dy);
}

using OdetPairFn = double (*)(const Eigen::MatrixXd&, const Eigen::MatrixXd&);

template <int R, int N>
constexpr OdetPairFn pick_if_valid() {
  if constexpr (R <= N) return &odet_pair_fixed<R, N>;
  return nullptr;
}

template <int N, int... Rs>
constexpr auto row_for_n(std::integer_sequence<int, Rs...>) {
  return std::array<OdetPairFn, sizeof...(Rs)>{pick_if_valid<Rs + 1, N>()...};
}

constexpr int kMaxFixed = 8;

const std::array<std::array<OdetPairFn, kMaxFixed>, kMaxFixed>& dispatch_table() {
  static const auto table = [] {
    std::array<std::array<OdetPairFn, kMaxFixed>, kMaxFixed> t{};
    auto fill = [&t]<int... Ns>(std::integer_sequence<int, Ns...>) {
      ((t[Ns] = row_for_n<Ns + 1>(std::make_integer_sequence<int, kMaxFixed>{})),
       ...);
    };
    fill(std::make_integer_sequence<int, kMaxFixed>{});
    return t;
  }();
  return table;
}

}  // namespace

double odet_pair_product(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const int r = static_cast<int>(x.rows());
  const int n = static_cast<int>(x.cols());
  if (r == 1 && n == 1) return std::abs(x(0, 0) * y(0, 0));
  if (r <= kMaxFixed && n <= kMaxFixed) {
    const OdetPairFn fn = dispatch_table()[n - 1][r - 1];
    if (fn != nullptr) return fn(x, y);
  }
  return odet(x) * odet(y);
}

JacobianMomentEstimate moment_odet_pair(double t, DimPair pair,
                                        std::int64_t samples, RngStream rng) {
  if (samples < 1) throw std::invalid_argument("moment_odet_pair: samples >= 1");
  const XYLaw law = XYLaw::at(t, pair);
  Eigen::MatrixXd x, y;
  double mean = 0.0, m2 = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    sample_xy(law, rng, x, y);
    const double v = odet_pair_product(x, y);
    const double delta = v - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (v - mean);
  }
  JacobianMomentEstimate est;
  est.t = t;
  est.mean = mean;
  est.std_err = samples > 1
                    ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                                static_cast<double>(samples))
                    : 0.0;
  est.samples = samples;
  est.seed = rng.seed();
  return est;
}

GridMoments moment_odet_pair_grid(std::span<const double> ts, DimPair pair,
                                  std::int64_t samples, std::uint64_t seed,
                                  bool common_random_numbers, int batches,
                                  int threads, bool control_variate) {
  const int nodes = static_cast<int>(ts.size());
  if (batches < 2) batches = 2;
  if (samples < batches) batches = static_cast<int>(std::max<std::int64_t>(2, samples));
  control_variate = control_variate && common_random_numbers;
  GridMoments out;
  out.t.assign(ts.begin(), ts.end());
  out.samples = samples;
  out.seed = seed;
  if (control_variate) {
    out.control_lambda.resize(nodes);
    for (int j = 0; j < nodes; ++j)
      out.control_lambda[j] = std::pow(-std::expm1(-ts[j]), 0.5 * pair.r);
  }
  out.batch_mean.assign(batches, std::vector<double>(nodes, 0.0));

  std::vector<XYLaw> laws;
  laws.reserve(nodes);
  for (double t : ts) laws.push_back(XYLaw::at(t, pair));

  const int r = pair.r, n = pair.n;
  parallel_for_blocks(batches, threads, [&](std::int64_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t lo = b * samples / batches;
    const std::int64_t hi = (b + 1) * samples / batches;
    const std::int64_t count = hi - lo;
    Eigen::MatrixXd a(r, n), bb(r, n), x(r, n), y(r, n);
    std::vector<double>& acc = out.batch_mean[static_cast<int>(b)];
    for (std::int64_t k = 0; k < count; ++k) {
      if (common_random_numbers) {
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < n; ++j) {
            a(i, j) = rng.normal();
            bb(i, j) = rng.normal();
          }
        const double control =
            control_variate ? odet_pair_product(a, bb) : 0.0;
        for (int jn = 0; jn < nodes; ++jn) {
          const XYLaw& law = laws[jn];
          for (int i = 0; i < r; ++i) {
            x(i, 0) = law.alpha * a(i, 0) + law.beta * bb(i, 0);
            y(i, 0) = law.beta * a(i, 0) + law.alpha * bb(i, 0);
            for (int j = 1; j < n; ++j) {
              x(i, j) = law.gamma * a(i, j) + law.delta * bb(i, j);
              y(i, j) = law.delta * a(i, j) + law.gamma * bb(i, j);
            }
          }
          acc[jn] += odet_pair_product(x, y) -
                     (control_variate ? out.control_lambda[jn] * control : 0.0);
        }
      } else {
        for (int jn = 0; jn < nodes; ++jn) {
          sample_xy(laws[jn], rng, x, y);
          acc[jn] += odet_pair_product(x, y);
        }
      }
    }
    for (int jn = 0; jn < nodes; ++jn) acc[jn] /= static_cast<double>(count);
  });

  out.mean.assign(nodes, 0.0);
  out.std_err.assign(nodes, 0.0);
  const double b0 = expected_odet_standard(pair);
  for (int jn = 0; jn < nodes; ++jn) {
    // batches have equal size up to one sample; treat batch means as equal-weight
    double m = 0;
    for (int b = 0; b < batches; ++b) m += out.batch_mean[b][jn];
    m /= batches;
    double v = 0;
    for (int b = 0; b < batches; ++b) {
      const double d = out.batch_mean[b][jn] - m;
      v += d * d;
    }
    v /= (batches - 1);
    const double offset =
        control_variate ? out.control_lambda[jn] * b0 * b0 : 0.0;
    out.mean[jn] = m + offset;  // E[C] = B0^2 exactly
    out.std_err[jn] = std::sqrt(v / batches);
  }
  return out;
}

DnrEstimate dnr_from_moment(const JacobianMomentEstimate& m, DimPair pair) {
  const double shrink = std::pow(-std::expm1(-m.t), 0.5 * pair.r);
  const double b0 = expected_odet_standard(pair);
  DnrEstimate est;
  est.value = m.mean / shrink - b0 * b0;
  est.std_err = m.std_err / shrink;
  est.noisy_small_t = (m.t < 1e-6 && pair.r == pair.n);
  return est;
}

DnrEstimate dnr(double t, DimPair pair, std::int64_t samples, RngStream rng) {
  return dnr_from_moment(moment_odet_pair(t, pair, samples, rng), pair);
}

}  // namespace zeroset
