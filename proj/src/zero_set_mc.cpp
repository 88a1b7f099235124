#include "zeroset/zero_set_mc.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "zeroset/parallel.hpp"

namespace zeroset {

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

struct MomentAccumulator {
  // moments about a fixed shift c, merged deterministically
  double shift = 0;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  std::int64_t n = 0;

  void add(double x) {
    const double y = x - shift;
    s1 += y;
    s2 += y * y;
    s3 += y * y * y;
    s4 += y * y * y * y;
    ++n;
  }
  void merge(const MomentAccumulator& o) {
    s1 += o.s1;
    s2 += o.s2;
    s3 += o.s3;
    s4 += o.s4;
    n += o.n;
  }
};

void finalize_stats(const MomentAccumulator& acc, ZeroStats& out) {
  const double nn = static_cast<double>(acc.n);
  const double delta = acc.s1 / nn;
  out.mean = acc.shift + delta;
  const double var_pop = std::max(0.0, acc.s2 / nn - delta * delta);
  out.var = acc.n > 1 ? var_pop * nn / (nn - 1.0) : 0.0;
  const double m4 = std::max(
      0.0, (acc.s4 - 4 * delta * acc.s3 + 6 * delta * delta * acc.s2) / nn -
               3 * delta * delta * delta * delta);
  out.mean_ci = kZ99 * std::sqrt(var_pop / nn);
  out.var_ci = kZ99 * std::sqrt(std::max(0.0, m4 - var_pop * var_pop) / nn);
}

}  // namespace

ZeroStats empirical_root_stats(int d, std::int64_t samples, std::uint64_t seed,
                               int threads) {
  if (d < 1 || samples < 1)
    throw std::invalid_argument("empirical_root_stats: d >= 1, samples >= 1");
  const std::int64_t block = 256;
  const std::int64_t blocks = (samples + block - 1) / block;
  std::vector<MomentAccumulator> accs(blocks);
  std::vector<std::vector<std::int64_t>> hists(
      blocks, std::vector<std::int64_t>(d + 1, 0));

  const double shift = std::sqrt(static_cast<double>(d));
  parallel_for_blocks(blocks, threads, [&](std::int64_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    MomentAccumulator acc;
    acc.shift = shift;
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(samples, lo + block);
    for (std::int64_t k = lo; k < hi; ++k) {
      std::vector<double> coeffs = sample_kss_univariate(d, rng);
      while (coeffs.back() == 0.0) coeffs = sample_kss_univariate(d, rng);
      const RootCount rc = count_real_roots(coeffs);
      if (rc.count < 0 || rc.count > d)
        throw std::logic_error("root count out of [0, d]");
      if ((rc.count - d) % 2 != 0)
        throw std::logic_error("root count parity violation");
      acc.add(static_cast<double>(rc.count));
      ++hists[b][rc.count];
    }
    accs[b] = acc;
  });

  MomentAccumulator total;
  total.shift = shift;
  ZeroStats out;
  out.histogram.assign(d + 1, 0);
  for (std::int64_t b = 0; b < blocks; ++b) {
    total.merge(accs[b]);
    for (int k = 0; k <= d; ++k) out.histogram[k] += hists[b][k];
  }
  out.d = d;
  out.samples = samples;
  out.seed = seed;
  finalize_stats(total, out);
  return out;
}

std::vector<double> restrict_kostlan_to_line(const KostlanSample& s,
                                             int component,
                                             const Eigen::Vector3d& u,
                                             const Eigen::Vector3d& v) {
  if (s.n != 2) throw std::invalid_argument("restriction needs n = 2");
  const MultiIndexTable& tab = *s.table;
  const int d = s.d;

  // powers[i][k] = coefficients of (u_i + t v_i)^k
  std::vector<std::vector<std::vector<double>>> powers(3);
  for (int i = 0; i < 3; ++i) {
    powers[i].resize(d + 1);
    powers[i][0] = {1.0};
    for (int k = 1; k <= d; ++k) {
      const std::vector<double>& prev = powers[i][k - 1];
      std::vector<double>& cur = powers[i][k];
      cur.assign(k + 1, 0.0);
      for (int j = 0; j < k; ++j) {
        cur[j] += prev[j] * u[i];
        cur[j + 1] += prev[j] * v[i];
      }
    }
  }

  std::vector<double> q(d + 1, 0.0);
  std::vector<double> tmp;
  for (int k = 0; k < tab.size(); ++k) {
    const std::span<const int> a = tab.alpha(k);
    const std::vector<double>& p0 = powers[0][a[0]];
    const std::vector<double>& p1 = powers[1][a[1]];
    const std::vector<double>& p2 = powers[2][a[2]];
    tmp.assign(a[0] + a[1] + 1, 0.0);
    for (size_t i = 0; i < p0.size(); ++i)
      for (size_t j = 0; j < p1.size(); ++j) tmp[i + j] += p0[i] * p1[j];
    const double w = s.coeffs[component][k] * tab.sqrt_weight(k);
    for (size_t i = 0; i < tmp.size(); ++i)
      for (size_t j = 0; j < p2.size(); ++j) q[i + j] += w * tmp[i] * p2[j];
  }
  return q;
}

ZeroStats crofton_length_stats(int d, std::int64_t samples,
                               int slices_per_sample, std::uint64_t seed,
                               int threads) {
  if (d < 1 || samples < 1 || slices_per_sample < 1)
    throw std::invalid_argument("crofton_length_stats: bad arguments");
  const std::int64_t block = 16;
  const std::int64_t blocks = (samples + block - 1) / block;
  std::vector<MomentAccumulator> accs(blocks);
  const double shift = std::numbers::pi * std::sqrt(static_cast<double>(d));

  parallel_for_blocks(blocks, threads, [&](std::int64_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    MomentAccumulator acc;
    acc.shift = shift;
    const std::int64_t lo = b * block;
    const std::int64_t hi = std::min(samples, lo + block);
    for (std::int64_t k = lo; k < hi; ++k) {
      const KostlanSample s = sample_kostlan(2, d, 1, rng);
      std::int64_t hits = 0;
      for (int slice = 0; slice < slices_per_sample; ++slice) {
        Eigen::Matrix<double, 3, 2> g;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
        const Eigen::Matrix<double, 3, 2> q =
            Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>>(g)
                .householderQ() *
            Eigen::Matrix<double, 3, 2>::Identity();
        const std::vector<double> restricted =
            restrict_kostlan_to_line(s, 0, q.col(0), q.col(1));
        hits += count_real_roots(restricted).count;
      }
      acc.add(std::numbers::pi * static_cast<double>(hits) /
              static_cast<double>(slices_per_sample));
    }
    accs[b] = acc;
  });

  MomentAccumulator total;
  total.shift = shift;
  for (std::int64_t b = 0; b < blocks; ++b) total.merge(accs[b]);
  ZeroStats out;
  out.d = d;
  out.samples = samples;
  out.seed = seed;
  finalize_stats(total, out);
  return out;
}

}  // namespace zeroset
