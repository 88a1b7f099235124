#include "zeroset/kostlan.hpp"

#include <cmath>
#include <numbers>

#include "zeroset/jacobian_moments.hpp"
#include "zeroset/parallel.hpp"
#include "zeroset/quadrature.hpp"

namespace zeroset {

namespace {

void enumerate_rec(int pos, int remaining, int n, std::vector<int>& cur,
                   std::vector<int>& out) {
  if (pos == n) {
    cur[pos] = remaining;
    out.insert(out.end(), cur.begin(), cur.end());
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[pos] = a;
    enumerate_rec(pos + 1, remaining - a, n, cur, out);
  }
}

}  // namespace

MultiIndexTable::MultiIndexTable(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 1) throw std::invalid_argument("MultiIndexTable: n, d >= 1");
  std::vector<int> cur(n + 1);
  enumerate_rec(0, d, n, cur, alphas_);
  const int count = static_cast<int>(alphas_.size()) / (n + 1);
  weights_.resize(count);
  for (int k = 0; k < count; ++k)
    weights_[k] = std::exp(0.5 * log_multinomial(d, alpha(k)));
}

KostlanSample sample_kostlan(int n, int d, int r, RngStream& rng) {
  if (r < 1 || r > n) throw std::invalid_argument("sample_kostlan: 1 <= r <= n");
  KostlanSample s;
  s.n = n;
  s.d = d;
  s.r = r;
  s.table = std::make_shared<MultiIndexTable>(n, d);
  s.coeffs.resize(r);
  for (int i = 0; i < r; ++i) {
    s.coeffs[i].resize(s.table->size());
    for (int k = 0; k < s.table->size(); ++k) s.coeffs[i][k] = rng.normal();
  }
  return s;
}

double log_kss_norm_factor(int n, int d) {
  return 0.5 * (std::lgamma(d + n + 1.0) - n * std::log(std::numbers::pi) -
                std::lgamma(d + 1.0));
}

namespace {

// sum_alpha a_alpha w_alpha x^alpha with x_0 = 1, plus chart partials
double chart_sum(const KostlanSample& s, int component,
                 const Eigen::Ref<const Eigen::VectorXd>& x,
                 Eigen::VectorXd* grad) {
  const MultiIndexTable& tab = *s.table;
  const int n = tab.n();
  double acc = 0;
  if (grad) grad->setZero(n);
  for (int k = 0; k < tab.size(); ++k) {
    const std::span<const int> a = tab.alpha(k);
    double mono = 1.0;
    for (int i = 1; i <= n; ++i)
      for (int rep = 0; rep < a[i]; ++rep) mono *= x[i - 1];
    const double c = s.coeffs[component][k] * tab.sqrt_weight(k);
    acc += c * mono;
    if (grad) {
      for (int i = 1; i <= n; ++i) {
        if (a[i] == 0) continue;
        double dm = a[i];
        for (int j = 1; j <= n; ++j) {
          const int pow = (j == i) ? a[j] - 1 : a[j];
          for (int rep = 0; rep < pow; ++rep) dm *= x[j - 1];
        }
        (*grad)[i - 1] += c * dm;
      }
    }
  }
  return acc;
}

}  // namespace

double kss_value_normalized(const KostlanSample& s, int component,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double p = chart_sum(s, component, x, nullptr);
  return p * std::exp(-0.5 * s.d * std::log1p(x.squaredNorm()));
}

void kss_value_and_gradient(const KostlanSample& s, int component,
                            const Eigen::Ref<const Eigen::VectorXd>& x,
                            double* value, Eigen::VectorXd* gradient) {
  Eigen::VectorXd dp;
  const double p = chart_sum(s, component, x, &dp);
  const double q = x.squaredNorm();
  const double scale = std::exp(-0.5 * s.d * std::log1p(q));
  if (value) *value = p * scale;
  if (gradient) *gradient = scale * (dp - (s.d / (1.0 + q)) * p * x);
}

std::vector<double> sample_kss_univariate(int d, RngStream& rng) {
  std::vector<double> lw(d + 1);
  const double lgd = std::lgamma(d + 1.0);
  double lmax = 0;
  for (int k = 0; k <= d; ++k) {
    lw[k] = 0.5 * (lgd - std::lgamma(k + 1.0) - std::lgamma(d - k + 1.0));
    lmax = std::max(lmax, lw[k]);
  }
  std::vector<double> c(d + 1);
  for (int k = 0; k <= d; ++k) c[k] = rng.normal() * std::exp(lw[k] - lmax);
  return c;
}

double xi_d(const Eigen::Ref<const Eigen::VectorXd>& w,
            const Eigen::Ref<const Eigen::VectorXd>& z, std::int64_t d) {
  const double num = 1.0 + w.dot(z);
  if (num == 0.0) return 0.0;
  const double lg = std::log(std::abs(num)) - 0.5 * std::log1p(w.squaredNorm()) -
                    0.5 * std::log1p(z.squaredNorm());
  const double mag = std::exp(d * lg);
  return (num < 0 && (d % 2 != 0)) ? -mag : mag;
}

XiJet xi_d_jet(const Eigen::Ref<const Eigen::VectorXd>& w,
               const Eigen::Ref<const Eigen::VectorXd>& z, std::int64_t d) {
  const double xi = xi_d(w, z, d);
  const double pw = 1.0 + w.squaredNorm();
  const double pz = 1.0 + z.squaredNorm();
  const double pc = 1.0 + w.dot(z);
  const double dd = static_cast<double>(d);
  const Eigen::Index n = w.size();
  XiJet jet;
  jet.grad_x = dd * xi * (z / pc - w / pw);
  jet.grad_y = dd * xi * (w / pc - z / pz);
  jet.hess_xy.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = -dd * dd * w[i] * w[j] / (pc * pw) -
                 dd * dd * z[i] * z[j] / (pc * pz) +
                 dd * dd * w[i] * z[j] / (pw * pz) +
                 (dd * dd - dd) * z[i] * w[j] / (pc * pc);
      if (i == j) v += dd / pc;
      jet.hess_xy(i, j) = xi * v;
    }
  return jet;
}

JetCovarianceBlocks jet_covariance_blocks(double t, std::int64_t d) {
  if (t < 0 || d < 1)
    throw std::invalid_argument("jet_covariance_blocks: t >= 0, d >= 1");
  JetCovarianceBlocks b;
  b.t = t;
  b.d = d;
  const double q = std::exp(-0.5 * d * std::log1p(t));  // (1+t)^{-d/2}
  const double sq = std::sqrt(static_cast<double>(d) * t) * q;
  b.A << 1, q, q, 1;
  b.B << 0, sq, -sq, 0;
  b.C << 1, q * std::sqrt(1.0 + t), q * std::sqrt(1.0 + t), 1;
  b.D << 1, (1.0 + t - d * t) * q, (1.0 + t - d * t) * q, 1;
  return b;
}

Eigen::MatrixXd JetCovarianceBlocks::assemble_joint(int n) const {
  const int dim = 2 * (n + 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  m.block<2, 2>(0, 0) = A;
  m.block<2, 2>(2, 0) = B;
  m.block<2, 2>(0, 2) = B.transpose();
  m.block<2, 2>(2, 2) = D;
  for (int j = 2; j <= n; ++j) m.block<2, 2>(2 * j, 2 * j) = C;
  return m;
}

double f_d(double t, std::int64_t d, int n) {
  const double dd = static_cast<double>(d);
  const double u = 1.0 + t / dd;
  const double envelope = std::exp(-dd * std::log1p(t / dd));
  const double poly = (u - t) * (u - t) + (n - 1) * u - 2.0 * n * t +
                      static_cast<double>(n) * n;
  return envelope * poly;
}

double f_limit(double t, int n) {
  return (t * t - 2.0 * t * (n + 1) + static_cast<double>(n) * (n + 1)) *
         std::exp(-t);
}

double jnr_bare_integral(std::int64_t d, int n, double rel_tol) {
  // t = s^2 removes the half-integer endpoint power for odd n
  auto integrand = [d, n](double s) {
    const double t = s * s;
    const double chart =
        std::exp(-0.5 * (n + 1) * std::log1p(t / static_cast<double>(d)));
    return 2.0 * f_d(t, d, n) * std::pow(s, n - 1) * chart;
  };
  return integrate_to_infinity(integrand, 0.0, rel_tol);
}

double jnr_integral(std::int64_t d, DimPair pair, double rel_tol) {
  if (2 * d < pair.n + 4)
    throw std::domain_error("jnr_integral: need d >= n/2 + 2 for the "
                            "dominated tail");
  const double bare = jnr_bare_integral(d, pair.n, rel_tol);
  return std::exp(-0.5 * pair.n * std::log(static_cast<double>(d))) * pair.r *
         sphere_volume(pair.n - 1) * bare;
}

SecondChaos second_chaos_variance(std::int64_t d, DimPair pair, double rel_tol) {
  const double j = jnr_integral(d, pair, rel_tol);
  const int n = pair.n, r = pair.r;
  const double front = std::exp(2.0 * log_sphere_volume(n - r) -
                                log_sphere_volume(n)) /
                       (8.0 * n * n);
  SecondChaos sc;
  sc.variance = std::pow(static_cast<double>(d), r) * front * j;
  sc.normalized = std::pow(static_cast<double>(d), 0.5 * n - r) * sc.variance;
  sc.limit = r * (1.0 + 2.0 / n) * std::pow(std::numbers::pi, 0.5 * n) *
             std::exp(2.0 * log_sphere_volume(n - r) - log_sphere_volume(n)) /
             16.0;
  return sc;
}

ChaosCoefficients chaos_coefficients(DimPair pair) {
  ChaosCoefficients c;
  c.pair = pair;
  c.b0 = expected_odet_standard(pair);
  c.b2 = c.b0 / (pair.n * std::sqrt(2.0));
  return c;
}

double hermite(int k, double x) {
  if (k < 0) throw std::invalid_argument("hermite: k >= 0");
  double hk = 1.0, hk1 = x;  // H_0, H_1
  if (k == 0) return hk;
  for (int j = 1; j < k; ++j) {
    const double next = x * hk1 - j * hk;
    hk = hk1;
    hk1 = next;
  }
  return hk1;
}

namespace {

Eigen::MatrixXd kss_joint_covariance(const JetCovarianceBlocks& b, DimPair pair) {
  const int n = pair.n, r = pair.r;
  const int dim = 2 * r * (n + 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  // values first: (t^(i)(0), t^(i)(z)) pairs, then jets (L^(i,j)(0), L^(i,j)(z))
  for (int i = 0; i < r; ++i) {
    m.block<2, 2>(2 * i, 2 * i) = b.A;
    const int jet0 = 2 * r + 2 * i * n;
    m.block<2, 2>(jet0, 2 * i) = b.B;
    m.block<2, 2>(2 * i, jet0) = b.B.transpose();
    m.block<2, 2>(jet0, jet0) = b.D;
    for (int j = 1; j < n; ++j)
      m.block<2, 2>(jet0 + 2 * j, jet0 + 2 * j) = b.C;
  }
  return m;
}

}  // namespace

KacRiceDensity kac_rice_density_kss(double t, std::int64_t d, DimPair pair,
                                    std::int64_t samples, RngStream& rng) {
  if (!(t > 1e-10)) throw SingularBlockError(t);
  const JetCovarianceBlocks blocks = jet_covariance_blocks(t, d);
  const Eigen::MatrixXd joint = kss_joint_covariance(blocks, pair);
  const Eigen::MatrixXd cond = condition_on_zero(joint, 2 * pair.r);
  const GaussianLaw law(cond);

  const int n = pair.n, r = pair.r;
  Eigen::MatrixXd x(r, n), y(r, n);
  double mean = 0, m2 = 0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const Eigen::VectorXd v = law.sample(rng);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < n; ++j) {
        x(i, j) = v[2 * (i * n + j)];
        y(i, j) = v[2 * (i * n + j) + 1];
      }
    const double p = odet_pair_product(x, y);
    const double delta = p - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (p - mean);
  }
  const double std_err =
      samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) /
                              static_cast<double>(samples))
                  : 0.0;

  const double q = blocks.A(0, 1);
  const double det_root = std::pow(1.0 - q * q, 0.5 * r);
  const double b0 = expected_odet_standard(pair);
  const double dr = std::pow(static_cast<double>(d), r);
  KacRiceDensity out;
  out.density = dr * (mean / det_root - b0 * b0);
  out.std_err = dr * std_err / det_root;
  return out;
}

KacRiceVariance kac_rice_variance_rp1(std::int64_t d,
                                      std::int64_t samples_per_node,
                                      std::uint64_t seed, int threads,
                                      int nodes_per_panel, int batches) {
  // z-grid panels sized to the 1/sqrt(d) correlation length
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  const std::vector<std::pair<double, double>> panels = {
      {0.0, 2.0 * w}, {2.0 * w, 6.0 * w}, {6.0 * w, 1.0}, {1.0, 3.5}};
  std::vector<double> zs, ws;
  for (const auto& [lo, hi] : panels) {
    if (!(lo < hi)) continue;
    for (const QuadNode& q : gauss_legendre(nodes_per_panel, lo, hi)) {
      zs.push_back(q.x);
      ws.push_back(q.w / (1.0 + q.x * q.x));
    }
  }
  const int nodes = static_cast<int>(zs.size());

  // conditional 2x2 covariance of the normalized jets given both values
  // vanish, and its sampling factor, per node
  std::vector<Eigen::Matrix2d> factors(nodes);
  std::vector<double> det_roots(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double t = zs[j] * zs[j];
    const JetCovarianceBlocks b = jet_covariance_blocks(t, d);
    const Eigen::Matrix2d cond =
        b.D - b.B * b.A.inverse() * b.B.transpose();
    factors[j] = sampling_factor(cond);
    det_roots[j] = std::sqrt(1.0 - b.A(0, 1) * b.A(0, 1));
  }

  const double b0sq = 2.0 / std::numbers::pi;  // E|N(0,1)|^2
  std::vector<std::vector<double>> batch_mean(
      batches, std::vector<double>(nodes, 0.0));
  parallel_for_blocks(batches, threads, [&](std::int64_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    const std::int64_t lo = b * samples_per_node / batches;
    const std::int64_t hi = (b + 1) * samples_per_node / batches;
    std::vector<double>& acc = batch_mean[static_cast<int>(b)];
    for (std::int64_t k = lo; k < hi; ++k) {
      const double g0 = rng.normal();
      const double g1 = rng.normal();
      for (int j = 0; j < nodes; ++j) {
        const double xv = factors[j](0, 0) * g0 + factors[j](0, 1) * g1;
        const double yv = factors[j](1, 0) * g0 + factors[j](1, 1) * g1;
        acc[j] += std::abs(xv * yv);
      }
    }
    const double count = static_cast<double>(hi - lo);
    for (int j = 0; j < nodes; ++j) acc[j] /= count;
  });

  const double dd = static_cast<double>(d);
  auto variance_of = [&](const std::vector<double>& means) {
    double acc = 0;
    for (int j = 0; j < nodes; ++j)
      acc += ws[j] * dd * (means[j] / det_roots[j] - b0sq);
    return acc + std::sqrt(dd);
  };

  std::vector<double> node_mean(nodes, 0.0);
  for (int b = 0; b < batches; ++b)
    for (int j = 0; j < nodes; ++j) node_mean[j] += batch_mean[b][j];
  for (int j = 0; j < nodes; ++j) node_mean[j] /= batches;

  KacRiceVariance out;
  out.variance = variance_of(node_mean);
  out.mean = std::sqrt(dd);
  double bm = 0, bv = 0;
  std::vector<double> bi(batches);
  for (int b = 0; b < batches; ++b) {
    bi[b] = variance_of(batch_mean[b]);
    bm += bi[b];
  }
  bm /= batches;
  for (int b = 0; b < batches; ++b) bv += (bi[b] - bm) * (bi[b] - bm);
  out.std_err = std::sqrt(bv / (batches - 1) / batches);
  return out;
}

}  // namespace zeroset
