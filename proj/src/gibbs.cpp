#include "strip/gibbs.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/quadrature.hpp"

namespace strip {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

long sig_size(Signature2 s) { return s.l1 + s.l2; }

}  // namespace

bool interlaces(Signature2 kappa, Signature2 lambda) {
  return lambda.l1 >= kappa.l1 && kappa.l1 >= lambda.l2 && lambda.l2 >= kappa.l2;
}

// ---------------------------------------------------------------------------
// Two-layer weights

TwoLayerGraph TwoLayerGraph::from_path(const DownRightPath& path) {
  TwoLayerGraph g;
  g.steps = path.steps();
  g.labels = path.labels();
  return g;
}

namespace {

template <class T>
void check_shape(const TwoLayerGraph& g, const TwoLayerValues<T>& x) {
  const std::size_t n = g.steps.size();
  if (g.labels.size() != n || x.top.size() != n + 1 || x.bottom.size() != n + 1)
    throw Error(ErrorKind::ParamDomain, "two-layer configuration does not match its graph");
}

template <class T>
void solid_pair(Step s, const std::vector<T>& layer, std::size_t j, T& x, T& y) {
  if (s == Step::Right) {
    x = layer[j];
    y = layer[j - 1];
  } else {
    x = layer[j - 1];
    y = layer[j];
  }
}

template <class T>
void dashed_pair(Step s, const TwoLayerValues<T>& v, std::size_t j, T& x, T& y) {
  if (s == Step::Right) {
    x = v.top[j - 1];
    y = v.bottom[j];
  } else {
    x = v.top[j];
    y = v.bottom[j - 1];
  }
}

}  // namespace

double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfig& v, double c1, double c2) {
  check_shape(g, v);
  double lw = 0.0;
  for (std::size_t j = 1; j <= g.steps.size(); ++j) {
    const Step s = g.steps[j - 1];
    const double lb = std::log(g.labels[j - 1]);
    for (const auto* layer : {&v.top, &v.bottom}) {
      long x, y;
      solid_pair(s, *layer, j, x, y);
      if (x < y) return kNegInf;
      lw += static_cast<double>(x - y) * lb;
    }
    long x, y;
    dashed_pair(s, v, j, x, y);
    if (x < y) return kNegInf;
  }
  const std::size_t n = g.steps.size();
  if (g.left_arc) lw += static_cast<double>(v.top[0] - v.bottom[0]) * std::log(c1);
  if (g.right_arc) lw += static_cast<double>(v.top[n] - v.bottom[n]) * std::log(c2);
  return lw;
}

double log_wt_two_layer_lg(const TwoLayerGraph& g, const TwoLayerConfigLg& v, double u, double w) {
  check_shape(g, v);
  double lw = 0.0;
  for (std::size_t j = 1; j <= g.steps.size(); ++j) {
    const Step s = g.steps[j - 1];
    const double b = g.labels[j - 1];
    for (const auto* layer : {&v.top, &v.bottom}) {
      double x, y;
      solid_pair(s, *layer, j, x, y);
      lw += log_gamma_weight(b, x - y);
    }
    double x, y;
    dashed_pair(s, v, j, x, y);
    lw -= std::exp(-(x - y));
  }
  const std::size_t n = g.steps.size();
  if (g.left_arc) lw -= u * (v.top[0] - v.bottom[0]);
  if (g.right_arc) lw -= w * (v.top[n] - v.bottom[n]);
  return lw;
}

double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfig& x, const ModelParams& p) {
  return log_wt_two_layer(g, x, p.left_boundary, p.right_boundary);
}

double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfigLg& x, const ModelParams& p) {
  return log_wt_two_layer_lg(g, x, p.left_boundary, p.right_boundary);
}

mpq_class wt_two_layer_exact(const std::vector<Step>& steps, const std::vector<mpq_class>& labels, const mpq_class& c1,
                             const mpq_class& c2, const TwoLayerConfig& v, bool left_arc, bool right_arc) {
  const std::size_t n = steps.size();
  if (labels.size() != n || v.top.size() != n + 1 || v.bottom.size() != n + 1)
    throw Error(ErrorKind::ParamDomain, "two-layer configuration does not match its graph");
  mpq_class w = 1;
  for (std::size_t j = 1; j <= n; ++j) {
    const Step s = steps[j - 1];
    for (const auto* layer : {&v.top, &v.bottom}) {
      long x, y;
      solid_pair(s, *layer, j, x, y);
      if (x < y) return 0;
      w *= qpow(labels[j - 1], x - y);
    }
    long x, y;
    dashed_pair(s, v, j, x, y);
    if (x < y) return 0;
  }
  if (left_arc) w *= qpow(c1, v.top[0] - v.bottom[0]);
  if (right_arc) w *= qpow(c2, v.top[n] - v.bottom[n]);
  return w;
}

// ---------------------------------------------------------------------------
// Geometric identities

ExactPair check_cauchy_geometric(Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b) {
  if (!(a >= 0 && b >= 0 && a * b < 1)) throw Error(ErrorKind::ParamDomain, "Cauchy identity needs 0 <= ab < 1");
  if (lambda.l1 < lambda.l2 || mu.l1 < mu.l2) throw Error(ErrorKind::ParamDomain, "signatures must be non-increasing");
  const mpq_class ab = a * b;
  const long hi1 = std::min(lambda.l1, mu.l1), lo1 = std::max(lambda.l2, mu.l2), m2 = std::min(lambda.l2, mu.l2);
  const long top = std::max(lambda.l1, mu.l1);
  ExactPair out{0, 0};
  if (lo1 > hi1) return out;
  // kappa1 = t in [lo1, hi1], kappa2 = m2 - j, j >= 0.
  mpq_class lhs = 0;
  for (long t = lo1; t <= hi1; ++t)
    lhs += qpow(a, lambda.l1 - t + lambda.l2 - m2) * qpow(b, mu.l1 - t + mu.l2 - m2);
  out.lhs = lhs / (1 - ab);
  // pi1 = top + p, p >= 0; pi2 = s in [lo1, hi1].
  mpq_class inner = 0;
  for (long s = lo1; s <= hi1; ++s) inner += qpow(b, s - lambda.l2) * qpow(a, s - mu.l2);
  out.rhs = qpow(b, top - lambda.l1) * qpow(a, top - mu.l1) * inner / (1 - ab);
  return out;
}

ExactPair check_littlewood_geometric(Signature2 kappa, const mpq_class& a, const mpq_class& c) {
  if (!(a >= 0 && c >= 0 && a * c < 1)) throw Error(ErrorKind::ParamDomain, "Littlewood identity needs 0 <= ac < 1");
  if (kappa.l1 < kappa.l2) throw Error(ErrorKind::ParamDomain, "signature must be non-increasing");
  const long d = kappa.l1 - kappa.l2;
  const mpq_class ac = a * c;
  // lambda1 = kappa2 + k, k in [0, d]; lambda2 = kappa2 - j, j >= 0.
  mpq_class lhs = 0;
  for (long k = 0; k <= d; ++k) lhs += qpow(c, k) * qpow(a, d - k);
  // pi1 = kappa1 + p, p >= 0; pi2 = kappa2 + q, q in [0, d].
  mpq_class rhs = 0;
  for (long q = 0; q <= d; ++q) rhs += qpow(c, d - q) * qpow(a, q);
  return {lhs / (1 - ac), rhs / (1 - ac)};
}

mpq_class cauchy_lhs_term(Signature2 kappa, Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b) {
  if (!interlaces(kappa, lambda) || !interlaces(kappa, mu)) return 0;
  return qpow(a, sig_size(lambda) - sig_size(kappa)) * qpow(b, sig_size(mu) - sig_size(kappa));
}

mpq_class cauchy_rhs_term(Signature2 pi, Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b) {
  if (!interlaces(lambda, pi) || !interlaces(mu, pi)) return 0;
  return qpow(b, sig_size(pi) - sig_size(lambda)) * qpow(a, sig_size(pi) - sig_size(mu));
}

mpq_class littlewood_lhs_term(Signature2 lambda, Signature2 kappa, const mpq_class& a, const mpq_class& c) {
  if (!interlaces(lambda, kappa)) return 0;
  return qpow(c, lambda.l1 - lambda.l2) * qpow(a, sig_size(kappa) - sig_size(lambda));
}

mpq_class littlewood_rhs_term(Signature2 pi, Signature2 kappa, const mpq_class& a, const mpq_class& c) {
  if (!interlaces(kappa, pi)) return 0;
  return qpow(c, pi.l1 - pi.l2) * qpow(a, sig_size(pi) - sig_size(kappa));
}

Signature2 cauchy_bijection(Signature2 kappa, Signature2 lambda, Signature2 mu) {
  return {-kappa.l2 + std::max(lambda.l1, mu.l1) + std::min(lambda.l2, mu.l2),
          -kappa.l1 + std::max(lambda.l2, mu.l2) + std::min(lambda.l1, mu.l1)};
}

Signature2 littlewood_bijection(Signature2 lambda, Signature2 kappa) {
  return {-lambda.l2 + kappa.l1 + kappa.l2, -lambda.l1 + kappa.l2 + kappa.l1};
}

// ---------------------------------------------------------------------------
// Log-gamma identities

double cauchy_lg_log_integrand_kappa(RealSignature2 k, RealSignature2 l, RealSignature2 m, double alpha, double beta) {
  return -alpha * (l.l1 + l.l2 - k.l1 - k.l2) - beta * (m.l1 + m.l2 - k.l1 - k.l2) - std::exp(-(l.l1 - k.l1)) -
         std::exp(-(k.l1 - l.l2)) - std::exp(-(l.l2 - k.l2)) - std::exp(-(m.l1 - k.l1)) - std::exp(-(k.l1 - m.l2)) -
         std::exp(-(m.l2 - k.l2));
}

double cauchy_lg_log_integrand_pi(RealSignature2 p, RealSignature2 l, RealSignature2 m, double alpha, double beta) {
  return -alpha * (p.l1 + p.l2 - m.l1 - m.l2) - beta * (p.l1 + p.l2 - l.l1 - l.l2) - std::exp(-(p.l1 - l.l1)) -
         std::exp(-(l.l1 - p.l2)) - std::exp(-(p.l2 - l.l2)) - std::exp(-(p.l1 - m.l1)) - std::exp(-(m.l1 - p.l2)) -
         std::exp(-(p.l2 - m.l2));
}

RealSignature2 cauchy_lg_substitution(RealSignature2 k, RealSignature2 l, RealSignature2 m) {
  return {-k.l2 + logaddexp(l.l1, m.l1) - logaddexp(-l.l2, -m.l2),
          -k.l1 + logaddexp(l.l2, m.l2) - logaddexp(-l.l1, -m.l1)};
}

double littlewood_lg_log_integrand_lambda(RealSignature2 l, RealSignature2 k, double u, double alpha) {
  return -alpha * (k.l1 + k.l2 - l.l1 - l.l2) - u * (l.l1 - l.l2) - std::exp(-(k.l1 - l.l1)) -
         std::exp(-(l.l1 - k.l2)) - std::exp(-(k.l2 - l.l2));
}

double littlewood_lg_log_integrand_pi(RealSignature2 p, RealSignature2 k, double u, double alpha) {
  return -alpha * (p.l1 + p.l2 - k.l1 - k.l2) - u * (p.l1 - p.l2) - std::exp(-(p.l1 - k.l1)) -
         std::exp(-(k.l1 - p.l2)) - std::exp(-(p.l2 - k.l2));
}

RealSignature2 littlewood_lg_substitution(RealSignature2 l, RealSignature2 k) {
  return {-l.l2 + k.l1 + k.l2, -l.l1 + k.l1 + k.l2};
}

namespace {

// log of the integral of exp(logf) over the plane.  The integrand is
// rescaled by its largest value on a coarse grid around (cx, cy).
double log_integral_plane(const std::function<double(double, double)>& logf, double cx, double cy, double tol,
                          double offset = 0.0) {
  double best = kNegInf, bx = cx, by = cy;
  for (int i = -20; i <= 20; ++i)
    for (int j = -20; j <= 20; ++j) {
      const double x = cx + 0.5 * i, y = cy + 0.5 * j;
      const double v = logf(x, y);
      if (v > best) {
        best = v;
        bx = x;
        by = y;
      }
    }
  if (!std::isfinite(best)) throw Error(ErrorKind::QuadratureFailure, "integrand vanishes near the centre");
  const QuadResult r =
      integrate_plane([&](double x, double y) { return std::exp(logf(x, y) - best); }, bx + offset, by - offset, tol);
  return best + std::log(r.value);
}

double log_integral_line(const std::function<double(double)>& logf, double c, double tol) {
  double best = kNegInf, bx = c;
  for (int i = -80; i <= 80; ++i) {
    const double x = c + 0.25 * i;
    const double v = logf(x);
    if (v > best) {
      best = v;
      bx = x;
    }
  }
  const QuadResult r = integrate_line([&](double x) { return std::exp(logf(x) - best); }, bx, 1.0, tol);
  return best + std::log(r.value);
}

// The two sides are affine images of each other; shifting one quadrature
// centre keeps the node sets from lining up.
constexpr double kRhsOffset = 0.37;

IdentityCheck finish(double log_lhs, double log_rhs) {
  IdentityCheck c;
  c.lhs = std::exp(log_lhs);
  c.rhs = std::exp(log_rhs);
  c.rel_error = std::fabs(std::expm1(log_lhs - log_rhs));
  return c;
}

}  // namespace

IdentityCheck check_cauchy_lg(RealSignature2 l, RealSignature2 m, double alpha, double beta, double tol) {
  if (!(alpha + beta > 0.0)) throw Error(ErrorKind::ParamDomain, "Cauchy identity needs alpha + beta > 0");
  const double mid = 0.5 * (std::max(l.l2, m.l2) + std::min(l.l1, m.l1));
  const double lhs = log_integral_plane(
      [&](double k1, double k2) { return cauchy_lg_log_integrand_kappa({k1, k2}, l, m, alpha, beta); }, mid,
      std::min(l.l2, m.l2) - 1.0, tol);
  const double rhs = log_integral_plane(
      [&](double p1, double p2) { return cauchy_lg_log_integrand_pi({p1, p2}, l, m, alpha, beta); },
      std::max(l.l1, m.l1) + 1.0, mid, tol, kRhsOffset);
  return finish(lhs, rhs);
}

IdentityCheck check_littlewood_lg(RealSignature2 k, double u, double alpha, double tol) {
  if (!(u + alpha > 0.0)) throw Error(ErrorKind::ParamDomain, "Littlewood identity needs u + alpha > 0");
  const double mid = 0.5 * (k.l1 + k.l2);
  const double lhs = log_integral_plane(
      [&](double l1, double l2) { return littlewood_lg_log_integrand_lambda({l1, l2}, k, u, alpha); }, mid,
      k.l2 - 1.0, tol);
  const double rhs = log_integral_plane(
      [&](double p1, double p2) { return littlewood_lg_log_integrand_pi({p1, p2}, k, u, alpha); }, k.l1 + 1.0, mid,
      tol, kRhsOffset);
  return finish(lhs, rhs);
}

double cauchy_lg_pointwise_residual(RealSignature2 k, RealSignature2 l, RealSignature2 m, double alpha, double beta) {
  const double a = cauchy_lg_log_integrand_kappa(k, l, m, alpha, beta);
  const double b = cauchy_lg_log_integrand_pi(cauchy_lg_substitution(k, l, m), l, m, alpha, beta);
  return std::fabs(std::expm1(a - b));
}

double littlewood_lg_pointwise_residual(RealSignature2 l, RealSignature2 k, double u, double alpha) {
  const double a = littlewood_lg_log_integrand_lambda(l, k, u, alpha);
  const double b = littlewood_lg_log_integrand_pi(littlewood_lg_substitution(l, k), k, u, alpha);
  return std::fabs(std::expm1(a - b));
}

// ---------------------------------------------------------------------------
// Geometric kernels

namespace {

// Normalized weight r^{k - lo} on [lo, hi].
mpq_class truncated_geometric_exact(long k, long lo, long hi, const mpq_class& r) {
  if (k < lo || k > hi) return 0;
  mpq_class z = 0;
  for (long i = 0; i <= hi - lo; ++i) z += qpow(r, i);
  return qpow(r, k - lo) / z;
}

double truncated_geometric_pmf(long k, long lo, long hi, double r) {
  if (k < lo || k > hi) return 0.0;
  const long n = hi - lo + 1;
  if (std::fabs(r - 1.0) < 1e-15) return 1.0 / static_cast<double>(n);
  // r^{k-lo} (1-r) / (1-r^n), rewritten for r > 1 to avoid overflow.
  if (r < 1.0) return std::pow(r, static_cast<double>(k - lo)) * (1.0 - r) / (1.0 - std::pow(r, static_cast<double>(n)));
  const double s = 1.0 / r;
  return std::pow(s, static_cast<double>(hi - k)) * (1.0 - s) / (1.0 - std::pow(s, static_cast<double>(n)));
}

void require_kernel_domain(const mpq_class& x) {
  if (!(x > 0 && x < 1)) throw Error(ErrorKind::ParamDomain, "kernel parameter product must lie in (0,1)");
}

void require_kernel_domain(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorKind::ParamDomain, "kernel parameter product must lie in (0,1)");
}

struct BulkRange {
  long base1, lo2, hi2;
};

BulkRange bulk_range(Signature2 l, Signature2 m) {
  BulkRange r{std::max(l.l1, m.l1), std::max(l.l2, m.l2), std::min(l.l1, m.l1)};
  if (r.lo2 > r.hi2) throw Error(ErrorKind::ParamDomain, "neighbours admit no interlacing middle signature");
  return r;
}

}  // namespace

long sample_truncated_geometric(long lo, long hi, double r, RngStream& rng) {
  if (hi < lo) throw Error(ErrorKind::ParamDomain, "empty range");
  const long n = hi - lo + 1;
  if (n == 1) return lo;
  const double u = rng.uniform();
  if (std::fabs(r - 1.0) < 1e-12) return lo + std::min(n - 1, static_cast<long>(u * static_cast<double>(n)));
  const bool flip = r > 1.0;
  const double q = flip ? 1.0 / r : r;
  // Inverse CDF of q^k (1-q) / (1-q^n) on {0..n-1}.
  const double qn = std::pow(q, static_cast<double>(n));
  long k = static_cast<long>(std::floor(std::log1p(-u * (1.0 - qn)) / std::log(q)));
  k = std::clamp(k, 0L, n - 1);
  return flip ? hi - k : lo + k;
}

mpq_class kernel_bulk_pmf_exact(Signature2 pi, Signature2 l, Signature2 m, const mpq_class& a, const mpq_class& b) {
  const mpq_class ab = a * b;
  require_kernel_domain(ab);
  const BulkRange r = bulk_range(l, m);
  if (pi.l1 < r.base1) return 0;
  return geom_pmf_exact(ab, pi.l1 - r.base1) * truncated_geometric_exact(pi.l2, r.lo2, r.hi2, ab);
}

mpq_class kernel_left_pmf_exact(Signature2 pi, Signature2 k, const mpq_class& c1, const mpq_class& a) {
  require_kernel_domain(a * c1);
  if (k.l1 < k.l2) throw Error(ErrorKind::ParamDomain, "signature must be non-increasing");
  if (pi.l1 < k.l1) return 0;
  return geom_pmf_exact(a * c1, pi.l1 - k.l1) * truncated_geometric_exact(pi.l2, k.l2, k.l1, a / c1);
}

mpq_class kernel_right_pmf_exact(Signature2 pi, Signature2 k, const mpq_class& a, const mpq_class& c2) {
  return kernel_left_pmf_exact(pi, k, c2, a);
}

double kernel_bulk_pmf(Signature2 pi, Signature2 l, Signature2 m, double a, double b) {
  require_kernel_domain(a * b);
  const BulkRange r = bulk_range(l, m);
  if (pi.l1 < r.base1) return 0.0;
  return geom_pmf(a * b, pi.l1 - r.base1) * truncated_geometric_pmf(pi.l2, r.lo2, r.hi2, a * b);
}

double kernel_left_pmf(Signature2 pi, Signature2 k, double c1, double a) {
  require_kernel_domain(a * c1);
  if (k.l1 < k.l2) throw Error(ErrorKind::ParamDomain, "signature must be non-increasing");
  if (pi.l1 < k.l1) return 0.0;
  return geom_pmf(a * c1, pi.l1 - k.l1) * truncated_geometric_pmf(pi.l2, k.l2, k.l1, a / c1);
}

double kernel_right_pmf(Signature2 pi, Signature2 k, double a, double c2) { return kernel_left_pmf(pi, k, c2, a); }

Signature2 sample_kernel_bulk(Signature2 l, Signature2 m, double a, double b, RngStream& first, RngStream& second) {
  const BulkRange r = bulk_range(l, m);
  const long p1 = r.base1 + sample_geom(a * b, first);
  return {p1, sample_truncated_geometric(r.lo2, r.hi2, a * b, second)};
}

Signature2 sample_kernel_left(Signature2 k, double c1, double a, RngStream& first, RngStream& second) {
  const long p1 = k.l1 + sample_geom(a * c1, first);
  return {p1, sample_truncated_geometric(k.l2, k.l1, a / c1, second)};
}

Signature2 sample_kernel_right(Signature2 k, double a, double c2, RngStream& first, RngStream& second) {
  const long p1 = k.l1 + sample_geom(a * c2, first);
  return {p1, sample_truncated_geometric(k.l2, k.l1, a / c2, second)};
}

// ---------------------------------------------------------------------------
// Log-gamma kernels

namespace {

double log_bessel_k(double nu, double z) {
  nu = std::fabs(nu);
  if (z > 600.0) {
    // Hankel expansion: K_nu(z) ~ sqrt(pi/(2z)) e^{-z} sum_k a_k(nu) / z^k.
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
      term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
      sum += term;
      if (std::fabs(term) < 1e-17) break;
    }
    return -z + 0.5 * std::log(M_PI / (2.0 * z)) + std::log(sum);
  }
  double k = 0.0;
  try {
    k = boost::math::cyl_bessel_k(nu, z);
  } catch (const std::overflow_error&) {
    k = std::numeric_limits<double>::infinity();
  }
  if (std::isfinite(k) && k > 0.0) return std::log(k);
  // Small-argument leading term.
  if (nu > 0.0) return std::lgamma(nu) + nu * std::log(2.0 / z) - std::log(2.0);
  return std::log(-std::log(z / 2.0) - 0.5772156649015329);
}

double log_pdf_log_inv_gamma_shifted(double x, double theta, double log_scale) {
  // density of x when e^{x} = varpi * e^{log_scale}, varpi ~ InvGamma(theta)
  return log_gamma_weight(theta, x - log_scale) - std::lgamma(theta);
}

}  // namespace

double LogGigLaw::log_unnormalized(double t) const { return p * t - std::exp(log_a + t) - std::exp(log_b - t); }

double LogGigLaw::log_normalizer() const {
  const double h = 0.5 * (log_a + log_b);
  return std::log(2.0) + 0.5 * p * (log_b - log_a) + log_bessel_k(p, 2.0 * std::exp(h));
}

double LogGigLaw::mode() const {
  // A e^t - B e^{-t} = p, i.e. t = (log B - log A)/2 + asinh(p / (2 sqrt(AB))).
  const double h = 0.5 * (log_a + log_b);
  const double centre = 0.5 * (log_b - log_a);
  if (p == 0.0) return centre;
  const double lx = std::log(std::fabs(p) / 2.0) - h;
  double tau;
  if (lx > 300.0) tau = lx + std::log(2.0);
  else tau = std::asinh(std::exp(lx));
  return centre + (p > 0.0 ? tau : -tau);
}

double LogGigLaw::sample(RngStream& rng) const {
  constexpr int kNodes = 4096;
  constexpr double kDrop = 45.0;
  const double m = mode();
  const double gm = log_unnormalized(m);
  double dl = 1.0, dr = 1.0;
  while (log_unnormalized(m - dl) > gm - kDrop && dl < 1e4) dl *= 2.0;
  while (log_unnormalized(m + dr) > gm - kDrop && dr < 1e4) dr *= 2.0;
  const double lo = m - dl, h = (dl + dr) / (kNodes - 1);
  std::vector<double> f(kNodes), cum(kNodes, 0.0);
  for (int i = 0; i < kNodes; ++i) f[i] = std::exp(log_unnormalized(lo + h * i) - gm);
  for (int i = 1; i < kNodes; ++i) cum[i] = cum[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  const double target = rng.uniform() * cum.back();
  const auto it = std::upper_bound(cum.begin(), cum.end(), target);
  const int i = std::clamp(static_cast<int>(it - cum.begin()), 1, kNodes - 1);
  // Invert the linear density on cell [i-1, i].
  const double r = target - cum[i - 1], f0 = f[i - 1], f1 = f[i];
  double s;
  if (std::fabs(f1 - f0) < 1e-12 * (f0 + f1)) s = r / std::max(f0, 1e-300);
  else s = (-f0 + std::sqrt(std::max(0.0, f0 * f0 + 2.0 * (f1 - f0) * r / h))) * h / (f1 - f0);
  return lo + h * (i - 1) + std::clamp(s, 0.0, h);
}

namespace {

LogGigLaw bulk_second_law(RealSignature2 l, RealSignature2 m, double alpha, double beta) {
  return {-(alpha + beta), logaddexp(-l.l1, -m.l1), logaddexp(l.l2, m.l2)};
}

LogGigLaw boundary_second_law(RealSignature2 k, double c, double alpha) { return {c - alpha, -k.l1, k.l2}; }

}  // namespace

double kernel_bulk_logpdf_lg(RealSignature2 pi, RealSignature2 l, RealSignature2 m, double alpha, double beta) {
  if (!(alpha + beta > 0.0)) throw Error(ErrorKind::ParamDomain, "bulk kernel needs alpha + beta > 0");
  return log_pdf_log_inv_gamma_shifted(pi.l1, alpha + beta, logaddexp(l.l1, m.l1)) +
         bulk_second_law(l, m, alpha, beta).logpdf(pi.l2);
}

double kernel_left_logpdf_lg(RealSignature2 pi, RealSignature2 k, double u, double alpha) {
  if (!(alpha + u > 0.0)) throw Error(ErrorKind::ParamDomain, "boundary kernel needs alpha + u > 0");
  return log_pdf_log_inv_gamma_shifted(pi.l1, alpha + u, k.l1) + boundary_second_law(k, u, alpha).logpdf(pi.l2);
}

double kernel_right_logpdf_lg(RealSignature2 pi, RealSignature2 k, double alpha, double v) {
  return kernel_left_logpdf_lg(pi, k, v, alpha);
}

RealSignature2 sample_kernel_bulk_lg(RealSignature2 l, RealSignature2 m, double alpha, double beta, RngStream& first,
                                     RngStream& second) {
  const double p1 = logaddexp(l.l1, m.l1) + sample_log_inv_gamma(alpha + beta, first);
  return {p1, bulk_second_law(l, m, alpha, beta).sample(second)};
}

RealSignature2 sample_kernel_left_lg(RealSignature2 k, double u, double alpha, RngStream& first, RngStream& second) {
  const double p1 = k.l1 + sample_log_inv_gamma(alpha + u, first);
  return {p1, boundary_second_law(k, u, alpha).sample(second)};
}

RealSignature2 sample_kernel_right_lg(RealSignature2 k, double alpha, double v, RngStream& first, RngStream& second) {
  const double p1 = k.l1 + sample_log_inv_gamma(alpha + v, first);
  return {p1, boundary_second_law(k, v, alpha).sample(second)};
}

// ---------------------------------------------------------------------------
// Weight preservation

namespace {

struct LocalGraph {
  std::vector<Step> steps;
  bool left_arc = false, right_arc = false;
  std::size_t moving = 0;  // index of the vertex being summed / updated
};

LocalGraph before_graph(MoveKind k) {
  switch (k) {
    case MoveKind::Bulk: return {{Step::Down, Step::Right}, false, false, 1};
    case MoveKind::LeftBoundary: return {{Step::Right}, true, false, 0};
    case MoveKind::RightBoundary: return {{Step::Down}, false, true, 1};
  }
  return {};
}

LocalGraph after_graph(MoveKind k) {
  switch (k) {
    case MoveKind::Bulk: return {{Step::Right, Step::Down}, false, false, 1};
    case MoveKind::LeftBoundary: return {{Step::Down}, true, false, 0};
    case MoveKind::RightBoundary: return {{Step::Right}, false, true, 1};
  }
  return {};
}

template <class S, class T>
TwoLayerValues<T> local_values(MoveKind k, S left, S right, S middle) {
  switch (k) {
    case MoveKind::Bulk: return {{left.l1, middle.l1, right.l1}, {left.l2, middle.l2, right.l2}};
    case MoveKind::LeftBoundary: return {{middle.l1, left.l1}, {middle.l2, left.l2}};
    case MoveKind::RightBoundary: return {{left.l1, middle.l1}, {left.l2, middle.l2}};
  }
  return {};
}

}  // namespace

ExactPair weight_preservation_geometric(const LocalInstance& inst, const mpq_class& a, const mpq_class& b,
                                        const mpq_class& boundary) {
  const LocalGraph gb = before_graph(inst.kind), ga = after_graph(inst.kind);
  std::vector<mpq_class> lb, la;
  mpq_class c1 = 1, c2 = 1;
  if (inst.kind == MoveKind::Bulk) {
    lb = {a, b};
    la = {b, a};
  } else {
    lb = {a};
    la = {a};
    (inst.kind == MoveKind::LeftBoundary ? c1 : c2) = boundary;
  }
  auto before = [&](long x1, long x2) {
    return wt_two_layer_exact(gb.steps, lb, c1, c2,
                              local_values<Signature2, long>(inst.kind, inst.left, inst.right, Signature2{x1, x2}),
                              gb.left_arc, gb.right_arc);
  };
  long lo = std::min({inst.left.l1, inst.left.l2, inst.right.l1, inst.right.l2}) - 2;
  long hi = std::max({inst.left.l1, inst.left.l2, inst.right.l1, inst.right.l2}) + 2;
  if (inst.kind != MoveKind::Bulk) {
    lo = std::min(inst.left.l1, inst.left.l2) - 2;
    hi = std::max(inst.left.l1, inst.left.l2) + 2;
  }
  // Brute-force sum over the replaced vertex: first coordinate over a box
  // that contains its whole support, second coordinate down to lo with an
  // exact geometric tail below.
  mpq_class total = 0;
  for (long x1 = lo - 1; x1 <= hi + 1; ++x1) {
    mpq_class col = 0;
    for (long x2 = lo; x2 <= hi + 1; ++x2) col += before(x1, x2);
    const mpq_class t1 = before(x1, lo - 1), t2 = before(x1, lo - 2), t3 = before(x1, lo - 3);
    if (t1 != 0) {
      const mpq_class r = t2 / t1;
      if (t3 != r * t2 || !(r < 1)) throw Error(ErrorKind::TruncationTooSmall, "tail of the local sum is not geometric");
      col += t1 / (1 - r);
    }
    if ((x1 == lo - 1 || x1 == hi + 1) && col != 0)
      throw Error(ErrorKind::TruncationTooSmall, "local sum support exceeds the enumeration box");
    total += col;
  }
  const mpq_class after =
      wt_two_layer_exact(ga.steps, la, c1, c2, local_values<Signature2, long>(inst.kind, inst.left, inst.right, inst.pi),
                         ga.left_arc, ga.right_arc);
  mpq_class kernel;
  switch (inst.kind) {
    case MoveKind::Bulk: kernel = kernel_bulk_pmf_exact(inst.pi, inst.left, inst.right, a, b); break;
    case MoveKind::LeftBoundary: kernel = kernel_left_pmf_exact(inst.pi, inst.left, boundary, a); break;
    case MoveKind::RightBoundary: kernel = kernel_right_pmf_exact(inst.pi, inst.left, a, boundary); break;
  }
  return {kernel * total, after};
}

double weight_preservation_lg(const LocalInstanceLg& inst, double a, double b, double boundary, double tol) {
  const LocalGraph gb = before_graph(inst.kind), ga = after_graph(inst.kind);
  TwoLayerGraph before_g{gb.steps, {}, gb.left_arc, gb.right_arc};
  TwoLayerGraph after_g{ga.steps, {}, ga.left_arc, ga.right_arc};
  double u = 0.0, v = 0.0;
  if (inst.kind == MoveKind::Bulk) {
    before_g.labels = {a, b};
    after_g.labels = {b, a};
  } else {
    before_g.labels = {a};
    after_g.labels = {a};
    (inst.kind == MoveKind::LeftBoundary ? u : v) = boundary;
  }
  auto logf = [&](double x1, double x2) {
    return log_wt_two_layer_lg(
        before_g, local_values<RealSignature2, double>(inst.kind, inst.left, inst.right, RealSignature2{x1, x2}), u, v);
  };
  double cx, cy;
  if (inst.kind == MoveKind::Bulk) {
    cx = 0.5 * (std::max(inst.left.l2, inst.right.l2) + std::min(inst.left.l1, inst.right.l1));
    cy = std::min(inst.left.l2, inst.right.l2) - 1.0;
  } else {
    cx = 0.5 * (inst.left.l1 + inst.left.l2);
    cy = inst.left.l2 - 1.0;
  }
  const double log_total = log_integral_plane(logf, cx, cy, tol);
  const double log_after = log_wt_two_layer_lg(
      after_g, local_values<RealSignature2, double>(inst.kind, inst.left, inst.right, inst.pi), u, v);
  double log_kernel = 0.0;
  switch (inst.kind) {
    case MoveKind::Bulk: log_kernel = kernel_bulk_logpdf_lg(inst.pi, inst.left, inst.right, a, b); break;
    case MoveKind::LeftBoundary: log_kernel = kernel_left_logpdf_lg(inst.pi, inst.left, boundary, a); break;
    case MoveKind::RightBoundary: log_kernel = kernel_right_logpdf_lg(inst.pi, inst.left, a, boundary); break;
  }
  return std::fabs(std::expm1(log_kernel + log_total - log_after));
}

// ---------------------------------------------------------------------------
// Two-layer dynamics

TwoLayerState two_layer_tau1_step(const TwoLayerState& s, const ModelParams& p, RngStream& first,
                                  RngStream& second) {
  TwoLayerState cur = s;
  for (const LocalMove& mv : tau1_moves(s.path)) {
    const auto& b = cur.path.labels();
    auto& v = cur.values;
    const std::size_t j = static_cast<std::size_t>(mv.index);
    Signature2 pi;
    switch (mv.kind) {
      case MoveKind::Bulk:
        pi = sample_kernel_bulk({v.top[j - 1], v.bottom[j - 1]}, {v.top[j + 1], v.bottom[j + 1]}, b[j - 1], b[j], first,
                                second);
        break;
      case MoveKind::LeftBoundary:
        pi = sample_kernel_left({v.top[1], v.bottom[1]}, p.left_boundary, b[0], first, second);
        break;
      case MoveKind::RightBoundary:
        pi = sample_kernel_right({v.top[j - 1], v.bottom[j - 1]}, b[j - 1], p.right_boundary, first, second);
        break;
    }
    v.top[j] = pi.l1;
    v.bottom[j] = pi.l2;
    cur.path = apply_local_move(cur.path, mv);
  }
  return cur;
}

TwoLayerStateLg two_layer_tau1_step(const TwoLayerStateLg& s, const ModelParams& p, RngStream& first,
                                    RngStream& second) {
  TwoLayerStateLg cur = s;
  for (const LocalMove& mv : tau1_moves(s.path)) {
    const auto& b = cur.path.labels();
    auto& v = cur.values;
    const std::size_t j = static_cast<std::size_t>(mv.index);
    RealSignature2 pi;
    switch (mv.kind) {
      case MoveKind::Bulk:
        pi = sample_kernel_bulk_lg({v.top[j - 1], v.bottom[j - 1]}, {v.top[j + 1], v.bottom[j + 1]}, b[j - 1], b[j],
                                   first, second);
        break;
      case MoveKind::LeftBoundary:
        pi = sample_kernel_left_lg({v.top[1], v.bottom[1]}, p.left_boundary, b[0], first, second);
        break;
      case MoveKind::RightBoundary:
        pi = sample_kernel_right_lg({v.top[j - 1], v.bottom[j - 1]}, b[j - 1], p.right_boundary, first, second);
        break;
    }
    v.top[j] = pi.l1;
    v.bottom[j] = pi.l2;
    cur.path = apply_local_move(cur.path, mv);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Partition functions

namespace {

double transfer_sum(const ModelParams& p, const DownRightPath& path, int radius) {
  const int w = 2 * radius + 1;
  auto at = [w](int i, int j) { return static_cast<std::size_t>(i) * w + j; };
  std::vector<double> v(static_cast<std::size_t>(w) * w, 0.0), tmp(v.size());
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  // top[0] = 0 is index radius in the first coordinate.
  for (int j = 0; j < w; ++j) v[at(radius, j)] = std::pow(c1, static_cast<double>(radius - j));
  for (std::size_t k = 0; k < path.steps().size(); ++k) {
    const double b = path.labels()[k];
    if (path.steps()[k] == Step::Right) {
      // layer 2: sum over x2 <= y2 of b^{y2-x2}; dashed 1{x1 >= y2}
      for (int i = 0; i < w; ++i) {
        double acc = 0.0;
        for (int j = 0; j < w; ++j) {
          acc = b * acc + v[at(i, j)];
          tmp[at(i, j)] = i >= j ? acc : 0.0;
        }
      }
      // layer 1: sum over x1 <= y1 of b^{y1-x1}
      for (int j = 0; j < w; ++j) {
        double acc = 0.0;
        for (int i = 0; i < w; ++i) {
          acc = b * acc + tmp[at(i, j)];
          v[at(i, j)] = acc;
        }
      }
    } else {
      // layer 1: sum over x1 >= y1 of b^{x1-y1}; dashed 1{y1 >= x2}
      for (int j = 0; j < w; ++j) {
        double acc = 0.0;
        for (int i = w - 1; i >= 0; --i) {
          acc = b * acc + v[at(i, j)];
          tmp[at(i, j)] = i >= j ? acc : 0.0;
        }
      }
      // layer 2: sum over x2 >= y2 of b^{x2-y2}
      for (int i = 0; i < w; ++i) {
        double acc = 0.0;
        for (int j = w - 1; j >= 0; --j) {
          acc = b * acc + tmp[at(i, j)];
          v[at(i, j)] = acc;
        }
      }
    }
  }
  double z = 0.0;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) z += v[at(i, j)] * std::pow(c2, static_cast<double>(i - j));
  return z;
}

}  // namespace

PartitionResult partition_z_lpp(const ModelParams& p, const DownRightPath& path, int radius) {
  if (p.model != Model::GeometricLPP) throw Error(ErrorKind::ParamDomain, "geometric model expected");
  if (!(p.left_boundary * p.right_boundary < 1.0))
    throw Error(ErrorKind::ShockRegion, "partition function is infinite when c1 c2 >= 1");
  if (path.size() != p.n) throw Error(ErrorKind::ParamDomain, "path length must equal N");
  const double z = transfer_sum(p, path, radius);
  const double z_small = transfer_sum(p, path, (3 * radius) / 4);
  return {z, std::fabs(z - z_small)};
}

double partition_z_lpp_upper_bound(const ModelParams& p) {
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  double z = 1.0 / (1.0 - c1 * c2);
  for (int i = 0; i < p.n; ++i) {
    const double a = p.bulk[static_cast<std::size_t>(i)];
    z /= (1.0 - a * c1) * (1.0 - a * c2);
    for (int j = i + 1; j < p.n; ++j) z /= 1.0 - a * p.bulk[static_cast<std::size_t>(j)];
  }
  return z;
}

PartitionResult partition_z_lg_n1(const ModelParams& p, double tol) {
  if (p.model != Model::LogGamma || p.n != 1) throw Error(ErrorKind::ParamDomain, "log-gamma model with N = 1 expected");
  const double u = p.left_boundary, v = p.right_boundary, alpha = p.bulk[0];
  if (!(u + v > 0.0)) throw Error(ErrorKind::ShockRegion, "partition function is infinite when u + v <= 0");
  const TwoLayerGraph g{{Step::Right}, {alpha}, true, true};
  // Free variables: s = top[1], t = bottom[1] - bottom[0], d = -bottom[0].
  auto logw = [&](double s, double t, double d) { return log_wt_two_layer_lg(g, {{0.0, s}, {-d, -d + t}}, u, v); };
  const double cs = -std::log(alpha + v), ct = -std::log(alpha + u), cd = ct - std::log(u + v);
  const double shift = logw(cs, ct, cd);
  const QuadResult r = integrate_space([&](double s, double t, double d) { return std::exp(logw(s, t, d) - shift); },
                                       cs, ct, cd, tol);
  const double value = std::exp(shift) * r.value;
  return {value, std::exp(shift) * r.error};
}

double partition_z_lg_n1_closed_form(double alpha, double u, double v) {
  return std::exp(std::lgamma(u + v) + std::lgamma(alpha + v) + std::lgamma(alpha + u));
}

double zero_mode_identity_residual(double s, double big_s, double tol) {
  if (!(s > 0.0) || !(big_s > 0.0)) throw Error(ErrorKind::ShockRegion, "zero-mode integral diverges");
  const double log_s = std::log(big_s);
  const double log_int = log_integral_line([&](double t) { return -s * t - std::exp(log_s - t); }, log_s - std::log(s), tol);
  const double log_closed = std::lgamma(s) - s * log_s;
  return std::fabs(std::expm1(log_int - log_closed));
}

}  // namespace strip
