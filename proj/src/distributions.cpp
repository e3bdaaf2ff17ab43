#include "strip/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "strip/error.hpp"

namespace strip {

double geom_pmf(double a, long k) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::ParamDomain, "geometric parameter must lie in (0,1)");
  if (k < 0) return 0.0;
  return (1.0 - a) * std::pow(a, static_cast<double>(k));
}

mpq_class geom_pmf_exact(const mpq_class& a, long k) {
  if (!(a > 0 && a < 1)) throw Error(ErrorKind::ParamDomain, "geometric parameter must lie in (0,1)");
  if (k < 0) return 0;
  return (1 - a) * qpow(a, k);
}

long sample_geom(double a, RngStream& rng) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::ParamDomain, "geometric parameter must lie in (0,1)");
  // Inversion: floor(log U / log a) has pmf (1-a) a^k.
  return static_cast<long>(std::floor(std::log(rng.uniform()) / std::log(a)));
}

double sample_log_gamma_variate(double theta, RngStream& rng) {
  if (!(theta > 0.0)) throw Error(ErrorKind::ParamDomain, "gamma shape must be positive");
  if (theta >= 1.0) {
    std::gamma_distribution<double> g(theta, 1.0);
    return std::log(g(rng));
  }
  // Gamma(theta) = Gamma(theta+1) * U^{1/theta}, taken in logs.
  std::gamma_distribution<double> g(theta + 1.0, 1.0);
  return std::log(g(rng)) + std::log(rng.uniform()) / theta;
}

double sample_log_inv_gamma(double theta, RngStream& rng) {
  if (!(theta > 0.0)) throw Error(ErrorKind::ParamDomain, "log-inverse-gamma parameter must be positive");
  return -sample_log_gamma_variate(theta, rng);
}

double log_inv_gamma_logpdf(double theta, double y) {
  return log_gamma_weight(theta, y) - std::lgamma(theta);
}

double log_inv_gamma_cdf(double theta, double y) {
  // P(-log G <= y) = P(G >= e^{-y}).
  return boost::math::gamma_q(theta, std::exp(-y));
}

double log_gamma_weight(double theta, double x) {
  return -theta * x - std::exp(-x);
}

double logaddexp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

mpq_class qpow(const mpq_class& base, long exponent) {
  if (exponent == 0) return 1;
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorKind::ParamDomain, "negative power of zero");
    mpq_class inv = 1 / base;
    return qpow(inv, -exponent);
  }
  mpq_class result = 1, b = base;
  long e = exponent;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

}  // namespace strip
