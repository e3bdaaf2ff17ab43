#pragma once

#include <gmpxx.h>

#include "strip/rng.hpp"

namespace strip {

// Geometric law on {0,1,2,...} with P(X=k) = (1-a) a^k.
double geom_pmf(double a, long k);
mpq_class geom_pmf_exact(const mpq_class& a, long k);
long sample_geom(double a, RngStream& rng);

// Y = log of an inverse-gamma(theta) variate, i.e. Y = -log G with
// G ~ Gamma(theta, 1).  Density e^{-theta y - e^{-y}} / Gamma(theta).
double sample_log_inv_gamma(double theta, RngStream& rng);
// log G for G ~ Gamma(theta, 1); stays finite for tiny theta.
double sample_log_gamma_variate(double theta, RngStream& rng);
double log_inv_gamma_logpdf(double theta, double y);
double log_inv_gamma_cdf(double theta, double y);

// log f_theta(x) with f_theta(x) = e^{-theta x - e^{-x}}.
double log_gamma_weight(double theta, double x);

double logaddexp(double a, double b);

// Exact integer powers of rationals, with 0^0 = 1.
mpq_class qpow(const mpq_class& base, long exponent);

}  // namespace strip
