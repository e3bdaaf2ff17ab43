#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace strip {

// Sorted sample with normalized weights.
struct WeightedEcdf {
  std::vector<double> values;
  std::vector<double> weights;
  double ess = 0.0;

  static WeightedEcdf unweighted(std::vector<double> values);
  static WeightedEcdf from_weights(const std::vector<double>& values, const std::vector<double>& weights);
  static WeightedEcdf from_log_weights(const std::vector<double>& values, const std::vector<double>& log_weights);

  double cdf(double x) const;
  double mean() const;
  double variance() const;
  std::size_t size() const { return values.size(); }
};

double ess(const std::vector<double>& weights);
double ess_from_log_weights(const std::vector<double>& log_weights);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double ess1 = 0.0;
  double ess2 = 0.0;
};

double ks_statistic(const WeightedEcdf& a, const WeightedEcdf& b);

// Two-sample KS with a bootstrap p-value.  Each sample is resampled atom by
// atom (value and weight together) and the null law of the statistic is that
// of the centred difference sup |(F1* - F2*) - (F1 - F2)|.  This keeps the
// extra variance caused by weights that correlate with the values.
KsResult ks_two_sample(const WeightedEcdf& a, const WeightedEcdf& b, std::uint64_t seed, int resamples = 1000);

// Bootstrap standard error of the two-sample KS statistic, resampling the
// atoms of each sample.
double ks_bootstrap_se(const WeightedEcdf& a, const WeightedEcdf& b, std::uint64_t seed, int resamples = 200);

// One-sample KS against a continuous CDF, asymptotic Kolmogorov p-value at
// the effective sample size.
KsResult ks_one_sample(const WeightedEcdf& a, const std::function<double(double)>& cdf);

// Kolmogorov survival function Q(t) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 t^2}.
double kolmogorov_q(double t);

// Chi-square goodness of fit; bins with expected count < 5 are pooled.
double chi_square_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& probs);

double tv_discrete(const std::map<long, double>& p, const std::map<long, double>& q);

}  // namespace strip
