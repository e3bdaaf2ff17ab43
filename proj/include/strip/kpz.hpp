#pragma once

#include <cstdint>
#include <vector>

#include "strip/params.hpp"
#include "strip/stationary.hpp"
#include "strip/stats.hpp"

namespace strip {

// Piecewise-linear path on the grid x_j = j * epsilon, j = 0..N.
struct ScaledProcess {
  double epsilon = 0.0;
  std::vector<double> values;  // values[j] at x = j * epsilon, values[0] = 0

  double at(double x) const;
};

struct ScaledPair {
  ScaledProcess b1;
  ScaledProcess b2;
  double log_weight = 0.0;
};

// Weighted samples of B1 evaluated at a few points.
struct MarginalSample {
  std::vector<double> points;
  std::vector<std::vector<double>> values;  // values[k][i]: sample i at points[k]
  std::vector<double> log_weights;
  double ess = 0.0;

  WeightedEcdf marginal(std::size_t k) const;
};

// alpha = 1/2 + 1/epsilon and N = floor(L / epsilon).
ModelParams intermediate_disorder_params(double epsilon, double length, double u, double v);

// B_i(x) = -(x / epsilon) log(epsilon) + L_i(x / epsilon).  Throws
// ParamDomain if the sample was not drawn at the matching alpha and N.
std::vector<ScaledPair> rescale_stationary(const IsSample& s, const ModelParams& p, double epsilon, double length);

// Universality scaling on [0, 1] with N = 1/epsilon:
// B_i(x) = (sqrt(eps) / sigma) (L_i(x / eps) - m x / eps), with (m, sigma^2)
// the mean and variance of one increment of the reference walk.
ModelParams universal_geometric_params(double epsilon, double a, double u_tilde, double v_tilde);
ModelParams universal_log_gamma_params(double epsilon, double alpha, double u_tilde, double v_tilde);
std::vector<ScaledPair> rescale_universal(const IsSample& s, const ModelParams& p, double epsilon);

MarginalSample marginals_of(const std::vector<ScaledPair>& pairs, const std::vector<double>& points);

// Hariya-Yor measure on [0, L] by importance sampling on a uniform grid of
// grid_m intervals; the time integral uses the trapezoid rule.
struct HariyaYorOptions {
  double u = 1.0;
  double v = 1.0;
  double length = 1.0;
  int grid_m = 1024;
  std::size_t n = 100000;
  std::vector<double> points{0.25, 0.5, 1.0};
  int threads = 1;
  double min_ess = 0.0;
};

struct HariyaYorSample {
  MarginalSample b1;
  // Monte Carlo estimate of E_BM^{-v,v}[(int e^{-(B1-B2)})^{-u-v}] with its
  // standard error; only filled when u + v >= 0.
  double z_estimate = 0.0;
  double z_std_error = 0.0;
};

HariyaYorSample sample_hariya_yor(const HariyaYorOptions& opt, std::uint64_t seed);

// Limit law on [0, 1]: weight exp((u+v) min (B1 - B2)) under BM^{-v, v},
// discrete minimum over grid_m intervals.
MarginalSample sample_universal_limit(double u_tilde, double v_tilde, std::size_t n, std::uint64_t seed,
                                      const std::vector<double>& points, int grid_m = 1024, int threads = 1,
                                      double min_ess = 0.0);

struct ZEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Discrete normalization E[(eps sum_j e^{B2(eps j) - B1(eps (j-1))})^{-u-v}]
// from a log-gamma fan-proposal sample, with its standard error.  The
// -j log(eps) shifts cancel the factor eps, so this is the mean IS weight.
ZEstimate discrete_normalization(const IsSample& s);

struct ConvergenceRow {
  double epsilon = 0.0;
  int n_sites = 0;
  double alpha = 0.0;
  double ess = 0.0;
  std::vector<double> ks;     // one per point
  std::vector<double> ks_se;  // bootstrap standard errors
  double ks_max = 0.0;
  double ks_max_se = 0.0;
  double z = 0.0;
  double z_se = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  double hy_ess = 0.0;
  double z_hy = 0.0;
  double z_hy_se = 0.0;
  bool monotone_within_ci = false;
};

struct ConvergenceOptions {
  std::vector<double> epsilons{0.2, 0.1, 0.05};
  double u = 1.0;
  double v = 1.0;
  double length = 1.0;
  std::size_t n = 100000;
  int grid_m = 1024;
  std::vector<double> points{0.25, 0.5, 1.0};
  int threads = 1;
  int bootstrap = 200;
};

ConvergenceReport convergence_diagnostic(const ConvergenceOptions& opt, std::uint64_t seed);

double digamma(double z);
double trigamma(double z);

}  // namespace strip
