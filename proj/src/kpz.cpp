#include "strip/kpz.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>

#include "strip/error.hpp"
#include "strip/parallel.hpp"
#include "strip/rng.hpp"

namespace strip {

double digamma(double z) {
  if (!(z > 0.0)) throw Error(ErrorKind::ParamDomain, "digamma needs z > 0");
  return boost::math::digamma(z);
}

double trigamma(double z) {
  if (!(z > 0.0)) throw Error(ErrorKind::ParamDomain, "trigamma needs z > 0");
  return boost::math::trigamma(z);
}

double ScaledProcess::at(double x) const {
  const double t = x / epsilon;
  const std::size_t last = values.size() - 1;
  if (t <= 0.0) return values.front();
  if (t >= static_cast<double>(last)) return values.back();
  const std::size_t j = static_cast<std::size_t>(std::floor(t));
  const double f = t - static_cast<double>(j);
  return (1.0 - f) * values[j] + f * values[j + 1];
}

WeightedEcdf MarginalSample::marginal(std::size_t k) const {
  return WeightedEcdf::from_log_weights(values.at(k), log_weights);
}

ModelParams intermediate_disorder_params(double epsilon, double length, double u, double v) {
  if (!(epsilon > 0.0) || !(length > 0.0)) throw Error(ErrorKind::ParamDomain, "epsilon and L must be positive");
  const int n = static_cast<int>(std::floor(length / epsilon + 1e-9));
  if (n < 1) throw Error(ErrorKind::ParamDomain, "L / epsilon must be at least 1");
  return validate_params(ModelParams::log_gamma(n, 0.5 + 1.0 / epsilon, u, v));
}

namespace {

ScaledProcess make_process(double epsilon, const std::vector<double>& walk, double drift, double scale) {
  ScaledProcess s;
  s.epsilon = epsilon;
  s.values.resize(walk.size() + 1);
  s.values[0] = 0.0;
  for (std::size_t j = 0; j < walk.size(); ++j)
    s.values[j + 1] = scale * (walk[j] - drift * static_cast<double>(j + 1));
  return s;
}

}  // namespace

std::vector<ScaledPair> rescale_stationary(const IsSample& s, const ModelParams& p, double epsilon, double length) {
  const ModelParams expect = intermediate_disorder_params(epsilon, length, p.left_boundary, p.right_boundary);
  if (p.model != Model::LogGamma || p.n != expect.n || std::fabs(p.bulk_at(1) - expect.bulk_at(1)) > 1e-9)
    throw Error(ErrorKind::ParamDomain, "sample was not drawn at alpha = 1/2 + 1/epsilon, N = L / epsilon");
  std::vector<ScaledPair> out;
  out.reserve(s.samples.size());
  const double drift = std::log(epsilon);  // B(x_j) = L(j) - j log(eps)
  for (const auto& w : s.samples)
    out.push_back({make_process(epsilon, w.walks.l1, drift, 1.0), make_process(epsilon, w.walks.l2, drift, 1.0),
                   w.log_weight});
  return out;
}

namespace {

int universal_sites(double epsilon) {
  const int n = static_cast<int>(std::lround(1.0 / epsilon));
  if (n < 1) throw Error(ErrorKind::ParamDomain, "1 / epsilon must be at least 1");
  return n;
}

}  // namespace

ModelParams universal_geometric_params(double epsilon, double a, double u_tilde, double v_tilde) {
  const double sigma = std::sqrt(a) / (1.0 - a);
  const double s = std::sqrt(epsilon) / sigma;
  return validate_params(
      ModelParams::geometric(universal_sites(epsilon), a, std::exp(-u_tilde * s), std::exp(-v_tilde * s)));
}

ModelParams universal_log_gamma_params(double epsilon, double alpha, double u_tilde, double v_tilde) {
  const double s = std::sqrt(epsilon / trigamma(alpha));
  return validate_params(ModelParams::log_gamma(universal_sites(epsilon), alpha, u_tilde * s, v_tilde * s));
}

std::vector<ScaledPair> rescale_universal(const IsSample& s, const ModelParams& p, double epsilon) {
  const int n = universal_sites(epsilon);
  if (p.n != n) throw Error(ErrorKind::ParamDomain, "sample length must be 1 / epsilon");
  for (int j = 2; j <= p.n; ++j)
    if (p.bulk_at(j) != p.bulk_at(1)) throw Error(ErrorKind::ParamDomain, "universality scaling needs a homogeneous bulk");
  double m, sigma2;
  if (p.model == Model::GeometricLPP) {
    const double a = p.bulk_at(1);
    m = a / (1.0 - a);
    sigma2 = a / ((1.0 - a) * (1.0 - a));
  } else {
    m = -digamma(p.bulk_at(1));
    sigma2 = trigamma(p.bulk_at(1));
  }
  const double h = 1.0 / n, scale = std::sqrt(h / sigma2);
  std::vector<ScaledPair> out;
  out.reserve(s.samples.size());
  for (const auto& w : s.samples)
    out.push_back({make_process(h, w.walks.l1, m, scale), make_process(h, w.walks.l2, m, scale), w.log_weight});
  return out;
}

MarginalSample marginals_of(const std::vector<ScaledPair>& pairs, const std::vector<double>& points) {
  MarginalSample m;
  m.points = points;
  m.values.assign(points.size(), std::vector<double>(pairs.size()));
  m.log_weights.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t k = 0; k < points.size(); ++k) m.values[k][i] = pairs[i].b1.at(points[k]);
    m.log_weights[i] = pairs[i].log_weight;
  }
  m.ess = ess_from_log_weights(m.log_weights);
  return m;
}

namespace {

std::vector<int> grid_indices(const std::vector<double>& points, double length, int grid_m) {
  std::vector<int> idx;
  for (double x : points) {
    if (x < 0.0 || x > length) throw Error(ErrorKind::ParamDomain, "evaluation point outside [0, L]");
    idx.push_back(static_cast<int>(std::lround(x / length * grid_m)));
  }
  return idx;
}

}  // namespace

HariyaYorSample sample_hariya_yor(const HariyaYorOptions& opt, std::uint64_t seed) {
  if (opt.grid_m < 2) throw Error(ErrorKind::ParamDomain, "grid must have at least 2 intervals");
  if (opt.n == 0) throw Error(ErrorKind::EmptySample, "sample size must be positive");
  const double u = opt.u, v = opt.v, len = opt.length;
  const bool fan = u + v >= 0.0;
  const double d1 = -v, d2 = fan ? v : -u;
  const double dt = len / opt.grid_m, sd = std::sqrt(dt);
  const std::vector<int> idx = grid_indices(opt.points, len, opt.grid_m);

  HariyaYorSample out;
  MarginalSample& m = out.b1;
  m.points = opt.points;
  m.values.assign(idx.size(), std::vector<double>(opt.n));
  m.log_weights.resize(opt.n);
  parallel_for(opt.n, opt.threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    double b1 = 0.0, b2 = 0.0;
    // trapezoid rule for int_0^L e^{-(B1 - B2)} ds
    double prev = 1.0, integral = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == 0) m.values[k][i] = 0.0;
    for (int s = 1; s <= opt.grid_m; ++s) {
      b1 += d1 * dt + sd * rng.normal();
      b2 += d2 * dt + sd * rng.normal();
      const double cur = std::exp(-(b1 - b2));
      integral += 0.5 * dt * (prev + cur);
      prev = cur;
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (idx[k] == s) m.values[k][i] = b1;
    }
    const double log_i = std::log(integral);
    m.log_weights[i] = fan ? -(u + v) * log_i : -(u + v) * (log_i - b2);
  });
  m.ess = ess_from_log_weights(m.log_weights);
  if (m.ess < opt.min_ess) throw Error(ErrorKind::DegenerateWeights, "Hariya-Yor sample has too small an ESS");
  if (fan) {
    double s = 0.0, sq = 0.0;
    for (double lw : m.log_weights) {
      const double w = std::exp(lw);
      s += w;
      sq += w * w;
    }
    const double n = static_cast<double>(opt.n);
    out.z_estimate = s / n;
    out.z_std_error = std::sqrt(std::max(0.0, sq / n - out.z_estimate * out.z_estimate) / n);
  }
  return out;
}

MarginalSample sample_universal_limit(double u_tilde, double v_tilde, std::size_t n, std::uint64_t seed,
                                      const std::vector<double>& points, int grid_m, int threads, double min_ess) {
  if (grid_m < 2) throw Error(ErrorKind::ParamDomain, "grid must have at least 2 intervals");
  if (n == 0) throw Error(ErrorKind::EmptySample, "sample size must be positive");
  const double dt = 1.0 / grid_m, sd = std::sqrt(dt);
  const std::vector<int> idx = grid_indices(points, 1.0, grid_m);
  MarginalSample m;
  m.points = points;
  m.values.assign(idx.size(), std::vector<double>(n));
  m.log_weights.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    double b1 = 0.0, b2 = 0.0, lo = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      if (idx[k] == 0) m.values[k][i] = 0.0;
    for (int s = 1; s <= grid_m; ++s) {
      b1 += -v_tilde * dt + sd * rng.normal();
      b2 += v_tilde * dt + sd * rng.normal();
      lo = std::min(lo, b1 - b2);
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (idx[k] == s) m.values[k][i] = b1;
    }
    m.log_weights[i] = (u_tilde + v_tilde) * lo;
  });
  m.ess = ess_from_log_weights(m.log_weights);
  if (m.ess < min_ess) throw Error(ErrorKind::DegenerateWeights, "limit sample has too small an ESS");
  return m;
}

ZEstimate discrete_normalization(const IsSample& s) {
  if (s.proposal != Proposal::LogGammaFan)
    throw Error(ErrorKind::ParamDomain, "discrete normalization needs the log-gamma fan proposal");
  double sum = 0.0, sq = 0.0;
  for (const auto& w : s.samples) {
    const double x = std::exp(w.log_weight);
    sum += x;
    sq += x * x;
  }
  const double n = static_cast<double>(s.samples.size());
  ZEstimate z;
  z.value = sum / n;
  z.std_error = std::sqrt(std::max(0.0, sq / n - z.value * z.value) / n);
  return z;
}

ConvergenceReport convergence_diagnostic(const ConvergenceOptions& opt, std::uint64_t seed) {
  ConvergenceReport rep;
  HariyaYorOptions hy;
  hy.u = opt.u;
  hy.v = opt.v;
  hy.length = opt.length;
  hy.grid_m = opt.grid_m;
  hy.n = opt.n;
  hy.points = opt.points;
  hy.threads = opt.threads;
  const HariyaYorSample target = sample_hariya_yor(hy, derive_seed(seed, 1));
  rep.hy_ess = target.b1.ess;
  rep.z_hy = target.z_estimate;
  rep.z_hy_se = target.z_std_error;
  std::vector<WeightedEcdf> target_marg;
  for (std::size_t k = 0; k < opt.points.size(); ++k) target_marg.push_back(target.b1.marginal(k));

  for (std::size_t e = 0; e < opt.epsilons.size(); ++e) {
    const double eps = opt.epsilons[e];
    const ModelParams p = intermediate_disorder_params(eps, opt.length, opt.u, opt.v);
    const IsSample s = sample_stationary_is(p, opt.n, derive_seed(seed, 100 + e), opt.threads);
    const MarginalSample ms = marginals_of(rescale_stationary(s, p, eps, opt.length), opt.points);
    ConvergenceRow row;
    row.epsilon = eps;
    row.n_sites = p.n;
    row.alpha = p.bulk_at(1);
    row.ess = s.ess;
    for (std::size_t k = 0; k < opt.points.size(); ++k) {
      const WeightedEcdf a = ms.marginal(k);
      const double d = ks_statistic(a, target_marg[k]);
      const double se = ks_bootstrap_se(a, target_marg[k], derive_seed(seed, 1000 + 10 * e + k), opt.bootstrap);
      row.ks.push_back(d);
      row.ks_se.push_back(se);
      if (d >= row.ks_max) {
        row.ks_max = d;
        row.ks_max_se = se;
      }
    }
    if (s.proposal == Proposal::LogGammaFan) {
      const ZEstimate z = discrete_normalization(s);
      row.z = z.value;
      row.z_se = z.std_error;
    }
    rep.rows.push_back(row);
  }
  rep.monotone_within_ci = true;
  for (std::size_t e = 1; e < rep.rows.size(); ++e) {
    const auto& a = rep.rows[e - 1];
    const auto& b = rep.rows[e];
    if (b.ks_max > a.ks_max + 2.0 * std::hypot(a.ks_max_se, b.ks_max_se)) rep.monotone_within_ci = false;
  }
  return rep;
}

}  // namespace strip
