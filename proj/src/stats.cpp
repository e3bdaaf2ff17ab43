#include "strip/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "strip/error.hpp"
#include "strip/rng.hpp"

namespace strip {

namespace {

constexpr std::size_t kMaxBins = 4096;

WeightedEcdf build(std::vector<std::pair<double, double>> vw) {
  if (vw.empty()) throw Error(ErrorKind::EmptySample, "empty sample");
  std::sort(vw.begin(), vw.end());
  double total = 0.0, sq = 0.0;
  for (const auto& p : vw) {
    if (!(p.second >= 0.0) || !std::isfinite(p.second)) throw Error(ErrorKind::ParamDomain, "invalid weight");
    total += p.second;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::AllZeroWeights, "all weights are zero");
  WeightedEcdf e;
  e.values.reserve(vw.size());
  e.weights.reserve(vw.size());
  for (const auto& p : vw) {
    const double w = p.second / total;
    e.values.push_back(p.first);
    e.weights.push_back(w);
    sq += w * w;
  }
  e.ess = 1.0 / sq;
  return e;
}

// Pooled support of two ECDFs, coarsened to at most kMaxBins cells by
// pooled probability mass.  Keeps the cell of every atom so the samples can
// be resampled atom by atom.
struct Binned {
  std::vector<double> p1, p2;
  std::vector<std::uint32_t> cell1, cell2;
};

Binned bin_pair(const WeightedEcdf& a, const WeightedEcdf& b) {
  struct Atom {
    double x, w1, w2;
  };
  std::vector<Atom> atoms;
  atoms.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a.values[i] <= b.values[j])) x = a.values[i];
    else x = b.values[j];
    Atom at{x, 0.0, 0.0};
    while (i < a.size() && a.values[i] == x) at.w1 += a.weights[i++];
    while (j < b.size() && b.values[j] == x) at.w2 += b.weights[j++];
    atoms.push_back(at);
  }
  // upper[k] is the largest value falling in cell k
  std::vector<double> upper;
  Binned out;
  if (atoms.size() <= kMaxBins) {
    for (const auto& at : atoms) {
      out.p1.push_back(at.w1);
      out.p2.push_back(at.w2);
      upper.push_back(at.x);
    }
  } else {
    const double la = a.ess / (a.ess + b.ess), lb = 1.0 - la;
    double cum = 0.0, c1 = 0.0, c2 = 0.0;
    std::size_t next = 1;
    for (const auto& at : atoms) {
      c1 += at.w1;
      c2 += at.w2;
      cum += la * at.w1 + lb * at.w2;
      if (cum >= static_cast<double>(next) / kMaxBins) {
        out.p1.push_back(c1);
        out.p2.push_back(c2);
        upper.push_back(at.x);
        c1 = c2 = 0.0;
        while (cum >= static_cast<double>(next) / kMaxBins) ++next;
      }
    }
    if (c1 > 0.0 || c2 > 0.0 || upper.empty() || upper.back() < atoms.back().x) {
      out.p1.push_back(c1);
      out.p2.push_back(c2);
      upper.push_back(atoms.back().x);
    }
  }
  auto assign = [&](const WeightedEcdf& e, std::vector<std::uint32_t>& cell) {
    cell.resize(e.size());
    std::size_t k = 0;
    for (std::size_t t = 0; t < e.size(); ++t) {
      while (upper[k] < e.values[t]) ++k;
      cell[t] = static_cast<std::uint32_t>(k);
    }
  };
  assign(a, out.cell1);
  assign(b, out.cell2);
  return out;
}

// Binomial draw; sequential inversion when the mean is small.
long binomial(long n, double q, RngStream& rng) {
  if (q <= 0.0 || n == 0) return 0;
  if (q >= 1.0) return n;
  if (q > 0.5) return n - binomial(n, 1.0 - q, rng);
  if (static_cast<double>(n) * q > 40.0) {
    std::binomial_distribution<long> bd(n, q);
    return bd(rng);
  }
  const double s = q / (1.0 - q), a = static_cast<double>(n + 1) * s;
  double r = std::pow(1.0 - q, static_cast<double>(n));
  double u = rng.uniform();
  long x = 0;
  while (u > r) {
    u -= r;
    ++x;
    if (x > n) return n;
    r *= a / static_cast<double>(x) - s;
  }
  return x;
}

void multinomial(long n, const std::vector<double>& p, RngStream& rng, std::vector<double>& counts) {
  counts.assign(p.size(), 0.0);
  double rest = 1.0;
  long left = n;
  for (std::size_t k = 0; k < p.size() && left > 0; ++k) {
    if (p[k] <= 0.0) continue;
    const double q = std::min(1.0, p[k] / rest);
    const long c = binomial(left, q, rng);
    counts[k] = static_cast<double>(c);
    left -= c;
    rest -= p[k];
    if (rest <= 0.0) rest = 1e-300;
  }
}

bool equal_weights(const WeightedEcdf& e) {
  return std::all_of(e.weights.begin(), e.weights.end(), [&](double w) { return w == e.weights.front(); });
}

// Draws size() atoms with replacement and returns normalized cell masses.
// With equal weights this is a multinomial draw over the cells.
void resample_atoms(const WeightedEcdf& e, const std::vector<std::uint32_t>& cell, std::size_t cells, RngStream& rng,
                    std::vector<double>& mass, const std::vector<double>* cell_mass) {
  if (cell_mass) {
    multinomial(static_cast<long>(e.size()), *cell_mass, rng, mass);
    for (double& m : mass) m /= static_cast<double>(e.size());
    return;
  }
  mass.assign(cells, 0.0);
  std::uniform_int_distribution<std::size_t> pick(0, e.size() - 1);
  double total = 0.0;
  for (std::size_t t = 0; t < e.size(); ++t) {
    const std::size_t i = pick(rng);
    mass[cell[i]] += e.weights[i];
    total += e.weights[i];
  }
  for (double& m : mass) m /= total;
}

}  // namespace

WeightedEcdf WeightedEcdf::unweighted(std::vector<double> values) {
  std::vector<std::pair<double, double>> vw;
  vw.reserve(values.size());
  for (double v : values) vw.emplace_back(v, 1.0);
  return build(std::move(vw));
}

WeightedEcdf WeightedEcdf::from_weights(const std::vector<double>& values, const std::vector<double>& weights) {
  if (values.size() != weights.size()) throw Error(ErrorKind::ParamDomain, "values/weights size mismatch");
  std::vector<std::pair<double, double>> vw;
  vw.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) vw.emplace_back(values[i], weights[i]);
  return build(std::move(vw));
}

WeightedEcdf WeightedEcdf::from_log_weights(const std::vector<double>& values, const std::vector<double>& logw) {
  if (logw.empty()) throw Error(ErrorKind::EmptySample, "empty sample");
  const double m = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(m)) throw Error(ErrorKind::AllZeroWeights, "no finite log-weight");
  std::vector<double> w(logw.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logw[i] - m);
  return from_weights(values, w);
}

double WeightedEcdf::cdf(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size() && values[i] <= x; ++i) s += weights[i];
  return s;
}

double WeightedEcdf::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

double WeightedEcdf::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * (values[i] - mu) * (values[i] - mu);
  return s;
}

double ess(const std::vector<double>& w) {
  double s = 0.0, sq = 0.0;
  for (double x : w) {
    if (x < 0.0) throw Error(ErrorKind::ParamDomain, "negative weight");
    s += x;
    sq += x * x;
  }
  if (!(s > 0.0)) throw Error(ErrorKind::AllZeroWeights, "all weights are zero");
  return s * s / sq;
}

double ess_from_log_weights(const std::vector<double>& logw) {
  if (logw.empty()) throw Error(ErrorKind::EmptySample, "empty sample");
  const double m = *std::max_element(logw.begin(), logw.end());
  if (!std::isfinite(m)) throw Error(ErrorKind::AllZeroWeights, "no finite log-weight");
  double s = 0.0, sq = 0.0;
  for (double l : logw) {
    const double w = std::exp(l - m);
    s += w;
    sq += w * w;
  }
  return s * s / sq;
}

double ks_statistic(const WeightedEcdf& a, const WeightedEcdf& b) {
  if (a.size() == 0 || b.size() == 0) throw Error(ErrorKind::EmptySample, "empty sample");
  std::size_t i = 0, j = 0;
  double fa = 0.0, fb = 0.0, d = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a.values[i] <= b.values[j])) x = a.values[i];
    else x = b.values[j];
    while (i < a.size() && a.values[i] == x) fa += a.weights[i++];
    while (j < b.size() && b.values[j] == x) fb += b.weights[j++];
    d = std::max(d, std::fabs(fa - fb));
  }
  return std::min(d, 1.0);
}

KsResult ks_two_sample(const WeightedEcdf& a, const WeightedEcdf& b, std::uint64_t seed, int resamples) {
  KsResult r;
  r.statistic = ks_statistic(a, b);
  r.ess1 = a.ess;
  r.ess2 = b.ess;
  const Binned bins = bin_pair(a, b);
  const std::size_t cells = bins.p1.size();
  std::vector<double> diff(cells);
  double f1 = 0.0, f2 = 0.0, observed = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    f1 += bins.p1[k];
    f2 += bins.p2[k];
    diff[k] = f1 - f2;
    observed = std::max(observed, std::fabs(diff[k]));
  }
  const std::vector<double>* fast1 = equal_weights(a) ? &bins.p1 : nullptr;
  const std::vector<double>* fast2 = equal_weights(b) ? &bins.p2 : nullptr;
  RngStream rng(seed, 0x6b73);
  std::vector<double> m1, m2;
  int exceed = 0;
  for (int t = 0; t < resamples; ++t) {
    resample_atoms(a, bins.cell1, cells, rng, m1, fast1);
    resample_atoms(b, bins.cell2, cells, rng, m2, fast2);
    double g1 = 0.0, g2 = 0.0, d = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
      g1 += m1[k];
      g2 += m2[k];
      d = std::max(d, std::fabs(g1 - g2 - diff[k]));
    }
    if (d >= observed - 1e-12) ++exceed;
  }
  r.p_value = (1.0 + exceed) / (1.0 + resamples);
  return r;
}

double ks_bootstrap_se(const WeightedEcdf& a, const WeightedEcdf& b, std::uint64_t seed, int resamples) {
  const Binned bins = bin_pair(a, b);
  const std::size_t cells = bins.p1.size();
  const std::vector<double>* fast1 = equal_weights(a) ? &bins.p1 : nullptr;
  const std::vector<double>* fast2 = equal_weights(b) ? &bins.p2 : nullptr;
  RngStream rng(seed, 0x7365);
  std::vector<double> m1, m2;
  double s = 0.0, sq = 0.0;
  for (int t = 0; t < resamples; ++t) {
    resample_atoms(a, bins.cell1, cells, rng, m1, fast1);
    resample_atoms(b, bins.cell2, cells, rng, m2, fast2);
    double g1 = 0.0, g2 = 0.0, d = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
      g1 += m1[k];
      g2 += m2[k];
      d = std::max(d, std::fabs(g1 - g2));
    }
    s += d;
    sq += d * d;
  }
  const double m = s / resamples;
  return std::sqrt(std::max(0.0, sq / resamples - m * m));
}

double kolmogorov_q(double t) {
  if (t <= 0.0) return 1.0;
  if (t < 0.2) return 1.0;
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * t * t);
    s += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_one_sample(const WeightedEcdf& a, const std::function<double(double)>& cdf) {
  if (a.size() == 0) throw Error(ErrorKind::EmptySample, "empty sample");
  double f = 0.0, d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double g = cdf(a.values[i]);
    d = std::max(d, std::fabs(g - f));
    f += a.weights[i];
    if (i + 1 == a.size() || a.values[i + 1] != a.values[i]) d = std::max(d, std::fabs(g - f));
  }
  KsResult r;
  r.statistic = d;
  r.ess1 = a.ess;
  const double sn = std::sqrt(a.ess);
  // Stephens' small-sample correction of the asymptotic law.
  r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
  return r;
}

double chi_square_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& probs) {
  if (observed.size() != probs.size() || observed.empty()) throw Error(ErrorKind::ParamDomain, "bad chi-square input");
  const double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  const double pmass = std::accumulate(probs.begin(), probs.end(), 0.0);
  double stat = 0.0, obs_acc = 0.0, exp_acc = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    obs_acc += observed[k];
    exp_acc += n * probs[k] / pmass;
    if (exp_acc >= 5.0) {
      stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
      ++cells;
      obs_acc = exp_acc = 0.0;
    }
  }
  if (exp_acc > 0.0) {
    stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

double tv_discrete(const std::map<long, double>& p, const std::map<long, double>& q) {
  double s = 0.0;
  for (const auto& [k, v] : p) {
    auto it = q.find(k);
    s += std::fabs(v - (it == q.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : q)
    if (p.find(k) == p.end()) s += std::fabs(v);
  return 0.5 * s;
}

}  // namespace strip
