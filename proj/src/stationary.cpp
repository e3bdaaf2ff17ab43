#include "strip/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/lg_dynamics.hpp"
#include "strip/lpp_dynamics.hpp"
#include "strip/parallel.hpp"

namespace strip {

std::string to_string(Proposal p) {
  switch (p) {
    case Proposal::GeometricPlain: return "geometric-plain";
    case Proposal::GeometricFan: return "geometric-fan";
    case Proposal::GeometricShock: return "geometric-shock";
    case Proposal::LogGammaFan: return "log-gamma-fan";
    case Proposal::LogGammaShifted: return "log-gamma-shifted";
  }
  return "unknown";
}

Proposal choose_proposal(const ModelParams& p) {
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  if (p.model == Model::GeometricLPP) {
    if (c1 * c2 >= 1.0) return Proposal::GeometricShock;
    for (int j = 1; j <= p.n; ++j)
      if (p.bulk_at(j) >= c2) return Proposal::GeometricPlain;
    return Proposal::GeometricFan;
  }
  if (c1 + c2 <= 0.0) return Proposal::LogGammaShifted;
  for (int j = 1; j <= p.n; ++j)
    if (p.bulk_at(j) <= c2) return Proposal::LogGammaShifted;
  return Proposal::LogGammaFan;
}

namespace {

// max_j (L2(j) - L1(j-1)) with L1(0) = 0.
double max_gap(const WalkPair& w) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < w.l2.size(); ++j) m = std::max(m, w.l2[j] - (j == 0 ? 0.0 : w.l1[j - 1]));
  return m;
}

// log sum_j exp(L2(j) - L1(j-1) - shift)
double log_gap_sum(const WalkPair& w, double shift) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < w.l2.size(); ++j) m = std::max(m, w.l2[j] - (j == 0 ? 0.0 : w.l1[j - 1]) - shift);
  double s = 0.0;
  for (std::size_t j = 0; j < w.l2.size(); ++j) s += std::exp(w.l2[j] - (j == 0 ? 0.0 : w.l1[j - 1]) - shift - m);
  return m + std::log(s);
}

void check_walks(const WalkPair& w) {
  if (w.l1.empty() || w.l1.size() != w.l2.size()) throw Error(ErrorKind::ParamDomain, "walks must have equal length N >= 1");
}

}  // namespace

double log_v_lpp(const WalkPair& w, double c1, double c2) {
  check_walks(w);
  const std::size_t n = w.l1.size();
  return max_gap(w) * std::log(c1 * c2) + (w.l1[n - 1] - w.l2[n - 1]) * std::log(c2);
}

double log_v_lgg(const WalkPair& w, double u, double v) {
  check_walks(w);
  const std::size_t n = w.l1.size();
  double lv = -v * (w.l1[n - 1] - w.l2[n - 1]);
  if (u + v != 0.0) lv -= (u + v) * log_gap_sum(w, 0.0);
  return lv;
}

WeightedEcdf IsSample::l1_marginal(int j) const {
  if (samples.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  std::vector<double> vals, lw;
  vals.reserve(samples.size());
  lw.reserve(samples.size());
  for (const auto& s : samples) {
    vals.push_back(s.walks.l1.at(static_cast<std::size_t>(j - 1)));
    lw.push_back(s.log_weight);
  }
  return WeightedEcdf::from_log_weights(vals, lw);
}

std::vector<double> IsSample::log_weights() const {
  std::vector<double> lw;
  lw.reserve(samples.size());
  for (const auto& s : samples) lw.push_back(s.log_weight);
  return lw;
}

namespace {

WeightedSample draw_one(const ModelParams& p, Proposal prop, RngStream& rng) {
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  const std::size_t n = static_cast<std::size_t>(p.n);
  WeightedSample s;
  s.walks.l1.resize(n);
  s.walks.l2.resize(n);
  double x = 0.0, y = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double b = p.bulk_at(static_cast<long>(j) + 1);
    switch (prop) {
      case Proposal::GeometricPlain:
        x += static_cast<double>(sample_geom(b, rng));
        y += static_cast<double>(sample_geom(b, rng));
        break;
      case Proposal::GeometricFan:
        x += static_cast<double>(sample_geom(b * c2, rng));
        y += static_cast<double>(sample_geom(b / c2, rng));
        break;
      case Proposal::GeometricShock:
        x += static_cast<double>(sample_geom(b * c2, rng));
        y += static_cast<double>(sample_geom(b * c1, rng));
        break;
      case Proposal::LogGammaFan:
        x += sample_log_inv_gamma(b + c2, rng);
        y += sample_log_inv_gamma(b - c2, rng);
        break;
      case Proposal::LogGammaShifted:
        x += sample_log_inv_gamma(b + c2, rng);
        y += sample_log_inv_gamma(b + c1, rng);
        break;
    }
    s.walks.l1[j] = x;
    s.walks.l2[j] = y;
  }
  switch (prop) {
    case Proposal::GeometricPlain: s.log_weight = log_v_lpp(s.walks, c1, c2); break;
    case Proposal::GeometricFan: s.log_weight = max_gap(s.walks) * std::log(c1 * c2); break;
    case Proposal::GeometricShock: s.log_weight = -(y - max_gap(s.walks)) * std::log(c1 * c2); break;
    case Proposal::LogGammaFan: s.log_weight = -(c1 + c2) * log_gap_sum(s.walks, 0.0); break;
    case Proposal::LogGammaShifted:
      s.log_weight = (c1 + c2 == 0.0) ? 0.0 : -(c1 + c2) * log_gap_sum(s.walks, y);
      break;
  }
  return s;
}

}  // namespace

IsSample sample_stationary_is(const ModelParams& p, std::size_t n, std::uint64_t seed, int threads, double min_ess) {
  if (n == 0) throw Error(ErrorKind::EmptySample, "sample size must be positive");
  IsSample out;
  out.proposal = choose_proposal(p);
  out.samples.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    out.samples[i] = draw_one(p, out.proposal, rng);
  });
  out.ess = ess_from_log_weights(out.log_weights());
  if (out.ess < min_ess)
    throw Error(ErrorKind::DegenerateWeights,
                "effective sample size " + std::to_string(out.ess) + " below floor " + std::to_string(min_ess));
  return out;
}

// ---------------------------------------------------------------------------

double lpp_l1_weight(const ModelParams& p, const std::vector<long>& x) {
  const int n = p.n;
  if (static_cast<int>(x.size()) != n) throw Error(ErrorKind::ParamDomain, "increment vector must have N entries");
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  double w = 1.0;
  long total = 0;
  for (int j = 0; j < n; ++j) {
    if (x[static_cast<std::size_t>(j)] < 0) return 0.0;
    const double b = p.bulk_at(j + 1);
    w *= (1.0 - b) * std::pow(b * c2, static_cast<double>(x[static_cast<std::size_t>(j)]));
    total += x[static_cast<std::size_t>(j)];
  }
  // Sum over L2.  state[k] is the mass at s = -k, where
  // s_j = max_{i<=j}(L2(i) - L1(i-1)) - L2(j) lies in [-L1(j-1), 0].
  std::vector<double> state(static_cast<std::size_t>(total) + 1, 0.0), next(state.size());
  const double b1 = p.bulk_at(1);
  state[0] = (1.0 - b1) / (1.0 - b1 * c1);
  long l1 = 0;
  for (int j = 1; j < n; ++j) {
    l1 += x[static_cast<std::size_t>(j - 1)];
    const double b = p.bulk_at(j + 1), q = b * c1;
    std::fill(next.begin(), next.end(), 0.0);
    double acc = 0.0;
    for (long k = 0; k <= l1; ++k) {
      acc = q * acc + state[static_cast<std::size_t>(k)];
      next[static_cast<std::size_t>(k)] = (1.0 - b) * acc;
    }
    // All y >= s + L1(j) land on the floor s = -L1(j).
    next[static_cast<std::size_t>(l1)] = (1.0 - b) * acc / (1.0 - q);
    state.swap(next);
  }
  const double lc = std::log(c1 * c2);
  double f = 0.0;
  for (std::size_t k = 0; k < state.size(); ++k)
    if (state[k] != 0.0) f += state[k] * std::exp(-static_cast<double>(k) * lc);
  return w * f;
}

namespace {

void enumerate_box(int n, long trunc, const std::function<void(const std::vector<long>&)>& visit) {
  std::vector<long> x(static_cast<std::size_t>(n), 0);
  while (true) {
    visit(x);
    int j = 0;
    while (j < n && x[static_cast<std::size_t>(j)] == trunc) x[static_cast<std::size_t>(j++)] = 0;
    if (j == n) return;
    ++x[static_cast<std::size_t>(j)];
  }
}

// Upper bound on the unnormalized mass with some increment above trunc.
double outside_mass_bound(const ModelParams& p, long trunc) {
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  const double boost = std::max(1.0, 1.0 / (c1 * c2));
  double k = 1.0;
  std::vector<double> r(static_cast<std::size_t>(p.n));
  for (int j = 1; j <= p.n; ++j) {
    const double b = p.bulk_at(j);
    k *= (1.0 - b) * (1.0 - b) / (1.0 - b * c1);
    r[static_cast<std::size_t>(j - 1)] = j < p.n ? b * c2 * boost : b * c2;
  }
  double all = 1.0;
  for (double rj : r) {
    if (!(rj < 1.0))
      throw Error(ErrorKind::TruncationTooSmall, "no geometric tail bound available for these parameters");
    all /= 1.0 - rj;
  }
  double sum = 0.0;
  for (double rj : r) sum += std::pow(rj, static_cast<double>(trunc + 1)) * all;
  return k * sum;
}

}  // namespace

ExactPmf exact_pmf_lpp_smallN(const ModelParams& p, long trunc, double tol) {
  if (p.model != Model::GeometricLPP) throw Error(ErrorKind::ParamDomain, "geometric model expected");
  if (p.n > 4) throw Error(ErrorKind::ParamDomain, "exact enumeration supports N <= 4");
  ExactPmf out;
  out.trunc = trunc;
  double z = 0.0;
  enumerate_box(p.n, trunc, [&](const std::vector<long>& x) {
    const double w = lpp_l1_weight(p, x);
    out.pmf.emplace(x, w);
    z += w;
  });
  for (auto& [k, v] : out.pmf) v /= z;
  out.tail_bound = outside_mass_bound(p, trunc) / z;
  if (out.tail_bound > tol)
    throw Error(ErrorKind::TruncationTooSmall,
                "tail bound " + std::to_string(out.tail_bound) + " exceeds tolerance at truncation " + std::to_string(trunc));
  return out;
}

ExactPmf exact_pmf_lpp_auto(const ModelParams& p, double tol) {
  for (long m = 8;; m *= 2) {
    const double box = std::pow(static_cast<double>(m + 1), p.n);
    if (box > 5e6) throw Error(ErrorKind::TruncationTooSmall, "required truncation box is too large");
    double z = 0.0;
    enumerate_box(p.n, std::min<long>(m, 4), [&](const std::vector<long>& x) { z += lpp_l1_weight(p, x); });
    // cheap pre-check on a small box keeps the doubling loop from
    // enumerating boxes that cannot meet the tolerance
    if (outside_mass_bound(p, m) / z > tol) continue;
    return exact_pmf_lpp_smallN(p, m, tol);
  }
}

std::map<long, double> ExactPmf::marginal(int j) const {
  std::map<long, double> m;
  for (const auto& [x, w] : pmf) {
    long s = 0;
    for (int i = 0; i < j; ++i) s += x.at(static_cast<std::size_t>(i));
    m[s] += w;
  }
  return m;
}

double pdf_lgg_smallN(const ModelParams& p, const WalkPair& w) {
  if (p.model != Model::LogGamma) throw Error(ErrorKind::ParamDomain, "log-gamma model expected");
  check_walks(w);
  double lp = log_v_lgg(w, p.left_boundary, p.right_boundary);
  for (std::size_t j = 0; j < w.l1.size(); ++j) {
    const double alpha = p.bulk_at(static_cast<long>(j) + 1);
    lp += log_inv_gamma_logpdf(alpha, w.l1[j] - (j == 0 ? 0.0 : w.l1[j - 1]));
    lp += log_inv_gamma_logpdf(alpha, w.l2[j] - (j == 0 ? 0.0 : w.l2[j - 1]));
  }
  return lp;
}

ZeroMode sample_delta(const WalkPair& w, const ModelParams& p, RngStream& rng) {
  check_walks(w);
  const double c1 = p.left_boundary, c2 = p.right_boundary;
  if (p.model == Model::GeometricLPP) {
    if (!(c1 * c2 < 1.0)) throw Error(ErrorKind::ShockRegion, "zero mode has infinite mass when c1 c2 >= 1");
    return {max_gap(w) + static_cast<double>(sample_geom(c1 * c2, rng))};
  }
  if (!(c1 + c2 > 0.0)) throw Error(ErrorKind::ShockRegion, "zero mode has infinite mass when u + v <= 0");
  return {log_gap_sum(w, 0.0) - sample_log_gamma_variate(c1 + c2, rng)};
}

std::vector<double> evolve_l1(const std::vector<double>& l1, const ModelParams& p, int steps, RngStream& rng) {
  if (static_cast<int>(l1.size()) != p.n) throw Error(ErrorKind::ParamDomain, "walk must have N entries");
  if (p.model == Model::GeometricLPP) {
    std::vector<long> g(l1.size());
    for (std::size_t j = 0; j < l1.size(); ++j) g[j] = std::lround(l1[j]);
    for (int k = 0; k < steps; ++k) lpp_horizontal_step(g, p, k, rng);
    return {g.begin(), g.end()};
  }
  std::vector<double> h = l1;
  for (int k = 0; k < steps; ++k) lg_horizontal_step(h, p, k, rng);
  return h;
}

// ---------------------------------------------------------------------------

double StationarityReport::min_p() const {
  double m = 1.0;
  for (const auto& k : coords) m = std::min(m, k.p_value);
  return m;
}

StationarityReport stationarity_test(const ModelParams& p, std::size_t n, std::uint64_t seed, int threads,
                                     int resamples, double min_ess) {
  ModelParams shifted = p;
  std::rotate(shifted.bulk.begin(), shifted.bulk.begin() + 1, shifted.bulk.end());
  const IsSample ref = sample_stationary_is(shifted, n, derive_seed(seed, 1), threads, min_ess);
  IsSample ev = sample_stationary_is(p, n, derive_seed(seed, 2), threads, min_ess);
  const std::uint64_t move_seed = derive_seed(seed, 3);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream rng(move_seed, i);
    auto& w = ev.samples[i].walks;
    w.l1 = evolve_l1(w.l1, p, 1, rng);
  });
  StationarityReport r;
  r.proposal = ref.proposal;
  r.ess_reference = ref.ess;
  r.ess_evolved = ev.ess;
  for (int j = 1; j <= p.n; ++j)
    r.coords.push_back(ks_two_sample(ref.l1_marginal(j), ev.l1_marginal(j), derive_seed(seed, 100 + j), resamples));
  return r;
}

double ErgodicityReport::max_ks() const { return ks.empty() ? 0.0 : *std::max_element(ks.begin(), ks.end()); }

ErgodicityReport ergodicity_test(const ModelParams& p, int k_steps, std::size_t n, std::uint64_t seed, int threads,
                                 double spacing) {
  const std::size_t N = static_cast<std::size_t>(p.n);
  std::vector<double> low(N, 0.0), high(N);
  for (std::size_t j = 0; j < N; ++j) high[j] = spacing * static_cast<double>(j + 1);
  std::vector<double> a(n * N), b(n * N);
  const std::uint64_t sa = derive_seed(seed, 1), sb = derive_seed(seed, 2);
  parallel_for(n, threads, [&](std::size_t i) {
    RngStream ra(sa, i), rb(sb, i);
    const auto x = evolve_l1(low, p, k_steps, ra);
    const auto y = evolve_l1(high, p, k_steps, rb);
    for (std::size_t j = 0; j < N; ++j) {
      a[i * N + j] = x[j] - (j ? x[j - 1] : 0.0);
      b[i * N + j] = y[j] - (j ? y[j - 1] : 0.0);
    }
  });
  ErgodicityReport r;
  std::vector<double> u(n), v(n);
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      u[i] = a[i * N + j];
      v[i] = b[i * N + j];
    }
    r.ks.push_back(ks_statistic(WeightedEcdf::unweighted(u), WeightedEcdf::unweighted(v)));
  }
  return r;
}

}  // namespace strip
