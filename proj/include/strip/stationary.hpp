#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "strip/params.hpp"
#include "strip/rng.hpp"
#include "strip/stats.hpp"

namespace strip {

// Two walks L1, L2 of length N, stored as partial sums L(1..N); L(0) = 0 is
// implied.  Geometric walks hold integers in double storage.
struct WalkPair {
  std::vector<double> l1;
  std::vector<double> l2;
};

struct WeightedSample {
  WalkPair walks;
  double log_weight = 0.0;
};

enum class Proposal {
  GeometricPlain,  // Geom(a_j) for both walks, residual V
  GeometricFan,    // Geom(a_j c2), Geom(a_j / c2), residual (c1 c2)^max
  GeometricShock,  // Geom(a_j c2), Geom(a_j c1), residual (c1 c2)^{-(L2(N) - max)}
  LogGammaFan,     // logGamma^{-1}(alpha_j + v), (alpha_j - v), residual S^{-(u+v)}
  LogGammaShifted  // logGamma^{-1}(alpha_j + v), (alpha_j + u), residual S'^{-(u+v)}
};

std::string to_string(Proposal p);
Proposal choose_proposal(const ModelParams& p);

struct IsSample {
  std::vector<WeightedSample> samples;
  double ess = 0.0;
  Proposal proposal = Proposal::GeometricPlain;

  // Weighted law of L1(j), 1 <= j <= N.
  WeightedEcdf l1_marginal(int j) const;
  std::vector<double> log_weights() const;
};

double log_v_lpp(const WalkPair& w, double c1, double c2);
double log_v_lgg(const WalkPair& w, double u, double v);

// Self-normalized importance sampling of the reweighted walk measure.
// Sample i uses its own stream (seed, i), so the output does not depend on
// the thread count.  Throws DegenerateWeights if ESS < min_ess.
IsSample sample_stationary_is(const ModelParams& p, std::size_t n, std::uint64_t seed, int threads = 1,
                              double min_ess = 0.0);

// Exact law of L1 for the geometric model on the box of increments
// [0, trunc]^N, normalized on the box.  tail_bound bounds the mass outside
// the box relative to the mass inside.
struct ExactPmf {
  std::map<std::vector<long>, double> pmf;  // keyed by increments
  double tail_bound = 0.0;
  long trunc = 0;

  std::map<long, double> marginal(int j) const;  // law of L1(j)
};

// Unnormalized weight of the increments x of L1, with L2 summed exactly.
double lpp_l1_weight(const ModelParams& p, const std::vector<long>& x);

ExactPmf exact_pmf_lpp_smallN(const ModelParams& p, long trunc, double tol);
// Doubles the truncation from 8 until the tail bound is below tol.
ExactPmf exact_pmf_lpp_auto(const ModelParams& p, double tol);

// Unnormalized log density of (L1, L2) under the log-gamma measure,
// including the reference random-walk density.
double pdf_lgg_smallN(const ModelParams& p, const WalkPair& w);

struct ZeroMode {
  double delta = 0.0;
};

// Gap between the layers at the left edge, conditionally on the walks.
ZeroMode sample_delta(const WalkPair& w, const ModelParams& p, RngStream& rng);

// L1 after `steps` tau_1 steps of the strip dynamics started from L1.
std::vector<double> evolve_l1(const std::vector<double>& l1, const ModelParams& p, int steps, RngStream& rng);

// One-step stationarity check: sample A and sample B are independent IS
// samples, B is moved by one tau_1 step, and each L1(j) marginal of A is
// compared with that of B.  A uses the cyclically shifted bulk labels so
// that inhomogeneous models compare like with like.
struct StationarityReport {
  Proposal proposal = Proposal::GeometricPlain;
  double ess_reference = 0.0;
  double ess_evolved = 0.0;
  std::vector<KsResult> coords;  // j = 1..N
  double min_p() const;
};

StationarityReport stationarity_test(const ModelParams& p, std::size_t n, std::uint64_t seed, int threads = 1,
                                     int resamples = 1000, double min_ess = 1000.0);

// Two deterministic starts, L1 = 0 and L1(j) = spacing * j, run for k steps
// on n replicas; KS statistic between the terminal increment laws.
struct ErgodicityReport {
  std::vector<double> ks;  // per increment j = 1..N
  double max_ks() const;
};

ErgodicityReport ergodicity_test(const ModelParams& p, int k_steps, std::size_t n, std::uint64_t seed,
                                 int threads = 1, double spacing = 10.0);

}  // namespace strip
