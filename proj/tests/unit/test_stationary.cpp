#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "doctest.h"
#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/gibbs.hpp"
#include "strip/stationary.hpp"

using namespace strip;

TEST_CASE("log V, geometric") {
  CHECK(log_v_lpp({{2}, {1}}, 1.0, 1.0) == 0.0);
  RngStream rng(20, 0);
  for (int i = 0; i < 100; ++i) {
    const double x = static_cast<double>(sample_geom(0.5, rng)), y = static_cast<double>(sample_geom(0.5, rng));
    const double c1 = 0.2 + rng.uniform(), c2 = 0.2 + rng.uniform();
    CHECK(log_v_lpp({{x}, {y}}, c1, c2) == doctest::Approx(x * std::log(c2) + y * std::log(c1)).epsilon(1e-13));
  }
  CHECK(std::exp(log_v_lpp({{0, 0}, {3, 3}}, 2.0, 0.25)) == doctest::Approx(8.0).epsilon(1e-13));
}

TEST_CASE("log V, log-gamma") {
  CHECK(log_v_lgg({{0.3, -1.0}, {2.0, 0.5}}, 0.0, 0.0) == 0.0);
  CHECK(log_v_lgg({{0.7}, {-0.4}}, 0.3, 0.9) == doctest::Approx(-1.2 * -0.4 - 0.9 * (0.7 + 0.4)).epsilon(1e-13));
  RngStream rng(21, 0);
  for (int i = 0; i < 100; ++i) {
    WalkPair w{{}, {}};
    double a = 0, b = 0;
    for (int j = 0; j < 4; ++j) {
      a += rng.normal();
      b += rng.normal();
      w.l1.push_back(a);
      w.l2.push_back(b);
    }
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += std::exp(w.l2[j] - (j ? w.l1[j - 1] : 0.0));
    const double direct = -(0.5 + 0.2) * std::log(s) - 0.2 * (w.l1[3] - w.l2[3]);
    CHECK(log_v_lgg(w, 0.5, 0.2) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("IS sampler special cases") {
  auto lg = validate_params(ModelParams::log_gamma(3, 1.0, -0.4, 0.4));
  auto s = sample_stationary_is(lg, 2000, 1);
  CHECK(s.ess == doctest::Approx(2000.0).epsilon(1e-12));

  auto geo = validate_params(ModelParams::geometric(2, 0.4, 1.25, 0.8));
  auto g = sample_stationary_is(geo, 100000, 2);
  CHECK(g.ess == doctest::Approx(100000.0).epsilon(1e-12));
  std::vector<double> first;
  for (const auto& w : g.samples) first.push_back(w.walks.l1[0]);
  std::vector<double> counts(30, 0.0), probs(30);
  for (double x : first) counts[static_cast<std::size_t>(std::min(x, 29.0))] += 1.0;
  for (int k = 0; k < 29; ++k) probs[k] = geom_pmf(0.32, k);
  probs[29] = std::pow(0.32, 29);
  CHECK(chi_square_gof_pvalue(counts, probs) > 0.01);

  CHECK_THROWS_AS(sample_stationary_is(validate_params(ModelParams::geometric(4, 0.4, 1.5, 1.5)), 100, 3, 1, 1e9),
                  Error);
}

TEST_CASE("IS moments against exact enumeration") {
  auto p = validate_params(ModelParams::geometric(2, 0.4, 0.7, 0.9));
  auto ex = exact_pmf_lpp_auto(p, 1e-10);
  double mean = 0.0;
  for (const auto& [k, v] : ex.marginal(1)) mean += k * v;
  auto s = sample_stationary_is(p, 100000, 4);
  auto e = s.l1_marginal(1);
  const double se = std::sqrt(e.variance() / e.ess);
  CHECK(std::fabs(e.mean() - mean) < 3.0 * se);
  // the thread count does not change the sample
  auto t = sample_stationary_is(p, 1000, 4, 3);
  auto u = sample_stationary_is(p, 1000, 4, 1);
  CHECK(t.samples[999].walks.l1 == u.samples[999].walks.l1);
}

TEST_CASE("exact pmf small N") {
  auto p = validate_params(ModelParams::geometric(1, 0.5, 1.0, 1.0));
  auto e = exact_pmf_lpp_smallN(p, 60, 1e-9);
  CHECK(e.marginal(1).at(0) == doctest::Approx(0.5).epsilon(1e-12));
  for (double c1 : {0.3, 0.9, 1.6}) {
    auto q = validate_params(ModelParams::geometric(1, 0.5, c1, 0.8));
    auto f = exact_pmf_lpp_smallN(q, 80, 1e-9);
    for (long k = 0; k < 10; ++k) CHECK(f.marginal(1).at(k) == doctest::Approx(geom_pmf(0.4, k)).epsilon(1e-9));
  }
  double total = 0.0;
  for (const auto& [k, v] : e.pmf) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(exact_pmf_lpp_smallN(validate_params(ModelParams::geometric(2, 0.8, 0.9, 0.9)), 3, 1e-12), Error);
}

TEST_CASE("log-gamma density and N=1 normalization") {
  auto p = validate_params(ModelParams::log_gamma(1, 1.0, 0.5, 0.5));
  CHECK(std::isfinite(pdf_lgg_smallN(p, {{0.3}, {-0.2}})));
  auto z = partition_z_lg_n1(p, 1e-9);
  CHECK(std::fabs(z.value / (std::tgamma(1.0) * std::pow(std::tgamma(1.5), 2)) - 1.0) < 1e-8);
}

TEST_CASE("zero mode") {
  auto p = validate_params(ModelParams::geometric(2, 0.3, 0.5, 1.0));
  WalkPair w{{1, 1}, {4, 4}};  // max_j L2(j) - L1(j-1) = 4
  RngStream rng(22, 0);
  int at_min = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double d = sample_delta(w, p, rng).delta;
    CHECK(d >= 4.0);
    at_min += d == 4.0;
  }
  CHECK(std::fabs(double(at_min) / n - 0.5) < 3.0 * 0.5 / std::sqrt(double(n)));

  auto l = validate_params(ModelParams::log_gamma(1, 1.0, 0.5, 0.5));
  // S = e^{L2(1) - L1(0)} = 1
  int pos = 0;
  for (int i = 0; i < n; ++i) pos += sample_delta({{0.3}, {0.0}}, l, rng).delta > 0.0;
  const double q = 1.0 - std::exp(-1.0);
  CHECK(std::fabs(double(pos) / n - q) < 4.0 * std::sqrt(q * (1 - q) / n));

  CHECK_THROWS_AS(sample_delta({{0.3}, {0.0}}, validate_params(ModelParams::log_gamma(1, 1.0, -0.8, 0.3)), rng), Error);
}

TEST_CASE("evolve keeps geometric walks nonnegative") {
  auto p = validate_params(ModelParams::geometric(4, 0.4, 0.9, 0.9));
  RngStream rng(23, 0);
  auto l = evolve_l1({0, 0, 0, 0}, p, 30, rng);
  for (std::size_t j = 0; j < l.size(); ++j) CHECK(l[j] >= (j ? l[j - 1] : 0.0));
}
