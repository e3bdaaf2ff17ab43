#include <cmath>

#include "doctest.h"
#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/gibbs.hpp"
#include "strip/mpa.hpp"
#include "strip/stationary.hpp"

using namespace strip;

TEST_CASE("matrix entries") {
  auto m0 = build_m(0, 0.5, 12, Step::Right);
  for (int n = 0; n < 12; ++n)
    for (int np = 0; np < 12; ++np) CHECK(m0(n, np) == (n >= np ? std::pow(0.5, n - np) : 0.0));
  for (long x : {1L, 3L}) {
    auto r = build_m(x, 0.4, 15, Step::Right), d = build_m(x, 0.4, 15, Step::Down);
    CHECK(d.block_diff(r.transpose(), 15) == 0.0);
  }
  CHECK(m_entry_exact(Step::Right, 2, mpq_class(1, 3), 3, 4) == qpow(mpq_class(1, 3), 3));
  CHECK(m_entry_exact(Step::Right, 2, mpq_class(1, 3), 3, 1) == 0);
}

TEST_CASE("quadratic algebra") {
  auto r = verify_quadratic_algebra(0.5, 0.5, 0.8, 0.8, 60, 5, 1e-10);
  CHECK(r.block == 30);
  CHECK(r.bulk < 1e-10);
  CHECK(r.left < 1e-10);
  CHECK(r.right < 1e-10);
  CHECK(r.max() < 1e-10);
  auto q = verify_quadratic_algebra(0.3, 0.6, 0.9, 0.7, 80, 4, 1e-10);
  CHECK(q.max() < 1e-10);
}

TEST_CASE("matrix product pmf") {
  auto p1 = validate_params(ModelParams::geometric(1, 0.5, 0.6, 0.9));
  auto m1 = mpa_pmf(DownRightPath::horizontal(p1.bulk), p1, 40, 200);
  const double norm = 1.0 - std::pow(0.45, 41);
  for (long k = 0; k < 10; ++k) CHECK(m1.pmf.at({k}) == doctest::Approx(geom_pmf(0.45, k) / norm).epsilon(1e-9));

  auto p = validate_params(ModelParams::geometric(3, 0.3, 0.9, 0.9));
  auto h = DownRightPath::horizontal(p.bulk);
  auto ex = exact_pmf_lpp_smallN(p, 12, 1.0);
  auto mp = mpa_pmf(h, p, 12, 200);
  double md = 0.0;
  for (const auto& [k, v] : ex.pmf) md = std::max(md, std::fabs(v - mp.pmf.at(k)));
  CHECK(md < 1e-8);

  ModelParams q = ModelParams::geometric(3, 0.3, 0.8, 0.7);
  q.bulk = {0.2, 0.3, 0.5};
  q = validate_params(q);
  auto path = DownRightPath({1, 1}, {Step::Down, Step::Right, Step::Right}, q.bulk);
  auto a = mpa_pmf(path, q, 8, 150);
  auto c = mpa_pmf(path.translated(3, q.bulk), q, 8, 150);
  double d3 = 0.0;
  for (const auto& [k, v] : a.pmf) d3 = std::max(d3, std::fabs(v - c.pmf.at(k)));
  CHECK(d3 < 1e-10);  // a full period of labels

  CHECK_THROWS_AS(mpa_pmf(h, validate_params(ModelParams::geometric(3, 0.3, 1.2, 0.9)), 6, 50), Error);
}

TEST_CASE("change of variables to matrix elements") {
  const std::vector<Step> steps{Step::Right, Step::Down, Step::Right};
  const std::vector<mpq_class> labels{mpq_class(1, 3), mpq_class(2, 5), mpq_class(1, 2)};
  const std::vector<double> dl{1.0 / 3, 0.4, 0.5};
  const mpq_class c1(3, 4), c2(2, 3);
  RngStream rng(30, 0);
  for (int t = 0; t < 50; ++t) {
    std::vector<long> top(4), bottom(4);
    for (int j = 0; j < 4; ++j) {
      top[j] = static_cast<long>(rng.uniform() * 6);
      bottom[j] = top[j] - static_cast<long>(rng.uniform() * 4);
    }
    const mpq_class w = mpa_config_weight_exact(steps, labels, c1, c2, top, bottom);
    const mpq_class direct = wt_two_layer_exact(steps, labels, c1, c2, {top, bottom}, true, true);
    CHECK(w == direct);
  }
}
