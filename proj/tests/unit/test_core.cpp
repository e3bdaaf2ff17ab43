#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <functional>
#include <set>

#include "doctest.h"
#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/params.hpp"
#include "strip/path.hpp"
#include "strip/rng.hpp"

using namespace strip;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Config;
}

// Plain trapezoid rule on a wide window; used as a quadrature oracle that
// shares nothing with the library's double-exponential rules.
double trapezoid(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) s += f(lo + i * h);
  return s * h;
}

}  // namespace

TEST_CASE("validate_params examples") {
  auto g = validate_params(ModelParams::geometric(2, 0.4, 1.5, 1.5));
  CHECK_FALSE(g.fan_region);

  ModelParams bad = ModelParams::geometric(2, 0.8, 0.5, 0.5);
  bad.bulk = {0.8, 1.3};
  CHECK(kind_of([&] { validate_params(bad); }) == ErrorKind::ParamDomain);

  ModelParams ok = ModelParams::geometric(2, 0.8, 0.5, 0.5);
  ok.bulk = {0.8, 0.9};
  CHECK(validate_params(ok).fan_region);

  auto l = validate_params(ModelParams::log_gamma(2, 1.0, -0.5, 2.0));
  CHECK(l.fan_region);
  CHECK(kind_of([] { validate_params(ModelParams::log_gamma(2, 1.0, -1.5, 2.0)); }) == ErrorKind::ParamDomain);
  CHECK(kind_of([] { validate_params(ModelParams::geometric(2, 0.5, 2.5, 0.5)); }) == ErrorKind::ParamDomain);
}

TEST_CASE("geometric pmf and sampler") {
  CHECK(geom_pmf(0.5, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(geom_pmf(0.5, 3) == doctest::Approx(0.0625).epsilon(1e-15));

  // partial sums in exact arithmetic: 1 - a^{K+1}
  const mpq_class a(3, 7);
  mpq_class s = 0;
  for (long k = 0; k <= 25; ++k) s += geom_pmf_exact(a, k);
  mpq_class tail = 1;
  for (int k = 0; k < 26; ++k) tail *= a;
  CHECK(s == 1 - tail);

  RngStream rng(1, 0);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_geom(0.5, rng));
  CHECK(std::fabs(sum / n - 1.0) < 3.0 * std::sqrt(2.0) / std::sqrt(double(n)));
  CHECK(kind_of([&] { sample_geom(1.0, rng); }) == ErrorKind::ParamDomain);
}

TEST_CASE("log inverse gamma sampler") {
  RngStream rng(2, 0);
  const int n = 1000000;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::exp(-sample_log_inv_gamma(1.0, rng));
  CHECK(std::fabs(s / n - 1.0) < 3.0 / std::sqrt(double(n)));

  s = 0.0;
  for (int i = 0; i < n; ++i) s += sample_log_inv_gamma(2.0, rng);
  const double sd = std::sqrt(boost::math::trigamma(2.0));
  CHECK(std::fabs(s / n + boost::math::digamma(2.0)) < 3.0 * sd / std::sqrt(double(n)));

  for (double th : {0.5, 1.0, 3.0}) {
    const double z = trapezoid([&](double y) { return std::exp(log_gamma_weight(th, y)) / std::tgamma(th); }, -60.0,
                               120.0, 400000);
    CHECK(std::fabs(z - 1.0) < 1e-10);
  }
  CHECK(kind_of([&] { sample_log_inv_gamma(0.0, rng); }) == ErrorKind::ParamDomain);
}

TEST_CASE("log_gamma_weight values and bound") {
  CHECK(log_gamma_weight(1.0, 0.0) == -1.0);
  CHECK(log_gamma_weight(2.0, std::log(2.0)) == doctest::Approx(-2.0 * std::log(2.0) - 0.5).epsilon(1e-15));
  CHECK(std::isfinite(log_gamma_weight(1.0, -700.0)));
  for (double th : {0.3, 1.0, 5.0}) {
    const double c = std::max(1.0, std::exp(2.0 * th * std::log(2.0 * th) - 2.0 * th));
    for (double x = -50.0; x <= 50.0; x += 0.25)
      CHECK(log_gamma_weight(th, x) <= std::log(c) - th * std::fabs(x) + 1e-12);
  }
}

TEST_CASE("local moves on paths") {
  const std::vector<double> bulk{0.1, 0.2, 0.3};
  auto h = DownRightPath::horizontal(bulk);
  auto l = apply_local_move(h, {MoveKind::LeftBoundary, 0});
  CHECK(l.anchor() == LatticePoint{1, 1});
  CHECK(l.steps().front() == Step::Down);
  CHECK(l.vertex(1) == h.vertex(1));

  CHECK_THROWS_AS(apply_local_move(h, {MoveKind::Bulk, 1}), Error);

  // full sequence of moves gives the translate with shifted labels
  DownRightPath p = h;
  for (const auto& mv : tau1_moves(h)) {
    auto before = p.vertices();
    p = apply_local_move(p, mv);
    auto after = p.vertices();
    int changed = 0;
    for (std::size_t j = 0; j < before.size(); ++j) changed += !(before[j] == after[j]);
    CHECK(changed == 1);
  }
  CHECK(p.anchor() == LatticePoint{1, 1});
  CHECK(p.is_horizontal());
  CHECK(p.labels() == std::vector<double>{0.2, 0.3, 0.1});
}

TEST_CASE("labels shift on translation for random paths") {
  const std::vector<double> bulk{0.11, 0.22, 0.33, 0.44};
  RngStream rng(3, 0);
  for (int t = 0; t < 50; ++t) {
    // random down-right path with the first step forced to keep m >= 0
    std::vector<Step> steps;
    long m = 10;
    for (int j = 0; j < 4; ++j) {
      const bool down = rng.uniform() < 0.5;
      steps.push_back(down ? Step::Down : Step::Right);
      m -= down;
    }
    DownRightPath p({10, 10}, steps, bulk);
    DownRightPath q = p;
    for (const auto& mv : tau1_moves(p)) q = apply_local_move(q, mv);
    CHECK(q.anchor() == LatticePoint{11, 11});
    CHECK(q.steps() == p.steps());
    CHECK(q == p.translated(1, bulk));
  }
}

TEST_CASE("rng streams") {
  RngStream a(9, 4), b(9, 4), c(9, 5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    seen.insert(x);
    seen.insert(c());
  }
  CHECK(seen.size() == 200);
}
