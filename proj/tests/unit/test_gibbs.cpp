#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "doctest.h"
#include "strip/distributions.hpp"
#include "strip/error.hpp"
#include "strip/gibbs.hpp"
#include "strip/quadrature.hpp"
#include "strip/stats.hpp"

using namespace strip;

namespace {

long size_diff(Signature2 big, Signature2 small) { return big.l1 + big.l2 - small.l1 - small.l2; }
bool below(Signature2 k, Signature2 l) { return l.l1 >= k.l1 && k.l1 >= l.l2 && l.l2 >= k.l2; }

// Cauchy sums by brute force, summing the unbounded coordinate over a window
// of width `span`.
mpq_class cauchy_lhs_brute(Signature2 l, Signature2 m, const mpq_class& a, const mpq_class& b, long span) {
  mpq_class s = 0;
  for (long k1 = std::max(l.l2, m.l2); k1 <= std::min(l.l1, m.l1); ++k1)
    for (long k2 = std::min(l.l2, m.l2) - span; k2 <= std::min(l.l2, m.l2); ++k2) {
      Signature2 k{k1, k2};
      if (below(k, l) && below(k, m)) s += qpow(a, size_diff(l, k)) * qpow(b, size_diff(m, k));
    }
  return s;
}

mpq_class cauchy_rhs_brute(Signature2 l, Signature2 m, const mpq_class& a, const mpq_class& b, long span) {
  mpq_class s = 0;
  for (long p1 = std::max(l.l1, m.l1); p1 <= std::max(l.l1, m.l1) + span; ++p1)
    for (long p2 = std::max(l.l2, m.l2); p2 <= std::min(l.l1, m.l1); ++p2) {
      Signature2 p{p1, p2};
      if (below(l, p) && below(m, p)) s += qpow(b, size_diff(p, l)) * qpow(a, size_diff(p, m));
    }
  return s;
}

mpq_class littlewood_lhs_brute(Signature2 k, const mpq_class& a, const mpq_class& c, long span) {
  mpq_class s = 0;
  for (long l1 = k.l2; l1 <= k.l1; ++l1)
    for (long l2 = k.l2 - span; l2 <= k.l2; ++l2) s += qpow(c, l1 - l2) * qpow(a, size_diff(k, {l1, l2}));
  return s;
}

mpq_class littlewood_rhs_brute(Signature2 k, const mpq_class& a, const mpq_class& c, long span) {
  mpq_class s = 0;
  for (long p1 = k.l1; p1 <= k.l1 + span; ++p1)
    for (long p2 = k.l2; p2 <= k.l1; ++p2) s += qpow(c, p1 - p2) * qpow(a, size_diff({p1, p2}, k));
  return s;
}

double abs_q(const mpq_class& x) { return std::fabs(x.get_d()); }

}  // namespace

TEST_CASE("two-layer weights") {
  const std::vector<double> bulk{0.3, 0.4, 0.5};
  auto g = TwoLayerGraph::from_path(DownRightPath::horizontal(bulk));
  TwoLayerConfig flat{{2, 2, 2, 2}, {2, 2, 2, 2}};
  CHECK(log_wt_two_layer(g, flat, 1.0, 1.0) == 0.0);

  RngStream rng(12, 0);
  for (int t = 0; t < 100; ++t) {
    TwoLayerConfig x{{0, 0, 0, 0}, {0, 0, 0, 0}};
    long top = 0, bot = -1 - static_cast<long>(rng.uniform() * 3);
    for (int j = 0; j < 4; ++j) {
      top += static_cast<long>(rng.uniform() * 3);
      bot += static_cast<long>(rng.uniform() * 3);
      x.top[j] = top;
      x.bottom[j] = std::min(bot, top);
    }
    TwoLayerConfig y = x;
    for (auto& v : y.top) v += 7;
    for (auto& v : y.bottom) v += 7;
    CHECK(log_wt_two_layer(g, x, 0.7, 0.6) == log_wt_two_layer(g, y, 0.7, 0.6));
    TwoLayerConfigLg xl{{}, {}};
    TwoLayerConfigLg yl{{}, {}};
    for (int j = 0; j < 4; ++j) {
      xl.top.push_back(x.top[j] + 0.3 * rng.uniform());
      xl.bottom.push_back(x.bottom[j] - 0.2 * rng.uniform());
      yl.top.push_back(xl.top.back() + 7.0);
      yl.bottom.push_back(xl.bottom.back() + 7.0);
    }
    CHECK(log_wt_two_layer_lg(g, xl, 0.4, 0.2) == doctest::Approx(log_wt_two_layer_lg(g, yl, 0.4, 0.2)).epsilon(1e-12));
  }
  TwoLayerConfig dec{{0, 3, 1, 4}, {0, 0, 0, 0}};
  CHECK(std::isinf(log_wt_two_layer(g, dec, 0.7, 0.6)));
}

TEST_CASE("skew Cauchy identity against brute force") {
  const mpq_class h(1, 2);
  auto r = check_cauchy_geometric({1, 0}, {0, 0}, h, h);
  CHECK(r.lhs == r.rhs);
  // truncated sums miss at most a geometric tail of ratio ab = 1/4
  CHECK(abs_q(r.lhs - cauchy_lhs_brute({1, 0}, {0, 0}, h, h, 60)) < 1e-30);
  CHECK(abs_q(r.rhs - cauchy_rhs_brute({1, 0}, {0, 0}, h, h, 60)) < 1e-30);

  const mpq_class a(99, 100), one(1);
  auto near = check_cauchy_geometric({4, -1}, {2, 1}, a, one);
  CHECK(near.lhs == near.rhs);

  // term bijection is weight preserving
  const Signature2 l{5, 1}, m{3, -2};
  const mpq_class x(2, 3), y(3, 5);
  for (long k1 = 1; k1 <= 3; ++k1)
    for (long k2 = -10; k2 <= -2; ++k2) {
      const Signature2 k{k1, k2};
      const Signature2 p = cauchy_bijection(k, l, m);
      CHECK(below(l, p));
      CHECK(below(m, p));
      CHECK(cauchy_lhs_term(k, l, m, x, y) == cauchy_rhs_term(p, l, m, x, y));
    }
}

TEST_CASE("skew Littlewood identity against brute force") {
  auto r = check_littlewood_geometric({0, 0}, mpq_class(1, 3), mpq_class(1));
  CHECK(r.lhs == r.rhs);
  CHECK(abs_q(r.lhs - littlewood_lhs_brute({0, 0}, mpq_class(1, 3), 1, 80)) < 1e-30);

  const mpq_class a(2, 5), c(2);
  auto s = check_littlewood_geometric({5, -2}, a, c);
  CHECK(s.lhs == s.rhs);
  CHECK(abs_q(s.lhs - littlewood_lhs_brute({5, -2}, a, c, 400)) < 1e-30 * abs_q(s.lhs) + 1e-30);
  CHECK(abs_q(s.rhs - littlewood_rhs_brute({5, -2}, a, c, 400)) / abs_q(s.rhs) < 1e-30);

  auto z = check_littlewood_geometric({3, 1}, mpq_class(1, 2), mpq_class(0));
  CHECK(z.lhs == z.rhs);

  for (long l1 = 1; l1 <= 5; ++l1)
    for (long l2 = -6; l2 <= 1; ++l2) {
      const Signature2 lam{l1, l2}, k{5, 1};
      if (!below(lam, k)) continue;
      const Signature2 p = littlewood_bijection(lam, k);
      CHECK(below(k, p));
      CHECK(littlewood_lhs_term(lam, k, a, c) == littlewood_rhs_term(p, k, a, c));
    }
}

TEST_CASE("log-gamma Cauchy and Littlewood") {
  auto r = check_cauchy_lg({0, 0}, {0, 0}, 1.0, 1.0, 1e-10);
  CHECK(r.rel_error < 1e-8);
  // oracle: plain trapezoid over a wide box
  double s = 0.0;
  const double h = 0.04;
  for (double k1 = -25.0; k1 <= 25.0; k1 += h)
    for (double k2 = -40.0; k2 <= 10.0; k2 += h)
      s += std::exp(cauchy_lg_log_integrand_kappa({k1, k2}, {0, 0}, {0, 0}, 1.0, 1.0));
  CHECK(std::fabs(s * h * h - r.lhs) / r.lhs < 1e-6);

  auto sw1 = check_cauchy_lg({0.4, -0.3}, {1.1, 0.2}, 1.3, 1.3, 1e-10);
  auto sw2 = check_cauchy_lg({1.1, 0.2}, {0.4, -0.3}, 1.3, 1.3, 1e-10);
  CHECK(sw1.lhs == doctest::Approx(sw2.lhs).epsilon(1e-9));

  auto q = check_littlewood_lg({0, 0}, 1.0, 1.0, 1e-10);
  CHECK(q.rel_error < 1e-8);
  auto q2 = check_littlewood_lg({2.5, 2.5}, 1.0, 1.0, 1e-10);
  CHECK(q2.lhs == doctest::Approx(q.lhs).epsilon(1e-9));

  RngStream rng(13, 0);
  for (int i = 0; i < 1000; ++i) {
    const RealSignature2 k{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    const RealSignature2 l{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    const RealSignature2 m{4 * rng.uniform() - 2, 4 * rng.uniform() - 2};
    CHECK(cauchy_lg_pointwise_residual(k, l, m, 0.7, 1.4) < 1e-12);
    CHECK(littlewood_lg_pointwise_residual(l, k, 0.3, 0.9) < 1e-12);
  }
}

TEST_CASE("geometric kernels") {
  const mpq_class a(1, 3), b(3, 5), c1(6, 5);
  const Signature2 l{4, 1}, m{6, -1};
  const long K = 30;
  mpq_class bulk = 0;
  for (long p1 = 6; p1 <= 6 + K; ++p1)
    for (long p2 = -10; p2 <= 10; ++p2) bulk += kernel_bulk_pmf_exact({p1, p2}, l, m, a, b);
  CHECK(bulk == 1 - qpow(a * b, K + 1));

  // pi1 - max(lambda1, mu1) is Geom(ab)
  for (long d = 0; d <= 8; ++d) {
    mpq_class marg = 0;
    for (long p2 = -10; p2 <= 10; ++p2) marg += kernel_bulk_pmf_exact({6 + d, p2}, l, m, a, b);
    CHECK(marg == geom_pmf_exact(a * b, d));
  }

  const Signature2 k{3, -2};
  mpq_class left = 0;
  for (long p1 = 3; p1 <= 3 + K; ++p1)
    for (long p2 = -10; p2 <= 10; ++p2) left += kernel_left_pmf_exact({p1, p2}, k, c1, a);
  CHECK(left == 1 - qpow(a * c1, K + 1));
  for (long d = 0; d <= 8; ++d) {
    mpq_class marg = 0;
    for (long p2 = -10; p2 <= 10; ++p2) marg += kernel_right_pmf_exact({3 + d, p2}, k, a, c1);
    CHECK(marg == geom_pmf_exact(a * c1, d));
  }

  // translation invariance
  CHECK(kernel_bulk_pmf({9, 2}, l, m, 0.4, 0.5) ==
        doctest::Approx(kernel_bulk_pmf({14, 7}, {9, 6}, {11, 4}, 0.4, 0.5)).epsilon(1e-14));
}

TEST_CASE("log-gamma kernels") {
  const RealSignature2 l{0.5, -0.4}, m{1.0, 0.2}, k{0.8, -1.0};
  auto integral = [](const std::function<double(double, double)>& lp, double cx, double cy) {
    return integrate_plane([&](double x, double y) { return std::exp(lp(x, y)); }, cx, cy, 1e-9).value;
  };
  CHECK(std::fabs(integral([&](double x, double y) { return kernel_bulk_logpdf_lg({x, y}, l, m, 1.0, 0.7); }, 2.0,
                           0.0) - 1.0) < 1e-6);
  CHECK(std::fabs(integral([&](double x, double y) { return kernel_left_logpdf_lg({x, y}, k, 0.4, 1.0); }, 1.5,
                           0.0) - 1.0) < 1e-6);
  CHECK(std::fabs(integral([&](double x, double y) { return kernel_right_logpdf_lg({x, y}, k, 1.0, -0.3); }, 1.5,
                           0.0) - 1.0) < 1e-6);

  // sampled left marginal: e^{pi1 - kappa1} ~ inverse gamma(alpha + u)
  RngStream f(14, 0), s(14, 1);
  std::vector<double> y;
  for (int i = 0; i < 20000; ++i) y.push_back(sample_kernel_left_lg(k, 0.4, 1.0, f, s).l1 - k.l1);
  auto r = ks_one_sample(WeightedEcdf::unweighted(y), [](double x) { return boost::math::gamma_q(1.4, std::exp(-x)); });
  CHECK(r.p_value > 0.01);
}

TEST_CASE("log-GIG law") {
  LogGigLaw law{0.7, std::log(2.0), std::log(0.5)};
  const double z = integrate_line([&](double t) { return std::exp(law.logpdf(t)); }, law.mode(), 1.0, 1e-12).value;
  CHECK(std::fabs(z - 1.0) < 1e-10);
  // mode solves p - A e^t + B e^{-t} = 0
  const double t = law.mode();
  CHECK(std::fabs(0.7 - 2.0 * std::exp(t) + 0.5 * std::exp(-t)) < 1e-12);
  RngStream rng(15, 0);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) mean += law.sample(rng);
  mean /= 20000;
  const double exact =
      integrate_line([&](double x) { return x * std::exp(law.logpdf(x)); }, law.mode(), 1.0, 1e-12).value;
  CHECK(std::fabs(mean - exact) < 0.03);
}

TEST_CASE("weight preservation") {
  const mpq_class a(1, 3), b(2, 5), c(3, 4);
  for (int i = 0; i < 10; ++i) {
    auto r = weight_preservation_geometric({MoveKind::Bulk, {3 + i % 3, 1}, {4, i % 2}, {5 + i % 2, 2}}, a, b, c);
    CHECK(r.lhs == r.rhs);
    r = weight_preservation_geometric({MoveKind::LeftBoundary, {3, 1}, {0, 0}, {3 + i % 3, 1 + i % 3}}, a, b, c);
    CHECK(r.lhs == r.rhs);
    r = weight_preservation_geometric({MoveKind::RightBoundary, {3, 1}, {0, 0}, {4, 1 + i % 3}}, a, b, c);
    CHECK(r.lhs == r.rhs);
  }
  CHECK(weight_preservation_lg({MoveKind::Bulk, {1.0, -0.5}, {0.7, -1.2}, {2.0, 0.3}}, 1.0, 1.5, 0.0, 1e-9) < 1e-6);
  CHECK(weight_preservation_lg({MoveKind::LeftBoundary, {1.0, -0.5}, {}, {2.0, 0.3}}, 1.0, 0.0, 0.5, 1e-9) < 1e-6);
  CHECK(weight_preservation_lg({MoveKind::RightBoundary, {1.0, -0.5}, {}, {2.0, 0.3}}, 1.0, 0.0, -0.4, 1e-9) < 1e-6);
}

TEST_CASE("partition functions") {
  auto p = validate_params(ModelParams::geometric(3, 0.3, 0.5, 0.6));
  auto h = partition_z_lpp(p, DownRightPath::horizontal(p.bulk), 60);
  CHECK(h.value <= partition_z_lpp_upper_bound(p));
  auto s = partition_z_lpp(p, DownRightPath({2, 2}, {Step::Down, Step::Right, Step::Down}, p.bulk), 60);
  CHECK(std::fabs(h.value - s.value) <= h.error_bound + s.error_bound + 1e-12 * h.value);
  CHECK(partition_z_lg_n1_closed_form(1.0, 0.5, 0.5) == doctest::Approx(std::pow(std::tgamma(1.5), 2)).epsilon(1e-14));
  CHECK(partition_z_lg_n1_closed_form(1.2, 0.3, 0.8) == doctest::Approx(partition_z_lg_n1_closed_form(1.2, 0.8, 0.3)).epsilon(1e-14));
  CHECK(zero_mode_identity_residual(0.7, 2.5) < 1e-8);
  CHECK_THROWS_AS(partition_z_lpp(validate_params(ModelParams::geometric(2, 0.3, 1.2, 1.1)),
                                  DownRightPath::horizontal({0.3, 0.3}), 20),
                  Error);
}
