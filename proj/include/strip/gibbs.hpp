#pragma once

#include <gmpxx.h>

#include <vector>

#include "strip/params.hpp"
#include "strip/path.hpp"
#include "strip/rng.hpp"

namespace strip {

// Length-two signatures.  kappa "interlaces below" lambda (kappa <= lambda)
// when lambda1 >= kappa1 >= lambda2 >= kappa2.
struct Signature2 {
  long l1 = 0;
  long l2 = 0;
  bool operator==(const Signature2&) const = default;
};

struct RealSignature2 {
  double l1 = 0.0;
  double l2 = 0.0;
};

bool interlaces(Signature2 kappa, Signature2 lambda);

// ---------------------------------------------------------------------------
// Two-layer graph built from a down-right path.  top[j] = lambda_1^{(j)},
// bottom[j] = lambda_2^{(j)}.  Per step j with label b:
//   solid edge in each layer, weight b^{x-y} 1{x>=y} (geometric) or
//   e^{-b(x-y) - e^{-(x-y)}} (log-gamma), where (x,y) is
//   (value at j, value at j-1) for a Right step and the reverse for Down;
//   one dashed edge, weight 1{x>=y} or e^{-e^{-(x-y)}}, with
//   (x,y) = (top[j-1], bottom[j]) for Right and (top[j], bottom[j-1]) for Down.
// Arcs: c1^{top[0]-bottom[0]} and c2^{top[N]-bottom[N]} (resp. e^{-u(.)},
// e^{-v(.)}).

struct TwoLayerGraph {
  std::vector<Step> steps;
  std::vector<double> labels;
  bool left_arc = true;
  bool right_arc = true;

  static TwoLayerGraph from_path(const DownRightPath& path);
  int size() const { return static_cast<int>(steps.size()); }
};

template <class T>
struct TwoLayerValues {
  std::vector<T> top;
  std::vector<T> bottom;
};

using TwoLayerConfig = TwoLayerValues<long>;
using TwoLayerConfigLg = TwoLayerValues<double>;

// Geometric weights with boundary parameters (c1, c2); -inf when zero.
double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfig& x, double c1, double c2);
// Log-gamma weights with boundary parameters (u, v).
double log_wt_two_layer_lg(const TwoLayerGraph& g, const TwoLayerConfigLg& x, double u, double v);
double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfig& x, const ModelParams& p);
double log_wt_two_layer(const TwoLayerGraph& g, const TwoLayerConfigLg& x, const ModelParams& p);

// Exact rational geometric weight.
mpq_class wt_two_layer_exact(const std::vector<Step>& steps, const std::vector<mpq_class>& labels, const mpq_class& c1,
                             const mpq_class& c2, const TwoLayerConfig& x, bool left_arc, bool right_arc);

// ---------------------------------------------------------------------------
// Skew Cauchy and Littlewood identities, geometric, closed-form sums.

struct ExactPair {
  mpq_class lhs;
  mpq_class rhs;
};

// sum_{kappa <= lambda, mu} a^{|lambda-kappa|} b^{|mu-kappa|}
//   = sum_{pi >= lambda, mu} b^{|pi-lambda|} a^{|pi-mu|}
ExactPair check_cauchy_geometric(Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b);
// sum_{lambda <= kappa} c^{lambda1-lambda2} a^{|kappa-lambda|}
//   = sum_{pi >= kappa} c^{pi1-pi2} a^{|pi-kappa|}
ExactPair check_littlewood_geometric(Signature2 kappa, const mpq_class& a, const mpq_class& c);

mpq_class cauchy_lhs_term(Signature2 kappa, Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b);
mpq_class cauchy_rhs_term(Signature2 pi, Signature2 lambda, Signature2 mu, const mpq_class& a, const mpq_class& b);
mpq_class littlewood_lhs_term(Signature2 lambda, Signature2 kappa, const mpq_class& a, const mpq_class& c);
mpq_class littlewood_rhs_term(Signature2 pi, Signature2 kappa, const mpq_class& a, const mpq_class& c);

// Term bijections: pi_j = -kappa_{j-1} + max(lambda_j, mu_j) + min(lambda_{j-1}, mu_{j-1})
// and pi_j = -lambda_{j-1} + kappa_j + kappa_{j-1}, indices mod 2.
Signature2 cauchy_bijection(Signature2 kappa, Signature2 lambda, Signature2 mu);
Signature2 littlewood_bijection(Signature2 lambda, Signature2 kappa);

// ---------------------------------------------------------------------------
// Log-gamma integral identities.

double cauchy_lg_log_integrand_kappa(RealSignature2 kappa, RealSignature2 lambda, RealSignature2 mu, double alpha,
                                     double beta);
double cauchy_lg_log_integrand_pi(RealSignature2 pi, RealSignature2 lambda, RealSignature2 mu, double alpha,
                                  double beta);
RealSignature2 cauchy_lg_substitution(RealSignature2 kappa, RealSignature2 lambda, RealSignature2 mu);

double littlewood_lg_log_integrand_lambda(RealSignature2 lambda, RealSignature2 kappa, double u, double alpha);
double littlewood_lg_log_integrand_pi(RealSignature2 pi, RealSignature2 kappa, double u, double alpha);
RealSignature2 littlewood_lg_substitution(RealSignature2 lambda, RealSignature2 kappa);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
};

// 2-D quadrature of both sides.
IdentityCheck check_cauchy_lg(RealSignature2 lambda, RealSignature2 mu, double alpha, double beta, double tol);
IdentityCheck check_littlewood_lg(RealSignature2 kappa, double u, double alpha, double tol);

// |integrand_lhs(x) / integrand_rhs(substitution(x)) - 1| at one point.
double cauchy_lg_pointwise_residual(RealSignature2 kappa, RealSignature2 lambda, RealSignature2 mu, double alpha,
                                    double beta);
double littlewood_lg_pointwise_residual(RealSignature2 lambda, RealSignature2 kappa, double u, double alpha);

// ---------------------------------------------------------------------------
// Push-block kernels, geometric.  The bulk kernel moves the vertex between
// neighbours lambda (across the edge labelled a) and mu (label b); the
// boundary kernels move the end vertex next to kappa.

mpq_class kernel_bulk_pmf_exact(Signature2 pi, Signature2 lambda, Signature2 mu, const mpq_class& a,
                                const mpq_class& b);
mpq_class kernel_left_pmf_exact(Signature2 pi, Signature2 kappa, const mpq_class& c1, const mpq_class& a);
mpq_class kernel_right_pmf_exact(Signature2 pi, Signature2 kappa, const mpq_class& a, const mpq_class& c2);
double kernel_bulk_pmf(Signature2 pi, Signature2 lambda, Signature2 mu, double a, double b);
double kernel_left_pmf(Signature2 pi, Signature2 kappa, double c1, double a);
double kernel_right_pmf(Signature2 pi, Signature2 kappa, double a, double c2);

// pi1 is drawn from `first` with exactly the draw used by the LPP update,
// pi2 from `second`.
Signature2 sample_kernel_bulk(Signature2 lambda, Signature2 mu, double a, double b, RngStream& first,
                              RngStream& second);
Signature2 sample_kernel_left(Signature2 kappa, double c1, double a, RngStream& first, RngStream& second);
Signature2 sample_kernel_right(Signature2 kappa, double a, double c2, RngStream& first, RngStream& second);

long sample_truncated_geometric(long lo, long hi, double r, RngStream& rng);

// ---------------------------------------------------------------------------
// Push-block kernels, log-gamma.

// Law of t with density proportional to exp(p t - A e^t - B e^{-t})
// (the logarithm of a generalized inverse Gaussian variate).
struct LogGigLaw {
  double p = 0.0;
  double log_a = 0.0;
  double log_b = 0.0;

  double log_unnormalized(double t) const;
  double log_normalizer() const;
  double logpdf(double t) const { return log_unnormalized(t) - log_normalizer(); }
  double mode() const;
  // Grid inverse-CDF sampler with 4096 nodes on a window around the mode.
  double sample(RngStream& rng) const;
};

double kernel_bulk_logpdf_lg(RealSignature2 pi, RealSignature2 lambda, RealSignature2 mu, double alpha, double beta);
double kernel_left_logpdf_lg(RealSignature2 pi, RealSignature2 kappa, double u, double alpha);
double kernel_right_logpdf_lg(RealSignature2 pi, RealSignature2 kappa, double alpha, double v);
RealSignature2 sample_kernel_bulk_lg(RealSignature2 lambda, RealSignature2 mu, double alpha, double beta,
                                     RngStream& first, RngStream& second);
RealSignature2 sample_kernel_left_lg(RealSignature2 kappa, double u, double alpha, RngStream& first,
                                     RngStream& second);
RealSignature2 sample_kernel_right_lg(RealSignature2 kappa, double alpha, double v, RngStream& first,
                                      RngStream& second);

// ---------------------------------------------------------------------------
// Weight preservation: U(pi) * sum_kappa wt_before(kappa) = wt_after(pi),
// with the kappa-sum taken by brute force over the local two-layer weights.

struct LocalInstance {
  MoveKind kind = MoveKind::Bulk;
  Signature2 left;   // bulk: lambda; boundary: kappa (the fixed neighbour)
  Signature2 right;  // bulk: mu; unused on the boundary
  Signature2 pi;
};

struct LocalInstanceLg {
  MoveKind kind = MoveKind::Bulk;
  RealSignature2 left;
  RealSignature2 right;
  RealSignature2 pi;
};

// Bulk: (a, b) are the labels of the steps next to lambda and mu.
// Boundary: a is the step label, boundary is c1 or c2.
ExactPair weight_preservation_geometric(const LocalInstance& inst, const mpq_class& a, const mpq_class& b,
                                        const mpq_class& boundary);
double weight_preservation_lg(const LocalInstanceLg& inst, double a, double b, double boundary, double tol);

// ---------------------------------------------------------------------------
// Two-layer dynamics: one tau_1 step through the push-block kernels.

struct TwoLayerState {
  DownRightPath path;
  TwoLayerConfig values;
};

struct TwoLayerStateLg {
  DownRightPath path;
  TwoLayerConfigLg values;
};

TwoLayerState two_layer_tau1_step(const TwoLayerState& s, const ModelParams& p, RngStream& first, RngStream& second);
TwoLayerStateLg two_layer_tau1_step(const TwoLayerStateLg& s, const ModelParams& p, RngStream& first,
                                    RngStream& second);

// ---------------------------------------------------------------------------
// Partition functions with lambda_1^{(0)} = 0 fixed.

struct PartitionResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// Transfer-matrix sum over the box [-radius, radius] for every free value;
// the error bound is the change against a box of 3/4 the radius.
PartitionResult partition_z_lpp(const ModelParams& p, const DownRightPath& path, int radius = 40);
double partition_z_lpp_upper_bound(const ModelParams& p);

// N = 1 log-gamma partition function by 3-D quadrature of the two-layer weight.
PartitionResult partition_z_lg_n1(const ModelParams& p, double tol = 1e-9);
double partition_z_lg_n1_closed_form(double alpha, double u, double v);

// Relative error of the quadrature check of
// int e^{-s t - e^{-t} S} dt = Gamma(s) S^{-s}.
double zero_mode_identity_residual(double s, double big_s, double tol = 1e-11);

}  // namespace strip
