#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "strip/params.hpp"
#include "strip/path.hpp"

namespace strip {

enum class MatrixKind { Right, Down, ShiftS, ShiftT, Dense };

// K x K truncation of an operator on l^2(Z>=0), row-major.
struct TruncatedOperator {
  int k = 0;
  MatrixKind label = MatrixKind::Dense;
  std::vector<double> entries;

  double operator()(int n, int np) const { return entries[static_cast<std::size_t>(n) * k + np]; }
  double& operator()(int n, int np) { return entries[static_cast<std::size_t>(n) * k + np]; }

  static TruncatedOperator zeros(int k);
  TruncatedOperator transpose() const;
  TruncatedOperator operator*(const TruncatedOperator& o) const;
  TruncatedOperator operator+(const TruncatedOperator& o) const;
  TruncatedOperator scaled(double s) const;
  // max |A - B| on the top-left block x block
  double block_diff(const TruncatedOperator& o, int block) const;
};

using BoundaryVector = std::vector<double>;

// Matrix elements of the right and down operators, x >= 0:
//   right(n, n') = a^{2x + n - n'} 1{n' >= x} 1{x + n - n' >= 0}
//   down = transpose of right.
double m_entry(Step dir, long x, double a, long n, long np);
mpq_class m_entry_exact(Step dir, long x, const mpq_class& a, long n, long np);

TruncatedOperator build_m(long x, double a, int k, Step dir);
TruncatedOperator build_shift_s(int k);  // S(n, n') = 1{n = n' + 1}
TruncatedOperator build_shift_t(int k);  // T(n, n') = 1{n' = n + 1}
BoundaryVector boundary_vector(double c, int k);  // c^n

struct AlgebraReport {
  double bulk = 0.0;          // M_x[a] M_y[b] commutation
  double left = 0.0;          // w^t M^down_x relation
  double right = 0.0;         // M^right_x v relation
  double cauchy_matrix = 0.0;
  double littlewood_left = 0.0;
  double littlewood_right = 0.0;
  double eigen_w = 0.0;       // w^t S = c1 w^t
  double eigen_v = 0.0;       // T v = c2 v
  double shift_identity = 0.0;  // T^x S^y = T^{(x-y)+} S^{(y-x)+}
  double toeplitz = 0.0;      // M^right_x = (sum a^k S^k) a^x T^x
  int block = 0;

  double max() const;
};

// Checks the quadratic algebra on the top-left (K/2) x (K/2) block for all
// x, y <= x_max.  Throws TruncationTooSmall if the neglected geometric tails
// exceed tol on that block.
AlgebraReport verify_quadratic_algebra(double a, double b, double c1, double c2, int k, int x_max, double tol);

// w^t (prod_i M^{dir_i}_{x_i}[b_i]) v along the path, truncated at K.
double mpa_weight(const DownRightPath& path, const std::vector<long>& x, double c1, double c2, int k);

struct MpaPmf {
  std::map<std::vector<long>, double> pmf;
  double truncation_error = 0.0;  // estimated change of the normalized pmf between K and 3K/4
};

// Normalized over the increment box [0, trunc]^N.  Requires c1 c2 < 1.
MpaPmf mpa_pmf(const DownRightPath& path, const ModelParams& p, long trunc, int k);

// Weight of a two-layer configuration written as a matrix product, in exact
// arithmetic; used to check the change of variables configuration by
// configuration.
mpq_class mpa_config_weight_exact(const std::vector<Step>& steps, const std::vector<mpq_class>& labels,
                                  const mpq_class& c1, const mpq_class& c2, const std::vector<long>& top,
                                  const std::vector<long>& bottom);

}  // namespace strip
