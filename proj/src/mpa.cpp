#include "strip/mpa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "strip/distributions.hpp"
#include "strip/error.hpp"

namespace strip {

TruncatedOperator TruncatedOperator::zeros(int k) {
  TruncatedOperator m;
  m.k = k;
  m.entries.assign(static_cast<std::size_t>(k) * k, 0.0);
  return m;
}

TruncatedOperator TruncatedOperator::transpose() const {
  TruncatedOperator t = zeros(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) t(j, i) = (*this)(i, j);
  return t;
}

TruncatedOperator TruncatedOperator::operator*(const TruncatedOperator& o) const {
  TruncatedOperator r = zeros(k);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < k; ++l) {
      const double a = (*this)(i, l);
      if (a == 0.0) continue;
      for (int j = 0; j < k; ++j) r(i, j) += a * o(l, j);
    }
  return r;
}

TruncatedOperator TruncatedOperator::operator+(const TruncatedOperator& o) const {
  TruncatedOperator r = *this;
  r.label = MatrixKind::Dense;
  for (std::size_t i = 0; i < r.entries.size(); ++i) r.entries[i] += o.entries[i];
  return r;
}

TruncatedOperator TruncatedOperator::scaled(double s) const {
  TruncatedOperator r = *this;
  r.label = MatrixKind::Dense;
  for (double& e : r.entries) e *= s;
  return r;
}

double TruncatedOperator::block_diff(const TruncatedOperator& o, int block) const {
  double d = 0.0;
  for (int i = 0; i < block; ++i)
    for (int j = 0; j < block; ++j) d = std::max(d, std::fabs((*this)(i, j) - o(i, j)));
  return d;
}

double m_entry(Step dir, long x, double a, long n, long np) {
  if (dir == Step::Down) std::swap(n, np);
  if (x < 0 || n < 0 || np < x || x + n - np < 0) return 0.0;
  return std::pow(a, static_cast<double>(2 * x + n - np));
}

mpq_class m_entry_exact(Step dir, long x, const mpq_class& a, long n, long np) {
  if (dir == Step::Down) std::swap(n, np);
  if (x < 0 || n < 0 || np < x || x + n - np < 0) return 0;
  return qpow(a, 2 * x + n - np);
}

TruncatedOperator build_m(long x, double a, int k, Step dir) {
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::ParamDomain, "matrix parameter must lie in (0,1)");
  if (k < 1 || x < 0) throw Error(ErrorKind::ParamDomain, "need K >= 1 and x >= 0");
  TruncatedOperator m = TruncatedOperator::zeros(k);
  m.label = dir == Step::Right ? MatrixKind::Right : MatrixKind::Down;
  for (int n = 0; n < k; ++n)
    for (int np = 0; np < k; ++np) m(n, np) = m_entry(dir, x, a, n, np);
  return m;
}

TruncatedOperator build_shift_s(int k) {
  TruncatedOperator m = TruncatedOperator::zeros(k);
  m.label = MatrixKind::ShiftS;
  for (int n = 1; n < k; ++n) m(n, n - 1) = 1.0;
  return m;
}

TruncatedOperator build_shift_t(int k) {
  TruncatedOperator m = TruncatedOperator::zeros(k);
  m.label = MatrixKind::ShiftT;
  for (int n = 0; n + 1 < k; ++n) m(n, n + 1) = 1.0;
  return m;
}

BoundaryVector boundary_vector(double c, int k) {
  BoundaryVector v(static_cast<std::size_t>(k));
  for (int n = 0; n < k; ++n) v[static_cast<std::size_t>(n)] = std::pow(c, n);
  return v;
}

double AlgebraReport::max() const {
  return std::max({bulk, left, right, cauchy_matrix, littlewood_left, littlewood_right, eigen_w, eigen_v,
                   shift_identity, toeplitz});
}

namespace {

BoundaryVector row_times(const BoundaryVector& w, const TruncatedOperator& m) {
  BoundaryVector r(w.size(), 0.0);
  for (int n = 0; n < m.k; ++n) {
    if (w[static_cast<std::size_t>(n)] == 0.0) continue;
    for (int np = 0; np < m.k; ++np) r[static_cast<std::size_t>(np)] += w[static_cast<std::size_t>(n)] * m(n, np);
  }
  return r;
}

BoundaryVector times_col(const TruncatedOperator& m, const BoundaryVector& v) {
  BoundaryVector r(v.size(), 0.0);
  for (int n = 0; n < m.k; ++n)
    for (int np = 0; np < m.k; ++np) r[static_cast<std::size_t>(n)] += m(n, np) * v[static_cast<std::size_t>(np)];
  return r;
}

double vec_diff(const BoundaryVector& a, const BoundaryVector& b, int block) {
  double d = 0.0;
  for (int i = 0; i < block; ++i) d = std::max(d, std::fabs(a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]));
  return d;
}

TruncatedOperator power(const TruncatedOperator& m, int e) {
  TruncatedOperator r = TruncatedOperator::zeros(m.k);
  for (int i = 0; i < m.k; ++i) r(i, i) = 1.0;
  for (int i = 0; i < e; ++i) r = r * m;
  return r;
}

}  // namespace

AlgebraReport verify_quadratic_algebra(double a, double b, double c1, double c2, int k, int x_max, double tol) {
  if (!(a * b < 1.0 && a * c1 < 1.0 && a * c2 < 1.0))
    throw Error(ErrorKind::ParamDomain, "need ab < 1, a c1 < 1 and a c2 < 1");
  const int block = k / 2;
  // Neglected intermediate indices n' >= K contribute at most
  // B (ab)^{K-B} / (1-ab) to the bulk and Cauchy relations and
  // B (a c)^K a^{-B} / (1-ac) to the boundary relations on the block.
  const double bk = static_cast<double>(block);
  const double tail = std::max({bk * std::pow(a * b, k - block) / (1.0 - a * b),
                                bk * std::pow(a * c1, k) * std::pow(a, -bk) / (1.0 - a * c1),
                                bk * std::pow(a * c2, k) * std::pow(a, -bk) / (1.0 - a * c2)});
  if (tail > tol) throw Error(ErrorKind::TruncationTooSmall, "truncation K too small for the requested block");

  AlgebraReport r;
  r.block = block;
  std::vector<TruncatedOperator> ra, da, rb, db;
  for (int x = 0; x < k; ++x) {
    ra.push_back(build_m(x, a, k, Step::Right));
    da.push_back(ra.back().transpose());
    rb.push_back(build_m(x, b, k, Step::Right));
    db.push_back(rb.back().transpose());
  }
  const BoundaryVector w = boundary_vector(c1, k), v = boundary_vector(c2, k);

  for (int x = 0; x <= x_max; ++x)
    for (int y = 0; y <= x_max; ++y) {
      const TruncatedOperator lhs = ra[static_cast<std::size_t>(x)] * db[static_cast<std::size_t>(y)];
      TruncatedOperator rhs = TruncatedOperator::zeros(k);
      for (int z = std::max(0, y - x); z < k && x - y + z < k; ++z)
        rhs = rhs + db[static_cast<std::size_t>(z)] * ra[static_cast<std::size_t>(x - y + z)];
      rhs = rhs.scaled(std::pow(a * b, std::min(x, y)) * (1.0 - a * b));
      r.bulk = std::max(r.bulk, lhs.block_diff(rhs, block));
    }

  BoundaryVector sum_w_right(static_cast<std::size_t>(k), 0.0), sum_w_down(static_cast<std::size_t>(k), 0.0);
  BoundaryVector sum_down_v(static_cast<std::size_t>(k), 0.0), sum_right_v(static_cast<std::size_t>(k), 0.0);
  for (int y = 0; y < k; ++y) {
    const auto wr = row_times(w, ra[static_cast<std::size_t>(y)]), wd = row_times(w, da[static_cast<std::size_t>(y)]);
    const auto dv = times_col(da[static_cast<std::size_t>(y)], v), rv = times_col(ra[static_cast<std::size_t>(y)], v);
    for (int i = 0; i < k; ++i) {
      sum_w_right[static_cast<std::size_t>(i)] += wr[static_cast<std::size_t>(i)];
      sum_w_down[static_cast<std::size_t>(i)] += wd[static_cast<std::size_t>(i)];
      sum_down_v[static_cast<std::size_t>(i)] += dv[static_cast<std::size_t>(i)];
      sum_right_v[static_cast<std::size_t>(i)] += rv[static_cast<std::size_t>(i)];
    }
  }
  for (int x = 0; x <= x_max; ++x) {
    const auto lhs = row_times(w, da[static_cast<std::size_t>(x)]);
    BoundaryVector rhs = sum_w_right;
    for (double& e : rhs) e *= std::pow(a * c1, x) * (1.0 - a * c1);
    r.left = std::max(r.left, vec_diff(lhs, rhs, block));
    const auto lhs2 = times_col(ra[static_cast<std::size_t>(x)], v);
    BoundaryVector rhs2 = sum_down_v;
    for (double& e : rhs2) e *= std::pow(a * c2, x) * (1.0 - a * c2);
    r.right = std::max(r.right, vec_diff(lhs2, rhs2, block));
  }
  r.littlewood_left = vec_diff(sum_w_right, sum_w_down, block);
  r.littlewood_right = vec_diff(sum_down_v, sum_right_v, block);

  for (int d = -x_max; d <= x_max; ++d) {
    TruncatedOperator lhs = TruncatedOperator::zeros(k), rhs = TruncatedOperator::zeros(k);
    for (int z = std::max(0, -d); z < k && z + d < k; ++z) {
      lhs = lhs + da[static_cast<std::size_t>(z)] * rb[static_cast<std::size_t>(z + d)];
      rhs = rhs + rb[static_cast<std::size_t>(z + d)] * da[static_cast<std::size_t>(z)];
    }
    r.cauchy_matrix = std::max(r.cauchy_matrix, lhs.block_diff(rhs, block));
  }

  const TruncatedOperator s = build_shift_s(k), t = build_shift_t(k);
  const auto ws = row_times(w, s), tv = times_col(t, v);
  for (int n = 0; n + 1 < k; ++n) {
    r.eigen_w = std::max(r.eigen_w, std::fabs(ws[static_cast<std::size_t>(n)] - c1 * w[static_cast<std::size_t>(n)]));
    r.eigen_v = std::max(r.eigen_v, std::fabs(tv[static_cast<std::size_t>(n)] - c2 * v[static_cast<std::size_t>(n)]));
  }

  TruncatedOperator geo = TruncatedOperator::zeros(k), sk = power(s, 0);
  for (int j = 0; j < k; ++j) {
    geo = geo + sk.scaled(std::pow(a, j));
    sk = sk * s;
  }
  for (int x = 0; x <= x_max; ++x) {
    const TruncatedOperator tx = power(t, x);
    for (int y = 0; y <= x_max; ++y) {
      const TruncatedOperator lhs = tx * power(s, y);
      const TruncatedOperator rhs = power(t, std::max(x - y, 0)) * power(s, std::max(y - x, 0));
      r.shift_identity = std::max(r.shift_identity, lhs.block_diff(rhs, block));
    }
    const TruncatedOperator fact = geo * tx.scaled(std::pow(a, x));
    r.toeplitz = std::max(r.toeplitz, fact.block_diff(ra[static_cast<std::size_t>(x)], std::min(block, k - x)));
  }
  return r;
}

double mpa_weight(const DownRightPath& path, const std::vector<long>& x, double c1, double c2, int k) {
  if (x.size() != static_cast<std::size_t>(path.size())) throw Error(ErrorKind::ParamDomain, "need one increment per path step");
  BoundaryVector cur = boundary_vector(c1, k), next(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b = path.labels()[i];
    std::fill(next.begin(), next.end(), 0.0);
    for (int n = 0; n < k; ++n) {
      const double cn = cur[static_cast<std::size_t>(n)];
      if (cn == 0.0) continue;
      for (int np = 0; np < k; ++np) {
        const double m = m_entry(path.steps()[i], x[i], b, n, np);
        if (m != 0.0) next[static_cast<std::size_t>(np)] += cn * m;
      }
    }
    cur.swap(next);
  }
  double total = 0.0;
  for (int n = 0; n < k; ++n) total += cur[static_cast<std::size_t>(n)] * std::pow(c2, n);
  return total;
}

namespace {

std::map<std::vector<long>, double> mpa_box(const DownRightPath& path, double c1, double c2, long trunc, int k) {
  const std::size_t n = path.size();
  // Cache the matrices for every (step, increment) pair.
  std::vector<std::vector<TruncatedOperator>> mats(n);
  for (std::size_t i = 0; i < n; ++i)
    for (long x = 0; x <= trunc; ++x) mats[i].push_back(build_m(x, path.labels()[i], k, path.steps()[i]));
  const BoundaryVector v = boundary_vector(c2, k);
  std::map<std::vector<long>, double> out;
  std::vector<long> x(n, 0);
  double z = 0.0;
  std::function<void(std::size_t, const BoundaryVector&)> rec = [&](std::size_t i, const BoundaryVector& row) {
    if (i == n) {
      double s = 0.0;
      for (int j = 0; j < k; ++j) s += row[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
      out.emplace(x, s);
      z += s;
      return;
    }
    for (long xi = 0; xi <= trunc; ++xi) {
      x[i] = xi;
      rec(i + 1, row_times(row, mats[i][static_cast<std::size_t>(xi)]));
    }
  };
  rec(0, boundary_vector(c1, k));
  for (auto& [key, val] : out) val /= z;
  return out;
}

}  // namespace

MpaPmf mpa_pmf(const DownRightPath& path, const ModelParams& p, long trunc, int k) {
  if (p.model != Model::GeometricLPP) throw Error(ErrorKind::ParamDomain, "geometric model expected");
  if (!(p.left_boundary * p.right_boundary < 1.0))
    throw Error(ErrorKind::ShockRegion, "matrix product weights are not summable when c1 c2 >= 1");
  MpaPmf out;
  out.pmf = mpa_box(path, p.left_boundary, p.right_boundary, trunc, k);
  const auto coarse = mpa_box(path, p.left_boundary, p.right_boundary, trunc, (3 * k) / 4);
  for (const auto& [key, val] : out.pmf)
    out.truncation_error = std::max(out.truncation_error, std::fabs(val - coarse.at(key)));
  return out;
}

mpq_class mpa_config_weight_exact(const std::vector<Step>& steps, const std::vector<mpq_class>& labels,
                                  const mpq_class& c1, const mpq_class& c2, const std::vector<long>& top,
                                  const std::vector<long>& bottom) {
  const std::size_t n = steps.size();
  if (labels.size() != n || top.size() != n + 1 || bottom.size() != n + 1)
    throw Error(ErrorKind::ParamDomain, "configuration does not match the path");
  std::vector<long> gap(n + 1);
  for (std::size_t i = 0; i <= n; ++i) gap[i] = top[i] - bottom[i];
  if (gap[0] < 0 || gap[n] < 0) return 0;
  mpq_class w = qpow(c1, gap[0]) * qpow(c2, gap[n]);
  for (std::size_t i = 1; i <= n; ++i) {
    const long dx = top[i] - top[i - 1];
    const long x = steps[i - 1] == Step::Right ? dx : -dx;
    if (x < 0) return 0;
    w *= m_entry_exact(steps[i - 1], x, labels[i - 1], gap[i - 1], gap[i]);
  }
  return w;
}

}  // namespace strip
