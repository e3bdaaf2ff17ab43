#include "strip/lg_dynamics.hpp"

#include "strip/distributions.hpp"
#include "strip/error.hpp"

namespace strip {

LgState lg_local_update(const LgState& state, const LocalMove& move, const ModelParams& params, RngStream& rng) {
  const DownRightPath& path = state.path;
  if (!path.admissible(move)) throw Error(ErrorKind::InadmissibleMove, "log-gamma update at an inadmissible vertex");
  const auto& b = path.labels();
  const std::size_t j = static_cast<std::size_t>(move.index);
  LgState out{apply_local_move(path, move), state.values};
  switch (move.kind) {
    case MoveKind::LeftBoundary:
      out.values[0] = state.values[1] + sample_log_inv_gamma(b[0] + params.left_boundary, rng);
      break;
    case MoveKind::RightBoundary:
      out.values[j] = state.values[j - 1] + sample_log_inv_gamma(b[j - 1] + params.right_boundary, rng);
      break;
    case MoveKind::Bulk:
      out.values[j] = logaddexp(state.values[j - 1], state.values[j + 1]) + sample_log_inv_gamma(b[j - 1] + b[j], rng);
      break;
  }
  return out;
}

LgState lg_tau1_step(const LgState& state, const ModelParams& params, RngStream& rng) {
  LgState cur = state;
  for (const LocalMove& mv : tau1_moves(state.path)) cur = lg_local_update(cur, mv, params, rng);
  return cur;
}

void lg_horizontal_step(std::vector<double>& inc, const ModelParams& params, long offset, RngStream& rng) {
  const int n = params.n;
  const double b1 = params.bulk_at(offset + 1);
  double prev = inc[0] + sample_log_inv_gamma(b1 + params.left_boundary, rng);
  const double h0 = prev;
  for (int j = 1; j < n; ++j) {
    const double east = inc[static_cast<std::size_t>(j)];
    prev = logaddexp(prev, east) + sample_log_inv_gamma(b1 + params.bulk_at(offset + j + 1), rng);
    inc[static_cast<std::size_t>(j - 1)] = prev - h0;
  }
  prev += sample_log_inv_gamma(b1 + params.right_boundary, rng);
  inc[static_cast<std::size_t>(n - 1)] = prev - h0;
}

std::vector<std::vector<double>> run_increment_chain_lg(const std::vector<double>& init, const ModelParams& params,
                                                        int k_steps, RngStream& rng) {
  if (static_cast<int>(init.size()) != params.n)
    throw Error(ErrorKind::ParamDomain, "initial increments must have N entries");
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(k_steps) + 1);
  out.push_back(init);
  std::vector<double> cur = init;
  for (int k = 0; k < k_steps; ++k) {
    lg_horizontal_step(cur, params, k, rng);
    out.push_back(cur);
  }
  return out;
}

}  // namespace strip
