#include "strip/lpp_dynamics.hpp"

#include <algorithm>

#include "strip/distributions.hpp"
#include "strip/error.hpp"

namespace strip {

LppState lpp_local_update(const LppState& state, const LocalMove& move, const ModelParams& params, RngStream& rng) {
  const DownRightPath& path = state.path;
  if (!path.admissible(move)) throw Error(ErrorKind::InadmissibleMove, "lpp update at an inadmissible vertex");
  const auto& b = path.labels();
  const std::size_t j = static_cast<std::size_t>(move.index);
  LppState out{apply_local_move(path, move), state.values};
  switch (move.kind) {
    case MoveKind::LeftBoundary:
      out.values[0] = state.values[1] + sample_geom(b[0] * params.left_boundary, rng);
      break;
    case MoveKind::RightBoundary:
      out.values[j] = state.values[j - 1] + sample_geom(b[j - 1] * params.right_boundary, rng);
      break;
    case MoveKind::Bulk:
      out.values[j] = std::max(state.values[j - 1], state.values[j + 1]) + sample_geom(b[j - 1] * b[j], rng);
      break;
  }
  return out;
}

LppState lpp_tau1_step(const LppState& state, const ModelParams& params, RngStream& rng) {
  LppState cur = state;
  for (const LocalMove& mv : tau1_moves(state.path)) cur = lpp_local_update(cur, mv, params, rng);
  return cur;
}

void lpp_horizontal_step(std::vector<long>& inc, const ModelParams& params, long offset, RngStream& rng) {
  const int n = params.n;
  const double b1 = params.bulk_at(offset + 1);
  // Old values g_j = inc[j-1] (g_0 = 0); new values overwrite in place.
  long prev = inc[0] + sample_geom(b1 * params.left_boundary, rng);  // new g_0
  const long g0 = prev;
  for (int j = 1; j < n; ++j) {
    const long east = inc[static_cast<std::size_t>(j)];
    prev = std::max(prev, east) + sample_geom(b1 * params.bulk_at(offset + j + 1), rng);
    inc[static_cast<std::size_t>(j - 1)] = prev - g0;
  }
  prev += sample_geom(b1 * params.right_boundary, rng);
  inc[static_cast<std::size_t>(n - 1)] = prev - g0;
}

std::vector<std::vector<long>> run_increment_chain(const std::vector<long>& init, const ModelParams& params,
                                                   int k_steps, RngStream& rng) {
  if (static_cast<int>(init.size()) != params.n)
    throw Error(ErrorKind::ParamDomain, "initial increments must have N entries");
  std::vector<std::vector<long>> out;
  out.reserve(static_cast<std::size_t>(k_steps) + 1);
  out.push_back(init);
  std::vector<long> cur = init;
  for (int k = 0; k < k_steps; ++k) {
    lpp_horizontal_step(cur, params, k, rng);
    out.push_back(cur);
  }
  return out;
}

}  // namespace strip
