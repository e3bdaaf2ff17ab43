#pragma once

#include <vector>

#include "strip/params.hpp"
#include "strip/path.hpp"
#include "strip/rng.hpp"

namespace strip {

// Last-passage values G(p_j), j = 0..N, along a down-right path.
struct LppState {
  DownRightPath path;
  std::vector<long> values;
};

// Applies one local move; the new value is omega + max(west, south) in the
// bulk, omega + south on the left boundary and omega + west on the right
// boundary, with omega geometric of parameter (product of edge labels) or
// (label * c1) / (label * c2).
LppState lpp_local_update(const LppState& state, const LocalMove& move, const ModelParams& params, RngStream& rng);

// One tau_1 step: the path is translated by (1,1) through tau1_moves().
LppState lpp_tau1_step(const LppState& state, const ModelParams& params, RngStream& rng);

// Increment chain on the horizontal path.  init holds G_0(j) - G_0(0) for
// j = 1..N; the result holds the centered values after each of k_steps
// tau_1 steps.  Labels shift cyclically between steps.
std::vector<std::vector<long>> run_increment_chain(const std::vector<long>& init, const ModelParams& params,
                                                   int k_steps, RngStream& rng);

// Single horizontal-path tau_1 step on centered values, with the path
// shifted by `offset` (labels bulk_at(offset + j)).  Draws in the same order
// as lpp_tau1_step.
void lpp_horizontal_step(std::vector<long>& increments, const ModelParams& params, long offset, RngStream& rng);

}  // namespace strip
