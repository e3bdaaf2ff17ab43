#pragma once

#include <vector>

#include "strip/params.hpp"
#include "strip/path.hpp"
#include "strip/rng.hpp"

namespace strip {

// Free energies h(p_j) = log z(p_j) along a down-right path.
struct LgState {
  DownRightPath path;
  std::vector<double> values;
};

// h_new = log(varpi) + logaddexp(h_west, h_south) in the bulk and
// h_new = log(varpi) + h_neighbour on the boundaries, with varpi inverse
// gamma of parameter (sum of edge labels) or (label + u) / (label + v).
LgState lg_local_update(const LgState& state, const LocalMove& move, const ModelParams& params, RngStream& rng);

LgState lg_tau1_step(const LgState& state, const ModelParams& params, RngStream& rng);

std::vector<std::vector<double>> run_increment_chain_lg(const std::vector<double>& init, const ModelParams& params,
                                                        int k_steps, RngStream& rng);

void lg_horizontal_step(std::vector<double>& increments, const ModelParams& params, long offset, RngStream& rng);

}  // namespace strip
