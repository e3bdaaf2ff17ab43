#pragma once

#include <string>
#include <vector>

namespace strip {

enum class Model { GeometricLPP, LogGamma };

std::string to_string(Model m);
Model model_from_string(const std::string& s);

// Bulk parameters a_i (geometric) or alpha_i (log-gamma), and boundary
// parameters c1, c2 (geometric) or u, v (log-gamma).
struct ModelParams {
  Model model = Model::GeometricLPP;
  int n = 1;
  std::vector<double> bulk;
  double left_boundary = 0.0;
  double right_boundary = 0.0;
  bool fan_region = false;

  static ModelParams geometric(int n, double a, double c1, double c2);
  static ModelParams log_gamma(int n, double alpha, double u, double v);

  // Bulk parameter with cyclic indexing, a_{j+kN} = a_j, for 1-based j.
  double bulk_at(long j) const;
};

// Checks the strict inequalities of the model and sets fan_region.
// Throws Error(ParamDomain) naming the first violated inequality.
ModelParams validate_params(ModelParams raw);

}  // namespace strip
