#include "strip/params.hpp"

#include <cmath>
#include <sstream>

#include "strip/error.hpp"

namespace strip {

std::string to_string(Model m) {
  return m == Model::GeometricLPP ? "geometric" : "log-gamma";
}

Model model_from_string(const std::string& s) {
  if (s == "geometric" || s == "GeometricLPP" || s == "lpp") return Model::GeometricLPP;
  if (s == "log-gamma" || s == "LogGamma" || s == "loggamma" || s == "lg") return Model::LogGamma;
  throw Error(ErrorKind::Config, "unknown model '" + s + "'");
}

ModelParams ModelParams::geometric(int n, double a, double c1, double c2) {
  ModelParams p;
  p.model = Model::GeometricLPP;
  p.n = n;
  p.bulk.assign(n > 0 ? n : 0, a);
  p.left_boundary = c1;
  p.right_boundary = c2;
  return p;
}

ModelParams ModelParams::log_gamma(int n, double alpha, double u, double v) {
  ModelParams p;
  p.model = Model::LogGamma;
  p.n = n;
  p.bulk.assign(n > 0 ? n : 0, alpha);
  p.left_boundary = u;
  p.right_boundary = v;
  return p;
}

double ModelParams::bulk_at(long j) const {
  long r = (j - 1) % n;
  if (r < 0) r += n;
  return bulk[static_cast<std::size_t>(r)];
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ParamDomain, msg); }

std::string idx(const char* name, std::size_t i) {
  std::ostringstream os;
  os << name << "_" << (i + 1);
  return os.str();
}

}  // namespace

ModelParams validate_params(ModelParams p) {
  if (p.n < 1) fail("strip width N must be positive");
  if (p.bulk.size() != static_cast<std::size_t>(p.n)) fail("bulk parameter vector must have N entries");
  for (double x : p.bulk)
    if (!std::isfinite(x)) fail("bulk parameters must be finite");
  if (!std::isfinite(p.left_boundary) || !std::isfinite(p.right_boundary))
    fail("boundary parameters must be finite");

  const double l = p.left_boundary, r = p.right_boundary;
  if (p.model == Model::GeometricLPP) {
    if (l <= 0.0) fail("c1 must be positive");
    if (r <= 0.0) fail("c2 must be positive");
    for (std::size_t i = 0; i < p.bulk.size(); ++i) {
      const double a = p.bulk[i];
      if (a <= 0.0) fail(idx("a", i) + " must be positive");
      for (std::size_t j = 0; j < p.bulk.size(); ++j)
        if (a * p.bulk[j] >= 1.0) fail(idx("a", i) + "*" + idx("a", j) + " must be < 1");
      if (a * l >= 1.0) fail(idx("a", i) + "*c1 must be < 1");
      if (a * r >= 1.0) fail(idx("a", i) + "*c2 must be < 1");
    }
    p.fan_region = l * r < 1.0;
  } else {
    for (std::size_t i = 0; i < p.bulk.size(); ++i) {
      const double a = p.bulk[i];
      for (std::size_t j = 0; j < p.bulk.size(); ++j)
        if (a + p.bulk[j] <= 0.0) fail(idx("alpha", i) + "+" + idx("alpha", j) + " must be > 0");
      if (a + l <= 0.0) fail(idx("alpha", i) + "+u must be > 0");
      if (a + r <= 0.0) fail(idx("alpha", i) + "+v must be > 0");
    }
    p.fan_region = l + r > 0.0;
  }
  return p;
}

}  // namespace strip
