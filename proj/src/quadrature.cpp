#include "strip/quadrature.hpp"

#include <boost/math/quadrature/sinh_sinh.hpp>
#include <cmath>
#include <sstream>

#include "strip/error.hpp"

namespace strip {

namespace {

QuadResult run(const std::function<double(double)>& f, double center, double scale, double tol, bool check) {
  boost::math::quadrature::sinh_sinh<double> integrator(12);
  double err = 0.0, l1 = 0.0;
  // Far out in the tails the integrand can evaluate to inf - inf; the
  // integrands used here all vanish there.
  auto g = [&](double t) {
    const double y = f(center + scale * t);
    return std::isfinite(y) ? y : 0.0;
  };
  const double v = scale * integrator.integrate(g, tol, &err, &l1);
  err *= scale;
  const double rel = std::fabs(v) > 0.0 ? err / std::fabs(v) : err;
  if (check && !(rel <= tol * 10.0)) {
    std::ostringstream os;
    os << "relative error estimate " << rel << " exceeds " << tol;
    throw Error(ErrorKind::QuadratureFailure, os.str());
  }
  return {v, err};
}

}  // namespace

QuadResult integrate_line(const std::function<double(double)>& f, double center, double scale, double tol) {
  return run(f, center, scale, tol, true);
}

QuadResult integrate_plane(const std::function<double(double, double)>& f, double cx, double cy, double tol) {
  auto outer = [&](double x) { return run([&](double y) { return f(x, y); }, cy, 1.0, tol * 1e-2, false).value; };
  return run(outer, cx, 1.0, tol, true);
}

QuadResult integrate_space(const std::function<double(double, double, double)>& f, double cx, double cy, double cz,
                           double tol) {
  auto outer = [&](double x) {
    auto mid = [&](double y) {
      return run([&](double z) { return f(x, y, z); }, cz, 1.0, tol * 1e-2, false).value;
    };
    return run(mid, cy, 1.0, tol * 1e-2, false).value;
  };
  return run(outer, cx, 1.0, tol, true);
}

}  // namespace strip
