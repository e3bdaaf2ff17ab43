#pragma once

#include <functional>

namespace strip {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

// Double-exponential (sinh-sinh) quadrature over the real line in the
// variable t = (x - center) / scale.  Throws Error(QuadratureFailure) when
// the estimated relative error exceeds tol.
QuadResult integrate_line(const std::function<double(double)>& f, double center, double scale, double tol);

// Nested versions; the inner integrals use a tighter tolerance.
QuadResult integrate_plane(const std::function<double(double, double)>& f, double cx, double cy, double tol);
QuadResult integrate_space(const std::function<double(double, double, double)>& f, double cx, double cy, double cz,
                           double tol);

}  // namespace strip
