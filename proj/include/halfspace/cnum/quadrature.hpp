#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "halfspace/cnum/expr.hpp"

namespace halfspace::cnum {

/// |f(t d)| <= coefficient * exp(-rate t^2) for t >= T along a ray from the
/// origin with unit direction d. Derived from f ~ e^{alpha z^2} by
/// rate = -Re(alpha d^2).
struct GaussianTail {
  double coefficient = 1.0;
  cplx alpha;
};

struct PathSpec {
  enum class Kind { Segment, Ray };

  Kind kind = Kind::Segment;
  cplx start;
  cplx end;             // Segment only
  double theta = 0.0;   // Ray only: direction e^{i theta}
  double length = 0.0;  // Ray only: truncation parameter T > 0
  std::optional<GaussianTail> tail;

  static PathSpec segment(cplx a, cplx b) { return {Kind::Segment, a, b, 0.0, 0.0, std::nullopt}; }
  static PathSpec ray(cplx start, double theta, double length,
                      std::optional<GaussianTail> tail = std::nullopt) {
    return {Kind::Ray, start, {}, theta, length, tail};
  }

  cplx direction() const;
  /// End point actually integrated to (the truncation point for rays).
  cplx finite_end() const;
};

struct QuadratureOptions {
  double tol = 1e-12;
  int max_subdivisions = 4000;
};

struct QuadratureResult {
  cplx value;
  double error_bound = 0.0;  // quadrature estimate plus analytic tail bound
  double tail_bound = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of z -> f(z) dz along
/// `path`. Throws QuadratureError when the budget is spent before the
/// estimated error drops below tol.
QuadratureResult integrate(const std::function<cplx(cplx)>& f, const PathSpec& path,
                           const QuadratureOptions& options = {});

QuadratureResult integrate_holomorphic(const Expr& f, const PathSpec& path, double tol);

/// Sum of segment integrals along a polyline through `vertices`.
QuadratureResult integrate_polyline(const Expr& f, const std::vector<cplx>& vertices, double tol);

/// Real-interval version used by tests and profile checks.
double integrate_real(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12);

}  // namespace halfspace::cnum
