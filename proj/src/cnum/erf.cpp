#include "halfspace/cnum/erf.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>

namespace halfspace::cnum {
namespace {

constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
// Region boundaries on the first-quadrant image (x, y) of z. Below kSeriesCut
// the respective series loses at most a factor e^{2*1.8^2} ~ 650 to
// cancellation.
constexpr double kSeriesCut = 1.8;
constexpr double kWeightedSeriesRadius = 6.0;
// Beyond this value of y^2 - x^2 the modulus of erf leaves the double range.
constexpr double kOverflowExponent = 700.0;

// exp(-z^2) with the real part formed as (x-y)(x+y) so the diagonal gives an
// exactly unimodular factor.
cplx exp_minus_square(double x, double y) {
  return std::exp(cplx(-(x - y) * (x + y), -2.0 * x * y));
}

cplx maclaurin(cplx z) {
  const cplx z2 = z * z;
  const double r2 = std::norm(z);
  cplx term = z;
  cplx sum = z;
  for (int n = 1; n < 20000; ++n) {
    term *= -z2 / static_cast<double>(n);
    const cplx d = term / static_cast<double>(2 * n + 1);
    sum += d;
    if (n > r2 && std::abs(d) <= 0.5e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * sum;
}

cplx weighted_series(double x, double y) {
  const cplx z(x, y);
  const cplx twice_z2 = 2.0 * z * z;
  const double r2 = x * x + y * y;
  cplx term = z;
  cplx sum = z;
  for (int n = 1; n < 20000; ++n) {
    term *= twice_z2 / static_cast<double>(2 * n + 1);
    sum += term;
    if (n > r2 && std::abs(term) <= 0.5e-17 * std::abs(sum)) break;
  }
  return kTwoOverSqrtPi * exp_minus_square(x, y) * sum;
}

// Faddeeva w(zeta) for Im zeta > 0 by the Laplace continued fraction,
// evaluated backwards with a doubling number of levels until two successive
// truncations agree.
cplx faddeeva_cf(cplx zeta, bool& converged) {
  auto eval = [&](int levels) {
    cplx r = zeta;
    for (int k = levels; k >= 1; --k) r = zeta - (0.5 * k) / r;
    return cplx(0.0, std::numbers::inv_sqrtpi) / r;
  };
  cplx prev = eval(16);
  for (int levels = 32; levels <= (1 << 17); levels *= 2) {
    const cplx cur = eval(levels);
    if (std::abs(cur - prev) <= 1e-16 * std::abs(cur)) {
      converged = true;
      return cur;
    }
    prev = cur;
  }
  converged = false;
  return prev;
}

// erf on the closed first quadrant.
ErfResult erf_first_quadrant(double x, double y) {
  if ((y - x) * (y + x) > kOverflowExponent) {
    // |erf z| ~ |e^{-z^2} / (sqrt(pi) z)|; keep the phase, saturate the modulus.
    const double phase = std::numbers::pi - 2.0 * x * y - std::atan2(y, x);
    return {std::polar(DBL_MAX, phase), false};
  }
  if (x < kSeriesCut) return {maclaurin(cplx(x, y)), true};
  if (y < kSeriesCut && std::hypot(x, y) < kWeightedSeriesRadius)
    return {weighted_series(x, y), true};

  bool converged = false;
  const cplx w = faddeeva_cf(cplx(-y, x), converged);
  const cplx erfc = exp_minus_square(x, y) * w;
  return {1.0 - erfc, converged};
}

}  // namespace

ErfResult erf_checked(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    return {cplx(std::nan(""), std::nan("")), false};

  const double x = z.real();
  const double y = z.imag();
  ErfResult r = erf_first_quadrant(std::abs(x), std::abs(y));
  // erf(-conj w) = -conj erf(w), erf(conj w) = conj erf(w).
  if (std::signbit(x)) r.value = -std::conj(r.value);
  if (std::signbit(y)) r.value = std::conj(r.value);
  return r;
}

ErfResult erfi_checked(cplx z) {
  const cplx i(0.0, 1.0);
  ErfResult r = erf_checked(i * z);
  r.value = -i * r.value;
  return r;
}

}  // namespace halfspace::cnum
