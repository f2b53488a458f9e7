#pragma once

#include <complex>

namespace halfspace::cnum {

using cplx = std::complex<double>;

struct ErfResult {
  cplx value;
  /// False when the true value is outside the double range (the returned
  /// value is then saturated to +-DBL_MAX along the asymptotic phase) or the
  /// input was not finite.
  bool accurate = true;
};

/// Error function of a complex argument.
///
/// Three regimes, chosen on the first-quadrant image of z:
///   - Maclaurin series when |Re z| is small,
///   - the e^{-z^2}-weighted series when |Im z| is small and |z| moderate,
///   - the Laplace continued fraction for the Faddeeva function otherwise.
/// Odd and conjugation symmetry are imposed exactly. Relative error stays
/// below 1e-12 for |z| <= 8 away from the complex zeros of erf.
ErfResult erf_checked(cplx z);

/// erfi(z) = -i erf(iz).
ErfResult erfi_checked(cplx z);

inline cplx erf(cplx z) { return erf_checked(z).value; }
inline cplx erfi(cplx z) { return erfi_checked(z).value; }

}  // namespace halfspace::cnum
