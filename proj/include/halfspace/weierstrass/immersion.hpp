#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/cnum/expr.hpp"
#include "halfspace/surfgeo/surface.hpp"

namespace halfspace::weierstrass {

using cnum::cplx;
using cnum::Expr;
using surfgeo::Vec2;
using surfgeo::Vec3;

/// Weierstrass data (f, g): the immersion is
///   x(z) = Re int_base^z ( f(1-g^2)/2, i f(1+g^2)/2, f g ) dz.
struct WeierstrassData {
  Expr f;
  Expr g;
  cplx base = 0.0;

  /// phi = (f(1-g^2)/2, i f(1+g^2)/2, f g).
  std::array<Expr, 3> phi() const;
  /// Conformal factor |f|(1+|g|^2)/2.
  double lambda(cplx z) const;
};

/// f = (2/sqrt(pi)) e^{r1 z^2}, g = e^{-r2 z^2}, base 0.
WeierstrassData erf_example_data(double r1, double r2);

/// Parameters of the Enneper-type immersion (L - conj(H), h).
struct EnneperParams {
  double r1 = 0.0;
  double r2 = 0.0;
  double d = 0.0;

  /// r1 != r2, r1 r2 d != 0 and d / r2 > 0 (so the constant in h is real).
  void validate() const;
  /// 0 < r1 < 4 r2 < 3 r1 and d = r1 - r2 > 0. Irrationality of r1/r2 is
  /// not decidable in floating point and is not checked.
  bool admissible() const;
  /// (sqrt 5, 1, sqrt 5 - 1).
  static EnneperParams standard();
};

/// Geometry of a conformal immersion at one parameter point z = u + iv.
/// H is the trace of the shape operator with respect to `normal`.
struct SurfaceJet {
  Vec3 position = Vec3::Zero();
  Vec3 xu = Vec3::Zero();
  Vec3 xv = Vec3::Zero();
  double lambda = 0.0;
  Vec3 normal = Vec3::UnitZ();
  double K = 0.0;
  double H = 0.0;
  /// Minimality/conformality residual |sum phi_k^2| / 4; for the Enneper
  /// surface this equals |L'H' - (Phi'/2)^2|.
  double residual = 0.0;
};

/// x = x0 + Re Psi(z) with Psi' = phi holomorphic; minimal when sum phi^2 = 0.
/// Also usable as a ParametricSurface with (u, v) = (Re z, Im z).
class ConformalImmersion : public surfgeo::ParametricSurface {
 public:
  ConformalImmersion(std::string name, std::array<Expr, 3> phi, surfgeo::ParamDomain domain);

  /// Position at z.
  virtual Vec3 point(cplx z) const = 0;

  std::array<cplx, 3> phi(cplx z) const;
  std::array<cplx, 3> dphi(cplx z) const;
  double lambda(cplx z) const;
  double conformality_residual(cplx z) const;
  /// Residual reported in jets and tables; conformality_residual by default.
  virtual double residual(cplx z) const { return conformality_residual(z); }

  /// Jet with curvatures; throws DomainError where lambda = 0.
  SurfaceJet surface_jet(cplx z) const;

  surfgeo::Jet2 jet(const Vec2& uv) const override;
  surfgeo::ParamDomain domain() const override { return domain_; }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  std::array<Expr, 3> phi_;
  std::array<Expr, 3> dphi_;
  surfgeo::ParamDomain domain_;
};

/// Position by adaptive quadrature along the segment base -> z.
class WeierstrassSurface : public ConformalImmersion {
 public:
  WeierstrassSurface(WeierstrassData data, double tol = 1e-12,
                     surfgeo::ParamDomain domain = {-2.0, 2.0, -2.0, 2.0});
  Vec3 point(cplx z) const override;
  const WeierstrassData& data() const { return data_; }

 protected:
  WeierstrassData data_;
  double tol_;
};

/// The erf example with its closed-form position.
class ErfExampleSurface : public WeierstrassSurface {
 public:
  ErfExampleSurface(double r1, double r2, surfgeo::ParamDomain domain = {-2.0, 2.0, -2.0, 2.0});
  Vec3 point(cplx z) const override;
  double r1() const { return r1_; }
  double r2() const { return r2_; }

 private:
  double r1_;
  double r2_;
};

/// The Enneper-type surface (L - conj(H), h).
class EnneperSurface : public ConformalImmersion {
 public:
  explicit EnneperSurface(EnneperParams p, surfgeo::ParamDomain domain = {-2.0, 2.0, -2.0, 2.0});
  Vec3 point(cplx z) const override;
  /// |L'H' - (Phi'/2)^2| from the symbolic derivatives.
  double minimality_residual(cplx z) const;
  double residual(cplx z) const override { return minimality_residual(z); }
  const EnneperParams& params() const { return p_; }

 private:
  EnneperParams p_;
  Expr L_;
  Expr H_;
  Expr Phi_;  // holomorphic extension of h: h = Re Phi
  Expr dL_, dH_, dPhi_;
};

/// Re int_base^z phi dz, each component to `tol`. Propagates QuadratureError.
Vec3 immerse(const WeierstrassData& data, cplx z, double tol = 1e-12);

/// Closed form of the erf example. Regimes r2 > r1 > 0 (erf in the third
/// coordinate) and 2 r2 > r1 > r2 > 0 (erfi); DomainError otherwise, and
/// also when an erf value leaves the floating-point range.
Vec3 closed_form_chi(double r1, double r2, cplx z);

/// K = -(4|g'| / (|f| (1+|g|^2)^2))^2. DomainError where lambda = 0.
double gauss_curvature(const WeierstrassData& data, cplx z);

/// Closed-form curvature of the erf example,
///   K = -[4 sqrt(pi) r2 |z| / (e^{(r1+r2) s/2} + e^{-(3 r2 - r1) s/2})^2]^2, s = Re z^2.
double erf_example_curvature(double r1, double r2, cplx z);

/// Sector constants for the erf example at half-width eps:
/// A = 16 pi r2^2, B = (r1+r2) cos(pi/2 - 2 eps), C = (3 r2 - r1) cos(pi/2 - 2 eps).
struct SectorConstants {
  double A;
  double B;
  double C;
};
SectorConstants sector_constants(double r1, double r2, double eps);

/// theta lies within eps of an odd multiple of pi/4.
bool in_diagonal_sector(double theta, double eps);

/// The four diagonal limit points of the erf example (r2 > r1 regime),
/// indexed k = 1, 3, 5, 7 for theta = k pi / 4.
Vec3 erf_example_limit_point(double r1, double r2, int k);

}  // namespace halfspace::weierstrass
