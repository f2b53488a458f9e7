#include "halfspace/weierstrass/immersion.hpp"

#include <cmath>
#include <numbers>

#include "halfspace/cnum/erf.hpp"
#include "halfspace/cnum/quadrature.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/surfgeo/fundamental_forms.hpp"

namespace halfspace::weierstrass {
namespace {

const cplx kI(0.0, 1.0);

std::array<Expr, 3> derivatives(const std::array<Expr, 3>& e) {
  return {e[0].derivative(), e[1].derivative(), e[2].derivative()};
}

struct EnneperExprs {
  Expr L;
  Expr H;
  Expr Phi;
};

EnneperExprs enneper_exprs(const EnneperParams& p) {
  p.validate();
  const Expr z = Expr::variable();
  const double C = -4.0 * std::sqrt(p.d / p.r2) * std::abs(p.r2 / p.r1) * std::abs(p.r1 - p.r2);
  return {Expr(p.r1 - p.r2) * exp(z), Expr(-p.d) * exp(Expr(p.r1 / p.r2 - 1.0) * z),
          Expr(cplx(0.0, C)) * exp(Expr(p.r1 / (2.0 * p.r2)) * z)};
}

// x1 + i x2 = L - conj(H) = Re(L - H) + i Re(-i (L + H)), x3 = Re Phi.
std::array<Expr, 3> enneper_phi(const EnneperExprs& e) {
  const Expr dL = e.L.derivative();
  const Expr dH = e.H.derivative();
  return {dL - dH, Expr(-kI) * (dL + dH), e.Phi.derivative()};
}

}  // namespace

std::array<Expr, 3> WeierstrassData::phi() const {
  const Expr g2 = g * g;
  return {Expr(0.5) * f * (Expr(1.0) - g2), Expr(cplx(0.0, 0.5)) * f * (Expr(1.0) + g2), f * g};
}

double WeierstrassData::lambda(cplx z) const {
  return 0.5 * std::abs(f(z)) * (1.0 + std::norm(g(z)));
}

WeierstrassData erf_example_data(double r1, double r2) {
  const Expr z = Expr::variable();
  WeierstrassData d;
  d.f = Expr(2.0 / std::sqrt(std::numbers::pi)) * exp(Expr(r1) * z * z);
  d.g = exp(Expr(-r2) * z * z);
  return d;
}

void EnneperParams::validate() const {
  if (!(std::isfinite(r1) && std::isfinite(r2) && std::isfinite(d)))
    throw ContractViolation("Enneper parameters must be finite");
  if (r1 == r2) throw ContractViolation("Enneper parameters need r1 != r2");
  if (r1 * r2 * d == 0.0) throw ContractViolation("Enneper parameters need r1 r2 d != 0");
  if (!(d / r2 > 0.0)) throw ContractViolation("Enneper parameters need d / r2 > 0");
}

bool EnneperParams::admissible() const {
  return 0.0 < r1 && r1 < 4.0 * r2 && 4.0 * r2 < 3.0 * r1 && d > 0.0 && d == r1 - r2;
}

EnneperParams EnneperParams::standard() {
  const double s5 = std::sqrt(5.0);
  return {s5, 1.0, s5 - 1.0};
}

ConformalImmersion::ConformalImmersion(std::string name, std::array<Expr, 3> phi, surfgeo::ParamDomain domain)
    : name_(std::move(name)), phi_(std::move(phi)), dphi_(derivatives(phi_)), domain_(domain) {}

std::array<cplx, 3> ConformalImmersion::phi(cplx z) const { return {phi_[0](z), phi_[1](z), phi_[2](z)}; }

std::array<cplx, 3> ConformalImmersion::dphi(cplx z) const { return {dphi_[0](z), dphi_[1](z), dphi_[2](z)}; }

double ConformalImmersion::lambda(cplx z) const {
  const auto p = phi(z);
  return std::sqrt(0.5 * (std::norm(p[0]) + std::norm(p[1]) + std::norm(p[2])));
}

double ConformalImmersion::conformality_residual(cplx z) const {
  const auto p = phi(z);
  return 0.25 * std::abs(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

surfgeo::Jet2 ConformalImmersion::jet(const Vec2& uv) const {
  const cplx z(uv.x(), uv.y());
  const auto p = phi(z);
  const auto dp = dphi(z);
  surfgeo::Jet2 j;
  j.p = point(z);
  for (int k = 0; k < 3; ++k) {
    j.pu(k) = p[k].real();
    j.pv(k) = -p[k].imag();
    j.puu(k) = dp[k].real();
    j.puv(k) = -dp[k].imag();
    j.pvv(k) = -dp[k].real();
  }
  return j;
}

SurfaceJet ConformalImmersion::surface_jet(cplx z) const {
  SurfaceJet out;
  out.lambda = lambda(z);
  if (!(out.lambda > 0.0)) throw DomainError("conformal factor vanishes (branch point)");
  const surfgeo::Jet2 j = jet(Vec2(z.real(), z.imag()));
  const surfgeo::FundamentalForms ff = surfgeo::fundamental_forms(j);
  out.position = j.p;
  out.xu = j.pu;
  out.xv = j.pv;
  out.normal = ff.normal;
  out.K = ff.K;
  out.H = ff.H;
  out.residual = residual(z);
  return out;
}

WeierstrassSurface::WeierstrassSurface(WeierstrassData data, double tol, surfgeo::ParamDomain domain)
    : ConformalImmersion("weierstrass", data.phi(), domain), data_(std::move(data)), tol_(tol) {}

Vec3 WeierstrassSurface::point(cplx z) const { return immerse(data_, z, tol_); }

ErfExampleSurface::ErfExampleSurface(double r1, double r2, surfgeo::ParamDomain domain)
    : WeierstrassSurface(erf_example_data(r1, r2), 1e-12, domain), r1_(r1), r2_(r2) {
  closed_form_chi(r1, r2, 0.0);  // validates the regime
}

Vec3 ErfExampleSurface::point(cplx z) const { return closed_form_chi(r1_, r2_, z); }

EnneperSurface::EnneperSurface(EnneperParams p, surfgeo::ParamDomain domain)
    : ConformalImmersion("enneper_andrade", enneper_phi(enneper_exprs(p)), domain), p_(p) {
  const EnneperExprs e = enneper_exprs(p);
  L_ = e.L;
  H_ = e.H;
  Phi_ = e.Phi;
  dL_ = L_.derivative();
  dH_ = H_.derivative();
  dPhi_ = Phi_.derivative();
}

Vec3 EnneperSurface::point(cplx z) const {
  const cplx w = L_(z) - std::conj(H_(z));
  return {w.real(), w.imag(), Phi_(z).real()};
}

double EnneperSurface::minimality_residual(cplx z) const {
  const cplx half = 0.5 * dPhi_(z);
  return std::abs(dL_(z) * dH_(z) - half * half);
}

Vec3 immerse(const WeierstrassData& data, cplx z, double tol) {
  Vec3 out = Vec3::Zero();
  if (z == data.base) return out;
  const auto phi = data.phi();
  const cnum::PathSpec path = cnum::PathSpec::segment(data.base, z);
  for (int k = 0; k < 3; ++k) out(k) = cnum::integrate_holomorphic(phi[k], path, tol).value.real();
  return out;
}

Vec3 closed_form_chi(double r1, double r2, cplx z) {
  const bool erf_regime = r2 > r1 && r1 > 0.0;
  const bool erfi_regime = 2.0 * r2 > r1 && r1 > r2 && r2 > 0.0;
  if (!erf_regime && !erfi_regime)
    throw DomainError("erf example needs r2 > r1 > 0 or 2 r2 > r1 > r2 > 0");
  const double a = std::sqrt(r1);
  const double b = std::sqrt(2.0 * r2 - r1);
  const double c = std::sqrt(std::abs(r2 - r1));
  const cnum::ErfResult e1 = cnum::erfi_checked(a * std::conj(z));
  const cnum::ErfResult e2 = cnum::erf_checked(b * z);
  const cnum::ErfResult e3 = erf_regime ? cnum::erf_checked(c * z) : cnum::erfi_checked(c * z);
  if (!(e1.accurate && e2.accurate && e3.accurate))
    throw DomainError("erf example evaluation leaves the floating-point range");
  const cplx w = e1.value / (2.0 * a) - e2.value / (2.0 * b);
  return {w.real(), w.imag(), e3.value.real() / c};
}

double gauss_curvature(const WeierstrassData& data, cplx z) {
  const cplx f = data.f(z);
  const cplx g = data.g(z);
  const double lam = 0.5 * std::abs(f) * (1.0 + std::norm(g));
  if (!(lam > 0.0)) throw DomainError("conformal factor vanishes (branch point)");
  const double gp = std::abs(data.g.derivative()(z));
  const double q = 4.0 * gp / (std::abs(f) * (1.0 + std::norm(g)) * (1.0 + std::norm(g)));
  return -q * q;
}

double erf_example_curvature(double r1, double r2, cplx z) {
  const double s = (z * z).real();
  const double denom = std::exp(0.5 * (r1 + r2) * s) + std::exp(-0.5 * (3.0 * r2 - r1) * s);
  const double q = 4.0 * std::sqrt(std::numbers::pi) * r2 * std::abs(z) / (denom * denom);
  return -q * q;
}

SectorConstants sector_constants(double r1, double r2, double eps) {
  const double c = std::cos(std::numbers::pi / 2.0 - 2.0 * eps);
  return {16.0 * std::numbers::pi * r2 * r2, (r1 + r2) * c, (3.0 * r2 - r1) * c};
}

bool in_diagonal_sector(double theta, double eps) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  for (int i = 1; i <= 4; ++i) {
    const double center = (2 * i - 1) * std::numbers::pi / 4.0;
    if (std::abs(t - center) < eps) return true;
  }
  return false;
}

Vec3 erf_example_limit_point(double r1, double r2, int k) {
  if (!(r2 > r1 && r1 > 0.0)) throw ContractViolation("diagonal limit points are listed for r2 > r1 > 0");
  const double a = 1.0 / (2.0 * std::sqrt(2.0 * r2 - r1));
  const double b = 1.0 / (2.0 * std::sqrt(r1));
  const double c = 1.0 / std::sqrt(r2 - r1);
  switch (k) {
    case 1: return {-a, -b, c};
    case 3: return {a, -b, -c};
    case 5: return {a, b, -c};
    case 7: return {-a, b, c};
    default: throw ContractViolation("diagonal index must be 1, 3, 5 or 7");
  }
}

}  // namespace halfspace::weierstrass
