#include "halfspace/surfgeo/surface.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace halfspace::surfgeo {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double x, double lo, double hi) {
  const double period = hi - lo;
  double r = std::fmod(x - lo, period);
  if (r < 0.0) r += period;
  return lo + r;
}

}  // namespace

bool ParamDomain::contains(const Vec2& uv) const {
  const bool in_u = periodic_u || (uv.x() >= u0 && uv.x() <= u1);
  const bool in_v = periodic_v || (uv.y() >= v0 && uv.y() <= v1);
  return in_u && in_v;
}

Vec2 ParamDomain::normalize(const Vec2& uv, bool* clamped) const {
  Vec2 out = uv;
  bool moved = false;
  if (periodic_u) {
    out.x() = wrap(uv.x(), u0, u1);
  } else if (uv.x() < u0 || uv.x() > u1) {
    out.x() = std::clamp(uv.x(), u0, u1);
    moved = true;
  }
  if (periodic_v) {
    out.y() = wrap(uv.y(), v0, v1);
  } else if (uv.y() < v0 || uv.y() > v1) {
    out.y() = std::clamp(uv.y(), v0, v1);
    moved = true;
  }
  if (clamped) *clamped = moved;
  return out;
}

std::optional<std::vector<SurfacePoint>> ParametricSurface::exact_feet(const Vec3&) const {
  return std::nullopt;
}

Jet2 PlaneSurface::jet(const Vec2& uv) const {
  Jet2 j;
  j.p = Vec3(uv.x(), uv.y(), 0.0);
  j.pu = Vec3::UnitX();
  j.pv = Vec3::UnitY();
  return j;
}

std::optional<std::vector<SurfacePoint>> PlaneSurface::exact_feet(const Vec3& y) const {
  return std::vector<SurfacePoint>{{Vec2(y.x(), y.y()), Vec3(y.x(), y.y(), 0.0)}};
}

Jet2 CylinderSurface::jet(const Vec2& uv) const {
  const double c = std::cos(uv.x());
  const double s = std::sin(uv.x());
  Jet2 j;
  j.p = Vec3(r_ * c, r_ * s, uv.y());
  j.pu = Vec3(-r_ * s, r_ * c, 0.0);
  j.pv = Vec3::UnitZ();
  j.puu = Vec3(-r_ * c, -r_ * s, 0.0);
  return j;
}

ParamDomain CylinderSurface::domain() const { return {0.0, kTwoPi, -h_, h_, true, false}; }

std::optional<std::vector<SurfacePoint>> CylinderSurface::exact_feet(const Vec3& y) const {
  const double rho = std::hypot(y.x(), y.y());
  std::vector<SurfacePoint> feet;
  if (rho == 0.0) {
    // Every point of the circle at height y.z is a foot; report two antipodal ones.
    for (double u : {0.0, std::numbers::pi})
      feet.push_back({Vec2(u, y.z()), Vec3(r_ * std::cos(u), r_ * std::sin(u), y.z())});
    return feet;
  }
  const double u = wrap(std::atan2(y.y(), y.x()), 0.0, kTwoPi);
  feet.push_back({Vec2(u, y.z()), Vec3(r_ * y.x() / rho, r_ * y.y() / rho, y.z())});
  return feet;
}

Jet2 SphereSurface::jet(const Vec2& uv) const {
  const double su = std::sin(uv.x());
  const double cu = std::cos(uv.x());
  const double sv = std::sin(uv.y());
  const double cv = std::cos(uv.y());
  Jet2 j;
  j.p = r_ * Vec3(su * cv, su * sv, cu);
  j.pu = r_ * Vec3(cu * cv, cu * sv, -su);
  j.pv = r_ * Vec3(-su * sv, su * cv, 0.0);
  j.puu = -j.p;
  j.puv = r_ * Vec3(-cu * sv, cu * cv, 0.0);
  j.pvv = r_ * Vec3(-su * cv, -su * sv, 0.0);
  return j;
}

ParamDomain SphereSurface::domain() const { return {1e-3, std::numbers::pi - 1e-3, 0.0, kTwoPi, false, true}; }

std::optional<std::vector<SurfacePoint>> SphereSurface::exact_feet(const Vec3& y) const {
  const double rho = y.norm();
  std::vector<SurfacePoint> feet;
  if (rho == 0.0) {
    feet.push_back({Vec2(std::numbers::pi / 2, 0.0), Vec3(r_, 0.0, 0.0)});
    feet.push_back({Vec2(std::numbers::pi / 2, std::numbers::pi), Vec3(-r_, 0.0, 0.0)});
    return feet;
  }
  const double u = std::acos(std::clamp(y.z() / rho, -1.0, 1.0));
  const double v = wrap(std::atan2(y.y(), y.x()), 0.0, kTwoPi);
  feet.push_back({Vec2(u, v), (r_ / rho) * y});
  return feet;
}

Jet2 CatenoidSurface::jet(const Vec2& uv) const {
  const double cu = std::cos(uv.x());
  const double su = std::sin(uv.x());
  const double ch = std::cosh(uv.y());
  const double sh = std::sinh(uv.y());
  Jet2 j;
  j.p = a_ * Vec3(ch * cu, ch * su, uv.y());
  j.pu = a_ * Vec3(-ch * su, ch * cu, 0.0);
  j.pv = a_ * Vec3(sh * cu, sh * su, 1.0);
  j.puu = a_ * Vec3(-ch * cu, -ch * su, 0.0);
  j.puv = a_ * Vec3(-sh * su, sh * cu, 0.0);
  j.pvv = a_ * Vec3(ch * cu, ch * su, 0.0);
  return j;
}

ParamDomain CatenoidSurface::domain() const { return {0.0, kTwoPi, -vmax_, vmax_, true, false}; }

Jet2 HelicoidSurface::jet(const Vec2& uv) const {
  const double cu = std::cos(uv.x());
  const double su = std::sin(uv.x());
  const double ch = std::cosh(uv.y());
  const double sh = std::sinh(uv.y());
  Jet2 j;
  j.p = a_ * Vec3(sh * cu, sh * su, uv.x());
  j.pu = a_ * Vec3(-sh * su, sh * cu, 1.0);
  j.pv = a_ * Vec3(ch * cu, ch * su, 0.0);
  j.puu = a_ * Vec3(-sh * cu, -sh * su, 0.0);
  j.puv = a_ * Vec3(-ch * su, ch * cu, 0.0);
  j.pvv = a_ * Vec3(sh * cu, sh * su, 0.0);
  return j;
}

SampledSurface::SampledSurface(std::string name, ParamDomain dom, std::function<Vec3(const Vec2&)> position,
                               double scale)
    : name_(std::move(name)),
      dom_(dom),
      pos_(std::move(position)),
      h_(std::cbrt(std::numeric_limits<double>::epsilon()) * scale) {}

Jet2 SampledSurface::jet(const Vec2& uv) const {
  const Vec2 eu(h_, 0.0);
  const Vec2 ev(0.0, h_);
  Jet2 j;
  j.p = pos_(uv);
  const Vec3 pu_p = pos_(uv + eu), pu_m = pos_(uv - eu);
  const Vec3 pv_p = pos_(uv + ev), pv_m = pos_(uv - ev);
  j.pu = (pu_p - pu_m) / (2.0 * h_);
  j.pv = (pv_p - pv_m) / (2.0 * h_);
  j.puu = (pu_p - 2.0 * j.p + pu_m) / (h_ * h_);
  j.pvv = (pv_p - 2.0 * j.p + pv_m) / (h_ * h_);
  j.puv = (pos_(uv + eu + ev) - pos_(uv + eu - ev) - pos_(uv - eu + ev) + pos_(uv - eu - ev)) / (4.0 * h_ * h_);
  return j;
}

Jet2 TransformedSurface::jet(const Vec2& uv) const {
  Jet2 j = base_->jet(uv);
  j.p = A_ * j.p + b_;
  j.pu = A_ * j.pu;
  j.pv = A_ * j.pv;
  j.puu = A_ * j.puu;
  j.puv = A_ * j.puv;
  j.pvv = A_ * j.pvv;
  return j;
}

std::optional<double> TransformedSurface::curvature_bound() const {
  const auto base = base_->curvature_bound();
  if (!base) return std::nullopt;
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(A_).singularValues();
  if (sv(2) <= 0.0 || std::abs(sv(0) - sv(2)) > 1e-12 * sv(0)) return std::nullopt;
  return *base / sv(2);
}

}  // namespace halfspace::surfgeo
