#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/surfgeo/fundamental_forms.hpp"

namespace halfspace::surfgeo {

struct ParamDomain {
  double u0 = -1.0;
  double u1 = 1.0;
  double v0 = -1.0;
  double v1 = 1.0;
  bool periodic_u = false;
  bool periodic_v = false;

  bool contains(const Vec2& uv) const;
  /// Wraps periodic coordinates into range and clamps the others.
  /// `clamped` is set when a non-periodic coordinate had to move.
  Vec2 normalize(const Vec2& uv, bool* clamped = nullptr) const;
};

/// A nearest-point candidate on an analytic surface. Curvatures are with
/// respect to the surface's own normal field.
struct SurfacePoint {
  Vec2 uv = Vec2::Zero();
  Vec3 point = Vec3::Zero();
};

/// Smooth map from a parameter rectangle into R^3 with second-order jets.
class ParametricSurface {
 public:
  virtual ~ParametricSurface() = default;

  virtual Jet2 jet(const Vec2& uv) const = 0;
  virtual ParamDomain domain() const = 0;
  virtual std::string name() const = 0;

  /// sup of |principal curvature| when known in closed form.
  virtual std::optional<double> curvature_bound() const { return std::nullopt; }

  /// All nearest points of y in closed form, if the surface supports it.
  /// Returning nullopt selects the generic mesh-seeded Newton projection.
  virtual std::optional<std::vector<SurfacePoint>> exact_feet(const Vec3& y) const;

  Vec3 position(const Vec2& uv) const { return jet(uv).p; }
  FundamentalForms forms(const Vec2& uv) const { return fundamental_forms(jet(uv)); }
};

using SurfacePtr = std::shared_ptr<const ParametricSurface>;

/// z = 0 over [-half, half]^2, normal +e3.
class PlaneSurface : public ParametricSurface {
 public:
  explicit PlaneSurface(double half_width = 10.0) : half_(half_width) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override { return {-half_, half_, -half_, half_, false, false}; }
  std::string name() const override { return "plane"; }
  std::optional<double> curvature_bound() const override { return 0.0; }
  std::optional<std::vector<SurfacePoint>> exact_feet(const Vec3& y) const override;

 private:
  double half_;
};

/// (R cos u, R sin u, v), u periodic, outward normal.
class CylinderSurface : public ParametricSurface {
 public:
  explicit CylinderSurface(double radius = 1.0, double half_height = 5.0) : r_(radius), h_(half_height) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override;
  std::string name() const override { return "cylinder"; }
  std::optional<double> curvature_bound() const override { return 1.0 / r_; }
  std::optional<std::vector<SurfacePoint>> exact_feet(const Vec3& y) const override;
  double radius() const { return r_; }

 private:
  double r_;
  double h_;
};

/// R (sin u cos v, sin u sin v, cos u), u in (0, pi), v periodic, outward normal.
class SphereSurface : public ParametricSurface {
 public:
  explicit SphereSurface(double radius = 1.0) : r_(radius) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override;
  std::string name() const override { return "sphere"; }
  std::optional<double> curvature_bound() const override { return 1.0 / r_; }
  std::optional<std::vector<SurfacePoint>> exact_feet(const Vec3& y) const override;
  double radius() const { return r_; }

 private:
  double r_;
};

/// (a cosh v cos u, a cosh v sin u, a v), u periodic, outward normal.
/// Principal curvatures +-1/(a cosh^2 v).
class CatenoidSurface : public ParametricSurface {
 public:
  explicit CatenoidSurface(double a = 1.0, double half_height = 2.0) : a_(a), vmax_(half_height) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override;
  std::string name() const override { return "catenoid"; }
  std::optional<double> curvature_bound() const override { return 1.0 / a_; }

 private:
  double a_;
  double vmax_;
};

/// (a sinh v cos u, a sinh v sin u, a u); conformal, the conjugate of the
/// catenoid with the same a.
class HelicoidSurface : public ParametricSurface {
 public:
  HelicoidSurface(double a, ParamDomain dom) : a_(a), dom_(dom) {}
  explicit HelicoidSurface(double a = 1.0) : HelicoidSurface(a, {-3.14159, 3.14159, -2.0, 2.0}) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override { return dom_; }
  std::string name() const override { return "helicoid"; }
  std::optional<double> curvature_bound() const override { return 1.0 / a_; }

 private:
  double a_;
  ParamDomain dom_;
};

/// Surface given by an analytic jet callback.
class JetSurface : public ParametricSurface {
 public:
  JetSurface(std::string name, ParamDomain dom, std::function<Jet2(const Vec2&)> jet,
             std::optional<double> curvature_bound = std::nullopt)
      : name_(std::move(name)), dom_(dom), jet_(std::move(jet)), bound_(curvature_bound) {}
  Jet2 jet(const Vec2& uv) const override { return jet_(uv); }
  ParamDomain domain() const override { return dom_; }
  std::string name() const override { return name_; }
  std::optional<double> curvature_bound() const override { return bound_; }

 private:
  std::string name_;
  ParamDomain dom_;
  std::function<Jet2(const Vec2&)> jet_;
  std::optional<double> bound_;
};

/// Surface given by positions only; derivatives by central differences with
/// step h = eps^{1/3} * scale.
class SampledSurface : public ParametricSurface {
 public:
  SampledSurface(std::string name, ParamDomain dom, std::function<Vec3(const Vec2&)> position,
                 double scale = 1.0);
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override { return dom_; }
  std::string name() const override { return name_; }
  double step() const { return h_; }

 private:
  std::string name_;
  ParamDomain dom_;
  std::function<Vec3(const Vec2&)> pos_;
  double h_;
};

/// Affine image A x + b of another surface (A orthogonal for a rigid motion).
/// Normal orientation follows det A.
class TransformedSurface : public ParametricSurface {
 public:
  TransformedSurface(SurfacePtr base, const Eigen::Matrix3d& A, const Vec3& b)
      : base_(std::move(base)), A_(A), b_(b) {}
  Jet2 jet(const Vec2& uv) const override;
  ParamDomain domain() const override { return base_->domain(); }
  std::string name() const override { return base_->name(); }
  std::optional<double> curvature_bound() const override;

 private:
  SurfacePtr base_;
  Eigen::Matrix3d A_;
  Vec3 b_;
};

}  // namespace halfspace::surfgeo
