#pragma once

#include <Eigen/Core>

namespace halfspace::surfgeo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Position and first/second partial derivatives of a parametrized surface.
struct Jet2 {
  Vec3 p = Vec3::Zero();
  Vec3 pu = Vec3::Zero();
  Vec3 pv = Vec3::Zero();
  Vec3 puu = Vec3::Zero();
  Vec3 puv = Vec3::Zero();
  Vec3 pvv = Vec3::Zero();
};

/// Shape data at one parameter point.
///
/// Sign convention: `second` and the principal curvatures are taken with
/// respect to `normal`, i.e. II_ij = <x_ij, normal>. A round sphere with
/// outward normal has k1 = k2 = -1/R. H is the trace of the shape operator
/// (k1 + k2), not the average.
struct FundamentalForms {
  Eigen::Matrix2d first;
  Eigen::Matrix2d second;
  double k1 = 0.0;  // k1 <= k2
  double k2 = 0.0;
  double H = 0.0;
  double K = 0.0;
  Vec3 normal = Vec3::UnitZ();
  Vec3 dir1 = Vec3::UnitX();  // unit principal directions in R^3
  Vec3 dir2 = Vec3::UnitY();

  /// Same data with respect to the opposite normal.
  FundamentalForms flipped() const;
};

/// Eigen-decomposition of I^{-1} II with normal = pu x pv / |pu x pv|.
/// Throws DomainError when det I <= 1e-14 * E * G (degenerate metric).
FundamentalForms fundamental_forms(const Jet2& jet);

}  // namespace halfspace::surfgeo
