#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "halfspace/surfgeo/mesh.hpp"
#include "halfspace/surfgeo/surface.hpp"

namespace halfspace::surfgeo {

/// A nearest point of a query y on the surface N.
///
/// `normal` is the unit normal at the foot pointing toward y, and k1 <= k2
/// are the principal curvatures with respect to that normal (the tube side).
struct FootPoint {
  Vec3 point = Vec3::Zero();
  Vec2 uv = Vec2::Zero();
  Vec3 normal = Vec3::UnitZ();
  double k1 = 0.0;
  double k2 = 0.0;
  Vec3 dir1 = Vec3::UnitX();
  Vec3 dir2 = Vec3::UnitY();
  double distance = 0.0;
  /// The minimizer sits on the edge of the parameter domain, so it need not
  /// be an orthogonal projection.
  bool on_boundary = false;
};

struct TubularQuery {
  Vec3 query = Vec3::Zero();
  double t = 0.0;    // signed distance; positive on the side of the oriented normal
  int side = 0;      // sign of t (0 on N)
  double epsilon = std::numeric_limits<double>::infinity();
  bool valid = false;  // 0 < |t| < epsilon and the foot is interior
  std::vector<FootPoint> feet;  // sorted by distance; more than one marks a cut-locus point

  const FootPoint& foot() const { return feet.front(); }
  int multiplicity() const { return static_cast<int>(feet.size()); }
  bool ambiguous() const { return feet.size() > 1; }
};

struct DistanceOptions {
  int mesh_nu = 128;
  int mesh_nv = 128;
  /// Feet whose distances differ by at most this (relative to max(1, d)) are
  /// reported together.
  double ambiguity_tol = 1e-9;
  int max_seeds = 8;
};

/// Signed distance to an analytic surface. Surfaces with closed-form feet use
/// them; others are tessellated once and each mesh answer seeds a Newton
/// projection on the exact parametrization. Immutable after construction.
class DistanceField {
 public:
  explicit DistanceField(SurfacePtr surface, int orientation = +1, DistanceOptions options = {});

  TubularQuery query(const Vec3& y, double epsilon = std::numeric_limits<double>::infinity()) const;

  /// Local Newton projection of y onto the sheet through `seed`.
  FootPoint project_from(const Vec3& y, const Vec2& seed) const;

  /// Foot data at a given parameter point, oriented toward y.
  FootPoint foot_at(const Vec3& y, const Vec2& uv) const;

  /// Signed distance of y for a given foot: +-|y - foot| with the sign of
  /// the oriented normal.
  double signed_distance(const Vec3& y, const FootPoint& foot) const;

  const ParametricSurface& surface() const { return *surface_; }
  SurfacePtr surface_ptr() const { return surface_; }
  int orientation() const { return orientation_; }
  /// Null for surfaces with closed-form feet.
  const MeshIndex* mesh() const { return mesh_.get(); }

 private:
  SurfacePtr surface_;
  int orientation_;
  DistanceOptions options_;
  std::shared_ptr<const MeshIndex> mesh_;
};

/// Distance from y to a mesh alone. Sign from the interpolated vertex normal;
/// the distance error against the underlying smooth surface is O(edge^2).
TubularQuery mesh_signed_distance(const MeshIndex& mesh, const Vec3& y, int orientation = +1);

struct ParallelCurvatures {
  double k1 = 0.0;
  double k2 = 0.0;
  /// min_i (1 - t k_i); approaches 0 at a focal point.
  double focal_margin = 1.0;
  bool near_focal = false;  // focal_margin < 1e-8
};

/// Curvatures k/(1 - t k) of the parallel surface at signed distance t.
/// Throws DomainError naming the focal distance 1/k when |1 - t k| <= 1e-14.
ParallelCurvatures parallel_curvatures(double k1, double k2, double t);

/// eps = min(1/(2 Lambda), 1/(2c)) (1 - margin), ignoring zero bounds;
/// the flat case c = Lambda = 0 returns `cap`.
double tubular_radius(double c, double lambda, double cap = std::numeric_limits<double>::infinity(),
                      double margin = 1e-3);

}  // namespace halfspace::surfgeo
