#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "halfspace/weierstrass/immersion.hpp"

namespace halfspace::weierstrass {

/// Regular grid over [u0, u1] x [v0, v1] with nu x nv points.
struct GridSpec {
  double u0 = -2.0;
  double u1 = 2.0;
  double v0 = -2.0;
  double v1 = 2.0;
  int nu = 101;
  int nv = 101;

  Vec2 at(int i, int j) const;
};

struct ExportStats {
  int points = 0;
  int failures = 0;  // grid points whose evaluation threw or was not finite
  double max_residual = 0.0;
  double max_abs_H = 0.0;
};

/// Jet of any parametric surface in the table layout. For conformal
/// immersions this is surface_jet; otherwise lambda = (det I)^{1/4} and the
/// residual is the conformality defect |E - G - 2iF| / 4 (which equals
/// |sum phi_k^2| / 4 for a holomorphic null curve).
SurfaceJet generic_jet(const surfgeo::ParametricSurface& surface, const Vec2& uv);

/// CSV with header u,v,x,y,z,lambda,K,H,residual and 17 significant digits.
/// A failing grid point is written with nan fields and counted.
ExportStats write_jet_csv(std::ostream& out, const surfgeo::ParametricSurface& surface, const GridSpec& grid);

/// Indexed triangle mesh of the grid; faces touching a failed vertex are
/// dropped and failed vertices are written at the origin.
ExportStats write_mesh_obj(std::ostream& out, const surfgeo::ParametricSurface& surface, const GridSpec& grid);

/// Long-format table of a parameter curve: s,x,y,z for s in `samples`,
/// evaluated at z = curve(s).
void write_curve_csv(std::ostream& out, const ConformalImmersion& surface, const std::function<cplx(double)>& curve,
                     const std::vector<double>& samples);

}  // namespace halfspace::weierstrass
