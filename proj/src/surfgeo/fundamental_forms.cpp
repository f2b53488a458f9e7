#include "halfspace/surfgeo/fundamental_forms.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "halfspace/errors.hpp"

namespace halfspace::surfgeo {

FundamentalForms FundamentalForms::flipped() const {
  FundamentalForms f = *this;
  f.second = -second;
  f.k1 = -k2;
  f.k2 = -k1;
  f.H = -H;
  f.normal = -normal;
  f.dir1 = dir2;
  f.dir2 = dir1;
  return f;
}

FundamentalForms fundamental_forms(const Jet2& jet) {
  const double E = jet.pu.dot(jet.pu);
  const double F = jet.pu.dot(jet.pv);
  const double G = jet.pv.dot(jet.pv);
  const double det = E * G - F * F;
  if (!(det > 1e-14 * E * G) || !std::isfinite(det))
    throw DomainError("degenerate first fundamental form (immersion condition fails)");

  const Vec3 cross = jet.pu.cross(jet.pv);
  const Vec3 n = cross / cross.norm();

  FundamentalForms out;
  out.first << E, F, F, G;
  out.second << jet.puu.dot(n), jet.puv.dot(n), jet.puv.dot(n), jet.pvv.dot(n);
  out.normal = n;

  // Principal curvatures are invariant under a common rescaling of I and II;
  // normalising keeps the generalized solver well scaled for tiny metrics.
  const double scale = 0.5 * (E + G);
  const Eigen::Matrix2d I = out.first / scale;
  const Eigen::Matrix2d II = out.second / scale;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> solver(II, I);
  if (solver.info() != Eigen::Success) throw DomainError("shape operator eigen-decomposition failed");

  out.k1 = solver.eigenvalues()(0);
  out.k2 = solver.eigenvalues()(1);
  out.H = out.k1 + out.k2;
  out.K = out.k1 * out.k2;
  const Eigen::Matrix2d V = solver.eigenvectors() / std::sqrt(scale);
  out.dir1 = (V(0, 0) * jet.pu + V(1, 0) * jet.pv).normalized();
  out.dir2 = (V(0, 1) * jet.pu + V(1, 1) * jet.pv).normalized();
  return out;
}

}  // namespace halfspace::surfgeo
