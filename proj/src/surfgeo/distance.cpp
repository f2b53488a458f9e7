#include "halfspace/surfgeo/distance.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfspace/errors.hpp"

namespace halfspace::surfgeo {
namespace {

constexpr int kNewtonIterations = 60;

double half_sq(const Vec3& r) { return 0.5 * r.squaredNorm(); }

}  // namespace

DistanceField::DistanceField(SurfacePtr surface, int orientation, DistanceOptions options)
    : surface_(std::move(surface)), orientation_(orientation >= 0 ? 1 : -1), options_(options) {
  if (!surface_) throw ContractViolation("distance field needs a surface");
  if (!surface_->exact_feet(Vec3(0.1, 0.2, 0.3)).has_value())
    mesh_ = std::make_shared<MeshIndex>(tessellate(*surface_, options_.mesh_nu, options_.mesh_nv));
}

FootPoint DistanceField::foot_at(const Vec3& y, const Vec2& uv) const {
  const FundamentalForms ff = surface_->forms(uv);
  const Jet2 jet = surface_->jet(uv);
  const Vec3 diff = y - jet.p;
  const Vec3 oriented = orientation_ * ff.normal;
  const bool toward_oriented = diff.dot(oriented) >= 0.0;
  // forms are relative to the raw normal pu x pv; flip to face the query.
  const bool flip = (toward_oriented ? orientation_ : -orientation_) < 0;
  const FundamentalForms f = flip ? ff.flipped() : ff;
  FootPoint foot;
  foot.point = jet.p;
  foot.uv = uv;
  foot.normal = f.normal;
  foot.k1 = f.k1;
  foot.k2 = f.k2;
  foot.dir1 = f.dir1;
  foot.dir2 = f.dir2;
  foot.distance = diff.norm();
  return foot;
}

double DistanceField::signed_distance(const Vec3& y, const FootPoint& foot) const {
  const Vec3 oriented = orientation_ * surface_->forms(foot.uv).normal;
  const double s = (y - foot.point).dot(oriented) >= 0.0 ? 1.0 : -1.0;
  return s * (y - foot.point).norm();
}

FootPoint DistanceField::project_from(const Vec3& y, const Vec2& seed) const {
  const ParamDomain dom = surface_->domain();
  Vec2 uv = dom.normalize(seed);
  bool clamped = false;
  for (int it = 0; it < kNewtonIterations; ++it) {
    const Jet2 j = surface_->jet(uv);
    const Vec3 r = j.p - y;
    const Vec2 g(r.dot(j.pu), r.dot(j.pv));
    Eigen::Matrix2d hess;
    hess << j.pu.dot(j.pu) + r.dot(j.puu), j.pu.dot(j.pv) + r.dot(j.puv), j.pu.dot(j.pv) + r.dot(j.puv),
        j.pv.dot(j.pv) + r.dot(j.pvv);
    Eigen::Matrix2d gn;
    gn << j.pu.dot(j.pu), j.pu.dot(j.pv), j.pu.dot(j.pv), j.pv.dot(j.pv);
    const bool convex = hess(0, 0) > 0.0 && hess.determinant() > 0.0;
    const Vec2 step = -(convex ? hess : gn).inverse() * g;
    if (!step.allFinite()) break;

    const double f0 = half_sq(r);
    double alpha = 1.0;
    bool accepted = false;
    Vec2 next = uv;
    bool next_clamped = false;
    for (int ls = 0; ls < 40; ++ls) {
      next = dom.normalize(uv + alpha * step, &next_clamped);
      if (half_sq(surface_->position(next) - y) <= f0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const double moved = (alpha * step).norm();
    uv = next;
    clamped = next_clamped;
    if (moved <= 1e-15 * (1.0 + uv.norm())) break;
  }
  FootPoint foot = foot_at(y, uv);
  const Jet2 j = surface_->jet(uv);
  const Vec3 r = j.p - y;
  // At a clamped minimizer the gradient need not vanish.
  const double tangential = std::hypot(r.dot(j.pu) / j.pu.norm(), r.dot(j.pv) / j.pv.norm());
  foot.on_boundary = clamped && tangential > 1e-8 * std::max(r.norm(), 1e-300);
  return foot;
}

TubularQuery DistanceField::query(const Vec3& y, double epsilon) const {
  TubularQuery q;
  q.query = y;
  q.epsilon = epsilon;

  std::vector<FootPoint> candidates;
  if (auto exact = surface_->exact_feet(y)) {
    for (const SurfacePoint& sp : *exact) candidates.push_back(foot_at(y, sp.uv));
  } else {
    const MeshIndex& m = *mesh_;
    const MeshIndex::Hit best = m.nearest(y);
    const double edge = m.max_edge_length();
    // Seeds: every mesh region whose distance is within a few edge lengths
    // of the best, thinned so that seeds are at least two edges apart.
    const std::vector<MeshIndex::Hit> hits = m.within(y, best.distance + 0.5 * edge);
    std::vector<Vec3> seeds;
    for (const MeshIndex::Hit& h : hits) {
      if (static_cast<int>(seeds.size()) >= options_.max_seeds) break;
      bool fresh = true;
      for (const Vec3& s : seeds)
        if ((s - h.point).norm() < 2.0 * edge) fresh = false;
      if (!fresh) continue;
      seeds.push_back(h.point);
      candidates.push_back(project_from(y, m.interpolated_uv(h)));
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const FootPoint& a, const FootPoint& b) { return a.distance < b.distance; });
  const double dmin = candidates.front().distance;
  const double tol = options_.ambiguity_tol * std::max(1.0, dmin);
  for (const FootPoint& c : candidates) {
    if (c.distance - dmin > tol) break;
    bool duplicate = false;
    for (const FootPoint& f : q.feet)
      if ((f.point - c.point).norm() <= 1e-7 * (1.0 + dmin)) duplicate = true;
    if (!duplicate) q.feet.push_back(c);
  }

  q.t = signed_distance(y, q.foot());
  q.side = q.t > 0.0 ? 1 : (q.t < 0.0 ? -1 : 0);
  q.valid = std::abs(q.t) > 0.0 && std::abs(q.t) < epsilon && !q.foot().on_boundary;
  return q;
}

TubularQuery mesh_signed_distance(const MeshIndex& mesh, const Vec3& y, int orientation) {
  const MeshIndex::Hit hit = mesh.nearest(y);
  const Vec3 n = (orientation >= 0 ? 1.0 : -1.0) * mesh.interpolated_normal(hit);
  const double s = (y - hit.point).dot(n) >= 0.0 ? 1.0 : -1.0;
  FootPoint foot;
  foot.point = hit.point;
  foot.distance = hit.distance;
  foot.normal = s * n;
  if (!mesh.uvs().empty()) foot.uv = mesh.interpolated_uv(hit);
  if (!mesh.curvatures().empty()) {
    // Vertex curvatures are stored against the vertex normal (orientation +1).
    Vec2 k = mesh.interpolated_curvatures(hit);
    if (s * (orientation >= 0 ? 1.0 : -1.0) < 0.0) k = Vec2(-k.y(), -k.x());
    foot.k1 = k.x();
    foot.k2 = k.y();
  }
  TubularQuery q;
  q.query = y;
  q.feet.push_back(foot);
  q.t = s * hit.distance;
  q.side = hit.distance > 0.0 ? static_cast<int>(s) : 0;
  q.valid = hit.distance > 0.0;
  return q;
}

ParallelCurvatures parallel_curvatures(double k1, double k2, double t) {
  ParallelCurvatures out;
  const double m1 = 1.0 - t * k1;
  const double m2 = 1.0 - t * k2;
  for (double k : {k1, k2}) {
    const double m = 1.0 - t * k;
    if (std::abs(m) <= 1e-14) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "focal point: t = " << t << " equals the focal distance 1/k = " << 1.0 / k;
      throw DomainError(msg.str());
    }
  }
  const double a = k1 / m1;
  const double b = k2 / m2;
  out.k1 = std::min(a, b);
  out.k2 = std::max(a, b);
  out.focal_margin = std::min(m1, m2);
  out.near_focal = out.focal_margin < 1e-8;
  return out;
}

double tubular_radius(double c, double lambda, double cap, double margin) {
  if (c < 0.0 || lambda < 0.0) throw ContractViolation("curvature bounds must be nonnegative");
  if (!(margin >= 0.0 && margin < 1.0)) throw ContractViolation("tubular margin must lie in [0, 1)");
  double eps = cap;
  if (lambda > 0.0) eps = std::min(eps, 1.0 / (2.0 * lambda) * (1.0 - margin));
  if (c > 0.0) eps = std::min(eps, 1.0 / (2.0 * c) * (1.0 - margin));
  if (!std::isfinite(eps)) throw ContractViolation("flat tube needs a finite cap");
  return eps;
}

}  // namespace halfspace::surfgeo
