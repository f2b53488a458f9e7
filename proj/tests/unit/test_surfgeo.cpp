#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "halfspace/errors.hpp"
#include "halfspace/surfgeo/distance.hpp"
#include "halfspace/surfgeo/fundamental_forms.hpp"
#include "halfspace/surfgeo/mesh.hpp"
#include "halfspace/surfgeo/surface.hpp"

using namespace halfspace;
using namespace halfspace::surfgeo;

namespace {

MeshIndex::Hit brute_force_nearest(const MeshIndex& m, const Vec3& y) {
  MeshIndex::Hit best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m.faces().size(); ++i) {
    const Face& f = m.faces()[i];
    const Vec3 q = closest_point_on_triangle(y, m.vertices()[f[0]], m.vertices()[f[1]], m.vertices()[f[2]]);
    const double d = (q - y).norm();
    if (d < best_d) {
      best_d = d;
      best.face = static_cast<int>(i);
      best.point = q;
      best.distance = d;
    }
  }
  return best;
}

MeshIndex random_soup(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (int i = 0; i < n; ++i) {
    const Vec3 c(3 * u(rng), 3 * u(rng), 3 * u(rng));
    const int base = static_cast<int>(v.size());
    for (int k = 0; k < 3; ++k) v.push_back(c + 0.2 * Vec3(u(rng), u(rng), u(rng)));
    f.push_back({base, base + 1, base + 2});
  }
  return MeshIndex(std::move(v), std::move(f));
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

TEST_CASE("fundamental forms of closed-form surfaces") {
  SUBCASE("unit sphere, outward normal") {
    const SphereSurface s(1.0);
    const FundamentalForms f = s.forms(Vec2(0.9, 2.1));
    CHECK(f.k1 == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(f.k2 == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(f.H == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(f.K == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(f.normal.dot(s.position(Vec2(0.9, 2.1))) == doctest::Approx(1.0));
  }
  SUBCASE("unit cylinder, outward normal") {
    const CylinderSurface c(1.0);
    const FundamentalForms f = c.forms(Vec2(0.4, 0.3));
    CHECK(f.k1 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(f.k2) < 1e-14);
    CHECK(std::abs(f.K) < 1e-14);
    // principal direction of k1 is the circle direction
    CHECK(std::abs(f.dir1.z()) < 1e-12);
    CHECK(std::abs(std::abs(f.dir2.z()) - 1.0) < 1e-12);
  }
  SUBCASE("catenoid waist") {
    const CatenoidSurface cat(1.0);
    const FundamentalForms f = cat.forms(Vec2(1.3, 0.0));
    CHECK(std::abs(f.H) < 1e-14);
    CHECK(f.K == doctest::Approx(-1.0).epsilon(1e-13));
    const FundamentalForms g = cat.forms(Vec2(0.2, 0.8));
    CHECK(std::abs(g.H) < 1e-13);
    CHECK(g.K == doctest::Approx(-1.0 / std::pow(std::cosh(0.8), 4)).epsilon(1e-12));
  }
  SUBCASE("helicoid is conformal and minimal") {
    const HelicoidSurface h(1.0);
    for (double v : {-1.5, 0.0, 0.7}) {
      const Jet2 j = h.jet(Vec2(0.3, v));
      CHECK(std::abs(j.pu.norm() - j.pv.norm()) < 1e-14);
      CHECK(std::abs(j.pu.dot(j.pv)) < 1e-14);
      const FundamentalForms f = fundamental_forms(j);
      CHECK(std::abs(f.H) < 1e-13);
      CHECK(f.K == doctest::Approx(-1.0 / std::pow(std::cosh(v), 4)).epsilon(1e-12));
    }
  }
  SUBCASE("degenerate metric") {
    Jet2 j;
    j.pu = Vec3(1.0, 0.0, 0.0);
    j.pv = Vec3(2.0, 1e-9, 0.0);
    CHECK_THROWS_AS(fundamental_forms(j), DomainError);
  }
  SUBCASE("flipped normal negates curvatures") {
    const FundamentalForms f = CylinderSurface(2.0).forms(Vec2(0.0, 0.0)).flipped();
    CHECK(f.k1 == doctest::Approx(0.0));
    CHECK(f.k2 == doctest::Approx(0.5));
    CHECK(f.H == doctest::Approx(0.5));
  }
}

TEST_CASE("finite-difference jets approximate analytic ones") {
  const SphereSurface exact(1.0);
  const SampledSurface sampled("sphere-fd", exact.domain(), [&](const Vec2& uv) { return exact.position(uv); });
  CHECK(sampled.step() == doctest::Approx(std::cbrt(std::numeric_limits<double>::epsilon())));
  const FundamentalForms f = sampled.forms(Vec2(1.0, 0.5));
  CHECK(f.k1 == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(f.k2 == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("signed distance closed forms") {
  SUBCASE("plane") {
    const DistanceField field(std::make_shared<PlaneSurface>());
    const TubularQuery q = field.query(Vec3(0.0, 0.0, 0.3));
    CHECK(q.t == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(q.foot().point.norm() < 1e-15);
    CHECK(q.foot().k1 == 0.0);
    CHECK(q.side == 1);
    const TubularQuery below = field.query(Vec3(0.2, 0.0, -0.5));
    CHECK(below.t == doctest::Approx(-0.5));
    CHECK(below.foot().normal.z() == doctest::Approx(-1.0));
  }
  SUBCASE("cylinder outside") {
    const DistanceField field(std::make_shared<CylinderSurface>(1.0));
    const TubularQuery q = field.query(Vec3(1.25 * std::cos(0.7), 1.25 * std::sin(0.7), 0.4), 0.4995);
    CHECK(q.t == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(q.valid);
    CHECK(q.foot().k1 == doctest::Approx(-1.0));
    CHECK(std::abs(q.foot().k2) < 1e-14);
  }
  SUBCASE("cylinder axis is a cut-locus point") {
    const DistanceField field(std::make_shared<CylinderSurface>(1.0));
    const TubularQuery q = field.query(Vec3(0.0, 0.0, 0.2));
    CHECK(q.ambiguous());
    CHECK(q.multiplicity() == 2);
    CHECK(q.t == doctest::Approx(-1.0));
  }
  SUBCASE("orientation flips the sign only") {
    const DistanceField inward(std::make_shared<SphereSurface>(1.0), -1);
    const TubularQuery q = inward.query(Vec3(0.0, 0.5, 0.0));
    CHECK(q.t == doctest::Approx(0.5));
    CHECK(q.foot().k1 == doctest::Approx(1.0));
    CHECK(q.foot().normal.y() == doctest::Approx(-1.0));
  }
}

TEST_CASE("parallel curvatures") {
  CHECK(parallel_curvatures(0.0, 0.0, 3.7).k1 == 0.0);
  const ParallelCurvatures p = parallel_curvatures(-1.0, 0.0, 0.25);
  CHECK(p.k1 == doctest::Approx(-0.8).epsilon(1e-15));
  CHECK(p.k2 == 0.0);
  const ParallelCurvatures near = parallel_curvatures(1.0, 1.0, 1.0 - 1e-10);
  CHECK(near.near_focal);
  CHECK(near.k1 > 1e9);
  CHECK_THROWS_AS(parallel_curvatures(1.0, 1.0, 1.0), DomainError);
  try {
    parallel_curvatures(0.5, 0.0, 2.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("focal") != std::string::npos);
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double focal = 1.0 / std::max({a, b, 1e-300});
    const double t = std::abs(u(rng)) * std::min(focal, 10.0) * 0.999;
    const ParallelCurvatures q = parallel_curvatures(a, b, t);
    CHECK(q.k1 == doctest::Approx(a / (1 - t * a)));
    CHECK(q.k2 == doctest::Approx(b / (1 - t * b)));
  }
}

TEST_CASE("tubular radius") {
  CHECK(tubular_radius(1.0, 1.0) == doctest::Approx(0.4995).epsilon(1e-15));
  CHECK(tubular_radius(0.0, 0.0, 5.0) == 5.0);
  CHECK(tubular_radius(2.0, 0.5) == doctest::Approx(0.25 * 0.999));
  const CatenoidSurface cat(1.0);
  const FundamentalForms waist = cat.forms(Vec2(0.0, 0.0));
  const double c = std::max(std::abs(waist.k1), std::abs(waist.k2));
  const double lambda = std::sqrt(-waist.K);
  CHECK(tubular_radius(c, lambda) == doctest::Approx(0.4995));
  CHECK_THROWS_AS(tubular_radius(0.0, 0.0), ContractViolation);
}

TEST_CASE("offset consistency with analytically offset surfaces") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0.2, 2.9);
  for (int k = 0; k < 200; ++k) {
    const double R = 1.5;
    const double t = 0.6 * (std::uniform_real_distribution<double>(-1.0, 1.0)(rng));
    const double theta = ang(rng), phi = 2 * ang(rng), height = ang(rng) - 1.5;
    {
      const DistanceField field(std::make_shared<CylinderSurface>(R));
      const Vec3 y((R + t) * std::cos(phi), (R + t) * std::sin(phi), height);
      const TubularQuery q = field.query(y);
      const ParallelCurvatures p = parallel_curvatures(q.foot().k1, q.foot().k2, q.foot().distance);
      FundamentalForms off = CylinderSurface(R + t).forms(Vec2(phi, height));
      if (t < 0) off = off.flipped();
      CHECK(std::abs(p.k1 - off.k1) <= 1e-8);
      CHECK(std::abs(p.k2 - off.k2) <= 1e-8);
    }
    {
      const DistanceField field(std::make_shared<SphereSurface>(R));
      const Vec3 y = (R + t) * Vec3(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
      const TubularQuery q = field.query(y);
      const ParallelCurvatures p = parallel_curvatures(q.foot().k1, q.foot().k2, q.foot().distance);
      FundamentalForms off = SphereSurface(R + t).forms(Vec2(theta, phi));
      if (t < 0) off = off.flipped();
      CHECK(std::abs(p.k1 - off.k1) <= 1e-8);
      CHECK(std::abs(p.k2 - off.k2) <= 1e-8);
    }
  }
}

TEST_CASE("BVH nearest point equals exhaustive scan") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const MeshIndex soup = random_soup(rng, 2000);
  const MeshIndex cat = tessellate(CatenoidSurface(1.0), 64, 64);
  REQUIRE(cat.faces().size() <= 10000);
  for (const MeshIndex* m : {&soup, &cat}) {
    for (int k = 0; k < 1000; ++k) {
      const Vec3 y(u(rng), u(rng), u(rng));
      const MeshIndex::Hit fast = m->nearest(y);
      const MeshIndex::Hit slow = brute_force_nearest(*m, y);
      CHECK(fast.distance == slow.distance);
    }
  }
}

TEST_CASE("BVH structure invariants") {
  std::mt19937_64 rng(99);
  const MeshIndex m = random_soup(rng, 777);
  std::multiset<int> seen;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const MeshIndex::Node& node = m.nodes()[stack.back()];
    stack.pop_back();
    if (node.left < 0) {
      for (int k = node.first; k < node.first + node.count; ++k) {
        const int fi = m.face_order()[k];
        seen.insert(fi);
        for (int vi : m.faces()[fi]) CHECK(node.box.contains(m.vertices()[vi]));
      }
    } else {
      CHECK(node.box.contains(m.nodes()[node.left].box));
      CHECK(node.box.contains(m.nodes()[node.right].box));
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  CHECK(seen.size() == m.faces().size());
  for (int i = 0; i < static_cast<int>(m.faces().size()); ++i) CHECK(seen.count(i) == 1);
}

TEST_CASE("mesh text round trip") {
  const MeshIndex m = tessellate(SphereSurface(1.0), 9, 12);
  std::stringstream ss;
  m.write_obj(ss);
  const MeshIndex back = MeshIndex::read_obj(ss);
  REQUIRE(back.vertices().size() == m.vertices().size());
  REQUIRE(back.faces().size() == m.faces().size());
  for (std::size_t i = 0; i < m.vertices().size(); ++i) CHECK(back.vertices()[i] == m.vertices()[i]);
  for (std::size_t i = 0; i < m.faces().size(); ++i) CHECK(back.faces()[i] == m.faces()[i]);
  std::stringstream bad("v 1 2\n");
  CHECK_THROWS_AS(MeshIndex::read_obj(bad), std::invalid_argument);
}

TEST_CASE("pure-mesh signed distance") {
  const MeshIndex m = tessellate(CylinderSurface(1.0, 2.0), 200, 40);
  const TubularQuery q = mesh_signed_distance(m, Vec3(1.25, 0.0, 0.1));
  const double edge = m.max_edge_length();
  CHECK(std::abs(q.t - 0.25) <= edge * edge);
  CHECK(q.foot().k1 == doctest::Approx(-1.0).epsilon(1e-6));
  const TubularQuery inside = mesh_signed_distance(m, Vec3(0.5, 0.0, 0.1));
  CHECK(inside.t < 0.0);
  CHECK(inside.foot().k2 == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Newton projection: orthogonality on analytic surfaces") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto catenoid = std::make_shared<CatenoidSurface>(1.0, 2.0);
  const auto helicoid = std::make_shared<HelicoidSurface>(1.0);
  for (const SurfacePtr& s : {SurfacePtr(catenoid), SurfacePtr(helicoid)}) {
    const DistanceField field(s);
    int checked = 0;
    for (int k = 0; k < 200; ++k) {
      const ParamDomain d = s->domain();
      const Vec2 uv(0.5 * (d.u0 + d.u1) + 0.4 * (d.u1 - d.u0) * u(rng), 0.6 * d.v1 * u(rng));
      const FundamentalForms f = s->forms(uv);
      const Vec3 y = s->position(uv) + 0.3 * u(rng) * f.normal + 0.05 * Vec3(u(rng), u(rng), u(rng));
      const TubularQuery q = field.query(y);
      if (q.foot().on_boundary || q.foot().distance < 1e-6) continue;
      ++checked;
      const Vec3 n = s->forms(q.foot().uv).normal;
      const double angle = angle_between(y - q.foot().point, n);
      CHECK(std::min(angle, std::numbers::pi - angle) <= 1e-6);
      CHECK(std::abs((y - q.foot().point).norm() - std::abs(q.t)) <= 1e-9 * std::abs(q.t));
    }
    CHECK(checked > 150);
  }
}

TEST_CASE("catenoid axis point has many feet") {
  const DistanceField field(std::make_shared<CatenoidSurface>(1.0, 2.0));
  const TubularQuery q = field.query(Vec3(0.0, 0.0, 0.0));
  CHECK(q.ambiguous());
  CHECK(q.t == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("Newton refinement against a 1e5-triangle catenoid mesh") {
  const auto cat = std::make_shared<CatenoidSurface>(1.0, 1.5);
  const MeshIndex mesh = tessellate(*cat, 225, 225);
  REQUIRE(mesh.faces().size() >= 100000);
  const double edge = mesh.max_edge_length();
  const DistanceField field(cat);
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int below = 0;
  for (int k = 0; k < 60; ++k) {
    const Vec2 uv(std::numbers::pi * (1.0 + u(rng)), 1.0 * u(rng));
    const Vec3 y = cat->position(uv) + 0.3 * u(rng) * cat->forms(uv).normal;
    const double mesh_d = brute_force_nearest(mesh, y).distance;
    const double newton_d = field.query(y).foot().distance;
    CHECK(std::abs(newton_d - mesh_d) <= 2.0 * edge * edge);
    if (newton_d <= mesh_d) ++below;
  }
  MESSAGE("Newton distance <= mesh distance in " << below << " of 60 queries");
}
