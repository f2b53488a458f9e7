#include "halfspace/barrier/scenarios.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "halfspace/errors.hpp"

namespace halfspace::barrier {
namespace {

using surfgeo::Jet2;
using surfgeo::JetSurface;
using surfgeo::ParamDomain;

// The affine plane p0 + u a + v b.
surfgeo::SurfacePtr affine_plane(const std::string& name, const Vec3& p0, const Vec3& a, const Vec3& b,
                                 ParamDomain dom) {
  return std::make_shared<JetSurface>(
      name, dom,
      [=](const Vec2& uv) {
        Jet2 j;
        j.p = p0 + uv.x() * a + uv.y() * b;
        j.pu = a;
        j.pv = b;
        return j;
      },
      0.0);
}

}  // namespace

std::vector<Vec2> probe_grid(double u0, double u1, double v0, double v1, int nu, int nv) {
  if (nu < 1 || nv < 1) throw ContractViolation("probe grid needs at least one point per direction");
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(nu) * nv);
  for (int i = 0; i < nu; ++i)
    for (int k = 0; k < nv; ++k) {
      const double a = nu == 1 ? 0.5 : double(i) / (nu - 1);
      const double b = nv == 1 ? 0.5 : double(k) / (nv - 1);
      out.emplace_back(u0 + a * (u1 - u0), v0 + b * (v1 - v0));
    }
  return out;
}

Scenario helicoid_catenoid_scenario(int n, double delta) {
  Scenario s;
  s.name = "helicoid_catenoid";
  s.M = std::make_shared<surfgeo::HelicoidSurface>(1.0, ParamDomain{-0.5, 0.5, 0.5, 1.5});
  s.N = std::make_shared<surfgeo::CatenoidSurface>(1.0, 2.0);
  for (const Vec2& p : probe_grid(-0.5, 0.5, 0.02, 0.22, n, n))
    s.probes.emplace_back(p.x(), std::asinh(std::cosh(p.x()) + p.y()));
  s.options.delta = delta;
  return s;
}

Scenario parallel_planes_scenario(double t0, int n) {
  Scenario s;
  s.name = "parallel_planes";
  s.M = affine_plane("plane_offset", Vec3(0, 0, t0), Vec3::UnitX(), Vec3::UnitY(), {-1, 1, -1, 1});
  s.N = std::make_shared<surfgeo::PlaneSurface>();
  s.probes = probe_grid(-0.8, 0.8, -0.8, 0.8, n, n);
  s.options.epsilon = 0.4;
  return s;
}

Scenario tilted_plane_scenario(double slope, int n) {
  Scenario s;
  s.name = "tilted_plane";
  s.M = affine_plane("plane_tilted", Vec3(0, 0, 0.1), Vec3(1, 0, slope), Vec3::UnitY(), {-1, 1, -1, 1});
  s.N = std::make_shared<surfgeo::PlaneSurface>();
  s.probes = probe_grid(-0.8, 0.8, -0.8, 0.8, n, n);
  s.options.epsilon = 0.4;
  return s;
}

Scenario concentric_spheres_scenario(int n) {
  Scenario s;
  s.name = "concentric_spheres";
  s.M = std::make_shared<surfgeo::SphereSurface>(0.5);
  s.N = std::make_shared<surfgeo::SphereSurface>(1.0);
  s.probes = probe_grid(0.3, std::numbers::pi - 0.3, 0.0, 2.0 * std::numbers::pi * (n - 1) / n, n, n);
  s.cmc = true;
  return s;
}

Scenario disk_in_sphere_scenario(int n) {
  Scenario s;
  s.name = "disk_in_sphere";
  s.M = affine_plane("disk", Vec3(0.8, 0, 0), Vec3::UnitY(), Vec3::UnitZ(), {-0.4, 0.4, -0.4, 0.4});
  s.N = std::make_shared<surfgeo::SphereSurface>(1.0);
  s.probes = probe_grid(-0.4, 0.4, -0.4, 0.4, n, n);
  s.cmc = true;
  return s;
}

std::vector<std::string> scenario_names() {
  return {"helicoid_catenoid", "parallel_planes", "tilted_plane", "concentric_spheres", "disk_in_sphere"};
}

Scenario make_scenario(const std::string& name) {
  if (name == "helicoid_catenoid") return helicoid_catenoid_scenario();
  if (name == "parallel_planes") return parallel_planes_scenario();
  if (name == "tilted_plane") return tilted_plane_scenario();
  if (name == "concentric_spheres") return concentric_spheres_scenario();
  if (name == "disk_in_sphere") return disk_in_sphere_scenario();
  throw ContractViolation("unknown certification scenario '" + name + "'");
}

CertificationRun run_scenario(const Scenario& s) {
  const surfgeo::DistanceField field(s.N);
  return s.cmc ? certify_cmc(*s.M, field, s.probes, s.options) : certify_minimal(*s.M, field, s.probes, s.options);
}

}  // namespace halfspace::barrier
