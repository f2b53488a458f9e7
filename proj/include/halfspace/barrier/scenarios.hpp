#pragma once

#include <string>
#include <vector>

#include "halfspace/barrier/certificate.hpp"
#include "halfspace/surfgeo/surface.hpp"

namespace halfspace::barrier {

/// A certification setup: probe surface M, comparison surface N, probes.
struct Scenario {
  std::string name;
  surfgeo::SurfacePtr M;
  surfgeo::SurfacePtr N;
  std::vector<Vec2> probes;
  CertifyOptions options;
  bool cmc = false;
};

/// Uniform nu x nv probe grid on [u0,u1] x [v0,v1] (endpoints included).
std::vector<Vec2> probe_grid(double u0, double u1, double v0, double v1, int nu, int nv);

/// Helicoid patch outside the unit catenoid: u in [-0.5, 0.5] and
/// sinh v = cosh u + dr with dr in [0.02, 0.22]; n x n probes.
Scenario helicoid_catenoid_scenario(int n = 25, double delta = 1e-4);
/// Plane z = t0 over the plane z = 0 (eps = 0.4).
Scenario parallel_planes_scenario(double t0 = 0.1, int n = 11);
/// Plane z = 0.1 + slope x over the plane z = 0 (eps = 0.4).
Scenario tilted_plane_scenario(double slope = 0.05, int n = 11);
/// Sphere of radius 0.5 inside the unit sphere (CMC, outside the tube).
Scenario concentric_spheres_scenario(int n = 10);
/// Flat disk x = 0.8, |y|,|z| <= 0.4, inside the unit sphere (CMC).
Scenario disk_in_sphere_scenario(int n = 11);

/// Names accepted by make_scenario.
std::vector<std::string> scenario_names();
/// ContractViolation for an unknown name.
Scenario make_scenario(const std::string& name);

/// Runs certify_minimal or certify_cmc as the scenario asks.
CertificationRun run_scenario(const Scenario& s);

}  // namespace halfspace::barrier
