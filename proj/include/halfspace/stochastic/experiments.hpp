#pragma once

#include <memory>
#include <vector>

#include "halfspace/stochastic/brownian.hpp"

namespace halfspace::stochastic {

/// lambda^2 = (|f| (1 + |g|^2) / 2)^2 for the erf example data.
Lambda2 erf_example_lambda2(double r1, double r2);

/// lambda^2 = e^{-2|z|^2}: a time change with finite total mass.
Lambda2 gaussian_lambda2();

/// Planar BM, n paths to horizon T, no extras: E|B_T|^2 and the mean.
EnsembleConfig variance_config(std::uint64_t seed = 42, std::size_t n = 10000, double T = 4.0);

/// Unit disk, T = 100, n = 2000, seed 42: fraction revisiting after T/2.
EnsembleConfig revisit_config(std::uint64_t seed = 42, std::size_t n = 2000, double T = 100.0, int dim = 2);

/// Erf example (r1 = 1, r2 = 5) time change with the bound lambda^2 >= 1/pi.
EnsembleConfig time_change_config(std::uint64_t seed = 42, std::size_t n = 1000, double T = 1.0);

/// Plane z = offset over the parameter plane against N = {z = 0}.
struct PlanePair {
  std::shared_ptr<surfgeo::DistanceField> N;
  Immersion immersion;
};
/// M = {z = 1} parallel to N: never within eps < 1.
PlanePair parallel_plane_pair();
/// M = {y = 0.5} with (x, y) -> (x, 0.5, y - 2): meets N = {z = 0} where y = 2.
PlanePair crossing_plane_pair();

}  // namespace halfspace::stochastic
