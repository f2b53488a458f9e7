#include "halfspace/stochastic/experiments.hpp"

#include <cmath>
#include <numbers>

#include "halfspace/weierstrass/immersion.hpp"

namespace halfspace::stochastic {

Lambda2 erf_example_lambda2(double r1, double r2) {
  auto data = std::make_shared<weierstrass::WeierstrassData>(weierstrass::erf_example_data(r1, r2));
  return [data](const Vec2& p) {
    const double l = data->lambda(weierstrass::cplx(p.x(), p.y()));
    return l * l;
  };
}

Lambda2 gaussian_lambda2() {
  return [](const Vec2& p) { return std::exp(-2.0 * p.squaredNorm()); };
}

EnsembleConfig variance_config(std::uint64_t seed, std::size_t n, double T) {
  EnsembleConfig c;
  c.rng.seed = seed;
  c.n_paths = n;
  c.T = T;
  return c;
}

EnsembleConfig revisit_config(std::uint64_t seed, std::size_t n, double T, int dim) {
  EnsembleConfig c = variance_config(seed, n, T);
  c.dim = dim;
  c.disk_radius = 1.0;
  return c;
}

EnsembleConfig time_change_config(std::uint64_t seed, std::size_t n, double T) {
  EnsembleConfig c = variance_config(seed, n, T);
  c.lambda2 = erf_example_lambda2(1.0, 5.0);
  c.inf_lambda2 = 1.0 / std::numbers::pi;
  return c;
}

PlanePair parallel_plane_pair() {
  return {std::make_shared<surfgeo::DistanceField>(std::make_shared<surfgeo::PlaneSurface>(1e6)),
          [](const Vec2& p) { return Vec3(p.x(), p.y(), 1.0); }};
}

PlanePair crossing_plane_pair() {
  return {std::make_shared<surfgeo::DistanceField>(std::make_shared<surfgeo::PlaneSurface>(1e6)),
          [](const Vec2& p) { return Vec3(p.x(), 0.5, p.y() - 2.0); }};
}

}  // namespace halfspace::stochastic
