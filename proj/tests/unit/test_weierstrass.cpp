#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "halfspace/cnum/quadrature.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/surfgeo/mesh.hpp"
#include "halfspace/weierstrass/export.hpp"
#include "halfspace/weierstrass/immersion.hpp"
#include "halfspace/weierstrass/probe.hpp"

using namespace halfspace;
using namespace halfspace::weierstrass;

namespace {

constexpr double kPi = std::numbers::pi;

// int_0^z e^{a t^2} dt by its Maclaurin series.
cplx gaussian_integral_series(double a, cplx z, int terms = 80) {
  cplx sum = 0.0;
  cplx zpow = z;
  double coef = 1.0;  // a^n / n!
  for (int n = 0; n < terms; ++n) {
    if (n > 0) coef *= a / n;
    sum += coef * zpow / double(2 * n + 1);
    zpow *= z * z;
  }
  return sum;
}

cplx random_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    const cplx z(u(rng), u(rng));
    if (std::abs(z) <= radius) return z;
  }
}

}  // namespace

TEST_CASE("immerse: base point and series oracle") {
  const WeierstrassData data = erf_example_data(1.0, 5.0);
  CHECK(immerse(data, 0.0).norm() == 0.0);
  const Vec3 x = immerse(data, 0.4, 1e-13);
  const double oracle = 2.0 / std::sqrt(kPi) * gaussian_integral_series(-4.0, 0.4).real();
  CHECK(std::abs(x.z() - oracle) <= 1e-9);
}

TEST_CASE("immerse: x2 vanishes on the real axis") {
  const WeierstrassData data = erf_example_data(1.0, 5.0);
  for (double x = -1.5; x <= 1.5; x += 0.25) CHECK(immerse(data, x).y() == 0.0);
}

TEST_CASE("closed form agrees with quadrature") {
  CHECK(closed_form_chi(1.0, 5.0, 0.0).norm() == 0.0);
  CHECK((closed_form_chi(1.0, 5.0, 0.4) - immerse(erf_example_data(1.0, 5.0), 0.4, 1e-13)).norm() <= 1e-8);
  std::mt19937_64 rng(4);
  for (auto [r1, r2] : {std::pair{1.0, 5.0}, std::pair{1.5, 1.0}, std::pair{0.3, 0.4}}) {
    const WeierstrassData data = erf_example_data(r1, r2);
    for (int k = 0; k < 50; ++k) {
      const cplx z = random_disk(rng, 1.5);
      const Vec3 a = closed_form_chi(r1, r2, z);
      // tol is absolute; scale it to the integral's magnitude.
      const Vec3 b = immerse(data, z, 1e-11 * (1.0 + a.norm()));
      CHECK((a - b).norm() <= 1e-8 * (1.0 + b.norm()));
    }
  }
  CHECK_THROWS_AS(closed_form_chi(1.0, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(closed_form_chi(3.0, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(closed_form_chi(-1.0, 1.0, 0.3), DomainError);
  CHECK_THROWS_AS(closed_form_chi(1.0, 5.0, cplx(0.0, 40.0)), DomainError);
}

TEST_CASE("holomorphic immersion is path independent") {
  const WeierstrassData data = erf_example_data(1.0, 5.0);
  const auto phi = data.phi();
  const cplx target(0.7, 0.6);
  for (int k = 0; k < 3; ++k) {
    const cplx a = cnum::integrate_polyline(phi[k], {0.0, 0.7, target}, 1e-13).value;
    const cplx b = cnum::integrate_polyline(phi[k], {0.0, cplx(0.0, 0.6), target}, 1e-13).value;
    CHECK(std::abs(a - b) <= 1e-10);
  }
}

TEST_CASE("diagonal limit points") {
  const Vec3 q1 = erf_example_limit_point(1.0, 5.0, 1);
  CHECK(q1.x() == doctest::Approx(-1.0 / 6.0));
  CHECK(q1.y() == doctest::Approx(-0.5));
  CHECK(q1.z() == doctest::Approx(0.5));
  for (int k : {1, 3, 5, 7}) {
    const Vec3 q = erf_example_limit_point(1.0, 5.0, k);
    const cplx dir = std::polar(1.0, k * kPi / 4.0);
    // erf tails on the diagonals decay like 1/t (unit-modulus phase); the
    // three tail terms bound the error by (1/2 + 1/18 + 1/4) / (sqrt(pi) t).
    const double envelope = (0.5 + 1.0 / 18.0 + 0.25) / std::sqrt(kPi);
    for (double t : {40.0, 400.0, 4000.0}) CHECK((closed_form_chi(1.0, 5.0, t * dir) - q).norm() <= envelope / t);
    CHECK((closed_form_chi(1.0, 5.0, 1e7 * dir) - q).norm() <= 1e-6);
  }
  CHECK_THROWS_AS(erf_example_limit_point(1.0, 5.0, 2), ContractViolation);
}

TEST_CASE("limit probe verdicts") {
  auto chi = [](cplx z) { return closed_form_chi(1.0, 5.0, z); };
  const std::vector<double> T = geometric_radii();
  for (int k : {1, 3, 5, 7}) {
    const LimitProbe p = limit_probe(chi, k * kPi / 4.0, T);
    CHECK(p.converged);
    CHECK((p.limit - erf_example_limit_point(1.0, 5.0, k)).norm() <= 1e-6);
    CHECK(p.rate == doctest::Approx(1.0).epsilon(0.5));
  }
  const LimitProbe real_ray = limit_probe(chi, 0.0, T);
  CHECK_FALSE(real_ray.converged);
  CHECK(real_ray.truncated);
  const LimitProbe vertical = limit_probe(chi, kPi / 2.0, T);
  CHECK_FALSE(vertical.converged);
  CHECK_THROWS_AS(limit_probe(chi, 0.0, {1.0, 1.0}), ContractViolation);
}

TEST_CASE("limit probe: x1 grows like erfi on the real ray") {
  // The series oracle for erfi(t)/2 dominates x1 before overflow.
  for (double t : {2.0, 3.0}) {
    const double x1 = closed_form_chi(1.0, 5.0, t).x();
    const double erfi_part = 2.0 / std::sqrt(kPi) * gaussian_integral_series(1.0, t, 120).real() / 2.0;
    CHECK(std::abs(x1 - (erfi_part - std::erf(3.0 * t) / 6.0)) <= 1e-10 * erfi_part);
  }
}

TEST_CASE("Gauss curvature: standard formula and closed form") {
  const WeierstrassData data = erf_example_data(1.0, 5.0);
  CHECK(gauss_curvature(data, 0.0) == 0.0);
  CHECK(erf_example_curvature(1.0, 5.0, 0.0) == 0.0);
  CHECK(gauss_curvature(data, 0.3) == doctest::Approx(erf_example_curvature(1.0, 5.0, 0.3)).epsilon(1e-10));

  const ErfExampleSurface surf(1.0, 5.0);
  for (double t : {1.0, 2.0, 4.0}) {
    const cplx z = std::polar(t, kPi / 4.0);
    const double expected = -25.0 * kPi * t * t;
    CHECK(gauss_curvature(data, z) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(erf_example_curvature(1.0, 5.0, z) == doctest::Approx(expected).epsilon(1e-8));
    // brute force: principal curvatures of the immersion itself
    CHECK(surf.surface_jet(z).K == doctest::Approx(expected).epsilon(1e-8));
  }

  std::mt19937_64 rng(77);
  for (int k = 0; k < 2000; ++k) {
    const cplx z = random_disk(rng, 2.0);
    const double a = gauss_curvature(data, z);
    CHECK(a <= 0.0);
    CHECK(std::abs(a - erf_example_curvature(1.0, 5.0, z)) <= 1e-9 * std::abs(a) + 1e-300);
  }

  WeierstrassData branch;
  branch.f = Expr::variable();
  branch.g = Expr(1.0);
  CHECK_THROWS_AS(gauss_curvature(branch, 0.0), DomainError);
}

TEST_CASE("Weierstrass jets: conformality, metric, minimality") {
  std::mt19937_64 rng(31);
  const ErfExampleSurface closed(1.0, 5.0);
  WeierstrassData generic;
  generic.f = exp(Expr::variable());
  generic.g = Expr::variable() * Expr(0.5);
  const WeierstrassSurface quad(generic);
  for (int k = 0; k < 300; ++k) {
    const cplx z = random_disk(rng, 1.8);
    for (const ConformalImmersion* s : {static_cast<const ConformalImmersion*>(&closed),
                                        static_cast<const ConformalImmersion*>(&quad)}) {
      const SurfaceJet j = s->surface_jet(z);
      const double lam2 = j.lambda * j.lambda;
      CHECK(std::abs(j.xu.norm() - j.xv.norm()) + std::abs(j.xu.dot(j.xv)) <= 1e-7 * lam2);
      CHECK(std::abs(j.normal.norm() - 1.0) <= 1e-12);
      CHECK(std::abs(j.H) <= 1e-6 * (1.0 + std::abs(j.K)));
    }
    CHECK(closed.lambda(z) == doctest::Approx(closed.data().lambda(z)).epsilon(1e-9));
    CHECK(std::sqrt(closed.surface_jet(z).xu.squaredNorm()) ==
          doctest::Approx(closed.data().lambda(z)).epsilon(1e-9));
    CHECK(quad.surface_jet(z).K == doctest::Approx(gauss_curvature(generic, z)).epsilon(1e-7));
  }
}

TEST_CASE("metric lower bound for the erf example") {
  const WeierstrassData data = erf_example_data(1.0, 5.0);
  std::mt19937_64 rng(2718);
  int violations = 0;
  for (int k = 0; k < 10000; ++k)
    if (!(data.lambda(random_disk(rng, 3.0)) * std::sqrt(kPi) >= 1.0)) ++violations;
  CHECK(violations == 0);
}

TEST_CASE("sector bound off the diagonals") {
  const double eps = 0.2;
  const SectorConstants sc = sector_constants(1.0, 5.0, eps);
  CHECK(sc.A == doctest::Approx(16.0 * kPi * 25.0));
  CHECK(sc.B == doctest::Approx(6.0 * std::sin(0.4)));
  int sampled = 0;
  for (int i = 1; i <= 60; ++i) {
    const double t = 0.05 * i;
    for (int j = 0; j < 720; ++j) {
      const double theta = 2.0 * kPi * j / 720.0;
      if (in_diagonal_sector(theta, eps)) continue;
      ++sampled;
      const double K = erf_example_curvature(1.0, 5.0, std::polar(t, theta));
      CHECK(K > -sc.A * t * t * std::exp(-sc.B * t * t));
    }
  }
  CHECK(sampled > 20000);
  CHECK(in_diagonal_sector(kPi / 4 + 0.1, 0.2));
  CHECK_FALSE(in_diagonal_sector(0.0, 0.2));
  CHECK(in_diagonal_sector(-kPi / 4, 0.2));
}

TEST_CASE("Enneper-type surface") {
  const EnneperParams p = EnneperParams::standard();
  CHECK(p.admissible());
  CHECK_FALSE((EnneperParams{1.0, 2.0, -1.0}).admissible());
  CHECK_THROWS_AS((EnneperParams{1.0, 1.0, 1.0}).validate(), ContractViolation);
  CHECK_THROWS_AS((EnneperParams{1.0, 2.0, 0.0}).validate(), ContractViolation);
  CHECK_THROWS_AS(EnneperSurface(EnneperParams{1.0, 1.0, 1.0}), ContractViolation);

  const EnneperSurface s(p);
  std::mt19937_64 rng(5150);
  for (int k = 0; k < 100; ++k) {
    const cplx z = random_disk(rng, 2.0);
    CHECK(s.minimality_residual(z) <= 1e-10);
    const SurfaceJet j = s.surface_jet(z);
    CHECK(std::abs(j.H) <= 1e-5);
    CHECK(std::abs(j.xu.norm() - j.xv.norm()) + std::abs(j.xu.dot(j.xv)) <= 1e-7 * j.lambda * j.lambda);
  }

  CHECK(s.lambda(cplx(-30.0, 0.0)) <= 1e-6);
  CHECK(s.lambda(cplx(-30.0, 1.3)) <= 1e-6);
  double previous = 0.0;
  for (double u : {-7.0, -8.0, -9.0, -10.0}) {
    const double K = s.surface_jet(cplx(u, 0.0)).K;
    CHECK(K < 0.0);
    CHECK(std::abs(K) > previous);
    previous = std::abs(K);
  }
}

TEST_CASE("jet table and mesh export") {
  const ErfExampleSurface s(1.0, 5.0);
  GridSpec grid;
  grid.nu = grid.nv = 11;
  std::ostringstream csv;
  const ExportStats st = write_jet_csv(csv, s, grid);
  CHECK(st.points == 121);
  CHECK(st.failures == 0);
  const std::string text = csv.str();
  CHECK(text.rfind("u,v,x,y,z,lambda,K,H,residual\n", 0) == 0);
  CHECK(text.find("nan") == std::string::npos);

  std::ostringstream plane_csv;
  const ExportStats ps = write_jet_csv(plane_csv, surfgeo::PlaneSurface(), grid);
  CHECK(ps.max_abs_H == 0.0);
  CHECK(ps.max_residual == 0.0);

  std::ostringstream obj;
  write_mesh_obj(obj, s, grid);
  std::istringstream in(obj.str());
  const surfgeo::MeshIndex mesh = surfgeo::MeshIndex::read_obj(in);
  CHECK(mesh.vertices().size() == 121);
  CHECK(mesh.faces().size() == 200);

  std::ostringstream curve;
  write_curve_csv(curve, s, [](double x) { return cplx(x, x); }, {0.0, 0.5, 1.0});
  CHECK(curve.str().rfind("s,x,y,z\n0,0,0,0\n", 0) == 0);
}
