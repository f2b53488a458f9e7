#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "halfspace/barrier/certificate.hpp"
#include "halfspace/barrier/profile.hpp"
#include "halfspace/barrier/scenarios.hpp"
#include "halfspace/errors.hpp"

using namespace halfspace;
using namespace halfspace::barrier;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Random admissible (eps, c, t): 2 eps c <= 1, 0 < 2t <= eps.
struct Tuple {
  double eps, c, t;
};
Tuple random_tuple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double c = 0.05 + 5.0 * U(rng);
  const double eps = (0.01 + 0.99 * U(rng)) / (2.0 * c);
  const double t = std::max(1e-9, U(rng)) * eps / 2.0;
  return {eps, c, t};
}

Eigen::Matrix<double, 3, 2> random_plane(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::Matrix<double, 3, 2> A;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) A(i, k) = N(rng);
  Eigen::HouseholderQR<Eigen::Matrix<double, 3, 2>> qr(A);
  return qr.householderQ() * Eigen::Matrix<double, 3, 2>::Identity();
}

}  // namespace

TEST_CASE("profile: g(eps/4) = 0, decreasing, g'' = g'^2") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const Tuple s = random_tuple(rng);
    const BarrierProfile p(s.eps, s.c);
    CHECK(std::abs(p.g(s.eps / 4.0)) <= 1e-15);
    CHECK(p.dg(s.t) < 0.0);
    CHECK(p.g(s.t) > p.g(s.t * 1.01));
    CHECK(rel(p.d2g(s.t), p.dg(s.t) * p.dg(s.t)) <= 1e-12);
    // g' against a central difference of g
    const double h = 1e-6 * s.eps;
    CHECK(std::abs((p.g(s.t + h) - p.g(s.t - h)) / (2 * h) - p.dg(s.t)) <= 1e-6 * std::abs(p.dg(s.t)));
  }
  CHECK_THROWS_AS(BarrierProfile(1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(BarrierProfile(0.5, 0.0), ContractViolation);
  CHECK_NOTHROW(BarrierProfile(0.4, 1.0 / 0.8));
}

TEST_CASE("Hessian eigenvalues: closed forms") {
  const BarrierProfile p(0.4, 1.0);
  const HessianEigenvalues flat = hessian_eigenvalues(p, 0.1, 0.0, 0.0);
  CHECK(flat.mu1 == 0.0);
  CHECK(flat.mu2 == 0.0);
  CHECK(flat.mu3 == doctest::Approx(4.0 / 1.44).epsilon(1e-15));

  // offset cylinder: 2/1.2 * (-1/1.1), 0, 4/1.44
  const HessianEigenvalues cyl = hessian_eigenvalues(p, 0.1, -1.0, 0.0);
  CHECK(std::abs(cyl.mu1 - (-2.0 / 1.2 / 1.1)) <= 1e-12);
  CHECK(std::abs(cyl.mu1 - (-1.5151515151515151)) <= 1e-12);
  CHECK(cyl.mu2 == 0.0);
  CHECK(std::abs(cyl.mu3 - 2.7777777777777777) <= 1e-12);

  // minimal foot k1 = -k, k2 = k: mu1 + mu2 = w 2 t k^2 / (1 - t^2 k^2)
  const BarrierProfile q(1.0, 0.5);
  const HessianEigenvalues m = hessian_eigenvalues(q, 0.2, -0.5, 0.5);
  const double w = 2 * 0.5 / (1 + 2 * 0.5 * 0.2);
  CHECK(rel(m.mu1 + m.mu2, w * 2 * 0.2 * 0.25 / (1 - 0.04 * 0.25)) <= 1e-14);
  CHECK(rel(m.mu1 + m.mu2, (1.0 / 1.2) * (0.1 / 0.99)) <= 1e-14);

  CHECK_THROWS_AS(hessian_eigenvalues(p, 0.0, 0.0, 0.0), ContractViolation);
  CHECK_THROWS_AS(hessian_eigenvalues(p, 0.3, 0.0, 0.0), ContractViolation);
  CHECK_THROWS_AS(hessian_eigenvalues(p, 0.1, 1.0, 0.0), ContractViolation);
}

TEST_CASE("Hessian eigenvalues: identities, ordering and inequality over random tuples") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 100000; ++k) {
    const Tuple s = random_tuple(rng);
    const BarrierProfile p(s.eps, s.c);
    double k1 = s.c * U(rng);
    double k2 = s.c * U(rng);
    if (k1 > k2) std::swap(k1, k2);
    const HessianEigenvalues mu = hessian_eigenvalues(p, s.t, k1, k2);
    const double w = 2 * s.c / (1 + 2 * s.c * s.t);
    bool ok = rel(mu.mu3, p.d2g(s.t)) <= 1e-12;
    ok = ok && std::abs(mu.mu1 - (-p.dg(s.t) * mu.kt1)) <= 1e-12 * std::abs(mu.mu1);
    ok = ok && std::abs(mu.mu2 - (-p.dg(s.t) * mu.kt2)) <= 1e-12 * std::abs(mu.mu2);
    ok = ok && mu.mu1 <= mu.mu2 && mu.mu2 < mu.mu3;
    ok = ok && mu.mu1 >= w * k1 && mu.mu2 >= w * k2;
    if (!ok) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("subspace trace") {
  std::mt19937_64 rng(13);
  const Eigen::Matrix<double, 3, 2> W = random_plane(rng);
  CHECK(subspace_trace(Eigen::Matrix3d::Identity(), W) == doctest::Approx(2.0).epsilon(1e-14));
  const Eigen::Matrix3d D = Eigen::Vector3d(-1.5, 0.2, 2.7).asDiagonal();
  Eigen::Matrix<double, 3, 2> E = Eigen::Matrix<double, 3, 2>::Zero();
  E(0, 0) = E(1, 1) = 1.0;
  CHECK(subspace_trace(D, E) == doctest::Approx(-1.3));

  std::normal_distribution<double> N(0.0, 1.0);
  int violations = 0;
  for (int k = 0; k < 10000; ++k) {
    Eigen::Matrix3d A;
    for (int i = 0; i < 9; ++i) A(i) = N(rng);
    const Eigen::Matrix3d Q = A + A.transpose();
    const Eigen::Vector3d mu = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(Q).eigenvalues();
    const double tr = subspace_trace(Q, random_plane(rng));
    const double slack = 1e-12 * (1.0 + mu.cwiseAbs().maxCoeff());
    if (tr < mu(0) + mu(1) - slack || tr > mu(1) + mu(2) + slack) ++violations;
  }
  CHECK(violations == 0);
  E(0, 1) = 0.1;
  CHECK_THROWS_AS(subspace_trace(D, E), ContractViolation);
}

TEST_CASE("slice estimate") {
  const BarrierProfile p(0.4, 1.0);
  const double t = 0.1;
  const double delta = 1e-3;
  SliceEstimateInput in;
  in.n = 2;
  in.dg = p.dg(t);
  in.d2g = p.d2g(t);
  in.c = 1.0;
  in.mu_relax = delta / 2.0;
  in.theta = {0.0, 1.0};
  in.kt = {-0.2, 0.5};
  SliceEstimate s = slice_estimate(in);
  // theta_1 = 0: the tangential weights are all 1 and the sin^2 terms vanish
  CHECK(s.lower_bound == doctest::Approx(in.mu_relax * in.dg));
  CHECK(s.direct_value == doctest::Approx(in.dg * (0.2 - 0.5)));
  CHECK(s.direct_value >= s.lower_bound);
  CHECK(s.lower_bound > -delta);
  CHECK(s.frame_row.norm() == doctest::Approx(1.0));

  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int n : {2, 3, 4}) {
    int violations = 0;
    int trials = 0;
    while (trials < 10000) {
      const Tuple tp = random_tuple(rng);
      const BarrierProfile q(tp.eps, tp.c);
      SliceEstimateInput r;
      r.n = n;
      r.c = tp.c;
      r.dg = q.dg(tp.t);
      r.d2g = q.d2g(tp.t);
      r.mu_relax = 1e-3 * U(rng) / (2.0 * tp.c);
      double sum = 0.0;
      r.kt.clear();
      for (int i = 0; i < n; ++i) {
        r.kt.push_back(tp.c * (2.0 * U(rng) - 1.0));
        sum += r.kt.back();
      }
      if (sum < -r.mu_relax) continue;  // outside the mean-curvature hypothesis
      r.theta = {2.0 * std::numbers::pi * U(rng)};
      for (int i = 1; i < n; ++i) r.theta.push_back(std::numbers::pi * U(rng));
      const SliceEstimate e = slice_estimate(r);
      if (std::abs(e.frame_row.norm() - 1.0) > 1e-12) ++violations;
      if (e.direct_value < e.lower_bound - 1e-12 * (1.0 + std::abs(e.lower_bound))) ++violations;
      ++trials;
    }
    CHECK(violations == 0);
  }

  in.kt = {-1.5, 0.5};
  CHECK_THROWS_AS(slice_estimate(in), ContractViolation);
  in.kt = {-0.9, -0.9};
  CHECK_THROWS_AS(slice_estimate(in), ContractViolation);
  in.n = 5;
  CHECK_THROWS_AS(slice_estimate(in), ContractViolation);
}

TEST_CASE("threshold lambda") {
  CHECK(std::abs(lambda_threshold(0.1, 1.0) - 1.0 / 76.0) <= 4 * std::numeric_limits<double>::epsilon() / 76.0);
  CHECK(lambda_threshold(0.2, 2.0) == doctest::Approx(0.2 * 4.0 / (4.0 * 1.6)));
  CHECK_THROWS_AS(lambda_threshold(0.5, 1.0), ContractViolation);
  CHECK_THROWS_AS(lambda_threshold(-0.1, 1.0), ContractViolation);
}

TEST_CASE("certify: helicoid outside the catenoid") {
  const Scenario s = helicoid_catenoid_scenario(9);
  const CertificationRun run = run_scenario(s);
  const CertificateSummary sum = summarize(run);
  CHECK(run.epsilon == doctest::Approx(0.4995));
  CHECK(sum.passed == 81);
  CHECK(sum.max_agreement <= 2e-4);
  for (const BarrierCertificate& c : run.certificates) {
    CHECK(c.mu.mu1 <= c.mu.mu2);
    CHECK(c.mu.mu2 < c.mu.mu3);
    CHECK(c.trace_w >= c.trace_lb - 1e-12);
  }
}

TEST_CASE("certify: parallel and tilted planes") {
  const CertificationRun par = run_scenario(parallel_planes_scenario(0.1));
  for (const BarrierCertificate& c : par.certificates) {
    CHECK(c.verdict == Verdict::Pass);
    CHECK(std::abs(c.laplacian) <= 1e-12);
    CHECK(c.t == doctest::Approx(0.1));
  }

  // u = g(0.1 + s x) restricted to M: Laplacian = g''(t) s^2 / (1 + s^2)
  const double slope = 0.05;
  const Scenario s = tilted_plane_scenario(slope);
  const CertificationRun run = run_scenario(s);
  const BarrierProfile p(0.4, 1.25);
  for (const BarrierCertificate& c : run.certificates) {
    CHECK(c.verdict == Verdict::Pass);
    CHECK(c.laplacian_margin > 0.0);
    const double t = c.point.z();
    CHECK(c.t == doctest::Approx(t).epsilon(1e-12));
    CHECK(c.laplacian == doctest::Approx(p.d2g(t) * slope * slope / (1 + slope * slope)).epsilon(1e-6));
  }
}

TEST_CASE("certify_cmc: concentric spheres report the violated hypothesis") {
  const CertificationRun run = run_scenario(concentric_spheres_scenario());
  CHECK(run.hypothesis_violated);
  CHECK(run.inf_H_N == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(run.sup_abs_H_M == doctest::Approx(4.0).epsilon(1e-12));
  for (const BarrierCertificate& c : run.certificates) {
    CHECK(c.verdict == Verdict::Skipped);  // 2t = 1 is outside the tube
    CHECK(std::abs(c.rhs - (-2.0)) <= 1e-10);
  }
}

TEST_CASE("certify_cmc: flat disk inside the unit sphere") {
  const CertificationRun run = run_scenario(disk_in_sphere_scenario());
  CHECK_FALSE(run.hypothesis_violated);
  CHECK(run.lambda == doctest::Approx(2.0));
  for (const BarrierCertificate& c : run.certificates) {
    CHECK(c.verdict == Verdict::Pass);
    const double w = 2.0 / (1.0 + 2.0 * c.t);
    CHECK(c.laplacian >= w * 2.0 - 1e-4);
    CHECK(c.lambda_margin >= -1e-4);
  }
}

TEST_CASE("certify_cmc refuses a badly oriented N") {
  // M outside the unit sphere: the mean curvature vector of N points inward.
  Scenario s = disk_in_sphere_scenario(5);
  s.M = std::make_shared<surfgeo::JetSurface>("disk_out", surfgeo::ParamDomain{-0.2, 0.2, -0.2, 0.2},
                                              [](const Vec2& uv) {
                                                surfgeo::Jet2 j;
                                                j.p = Vec3(1.1, uv.x(), uv.y());
                                                j.pu = Vec3::UnitY();
                                                j.pv = Vec3::UnitZ();
                                                return j;
                                              });
  CHECK_THROWS_AS(run_scenario(s), RefusedError);
}

TEST_CASE("certify_minimal rejects a non-minimal M and skips probes outside the tube") {
  Scenario s = disk_in_sphere_scenario(3);
  s.M = std::make_shared<surfgeo::SphereSurface>(0.9);
  s.probes = {Vec2(1.0, 0.5)};
  s.cmc = false;
  CHECK_THROWS_AS(run_scenario(s), ContractViolation);

  Scenario far = parallel_planes_scenario(0.3);
  const CertificationRun run = run_scenario(far);
  CHECK(summarize(run).skipped == run.certificates.size());
  CHECK_FALSE(summarize(run).all_pass());
}

TEST_CASE("certificates are independent of the thread count and serialize") {
  Scenario s = helicoid_catenoid_scenario(6);
  s.options.threads = 1;
  std::ostringstream a;
  write_certificates_csv(a, run_scenario(s));
  s.options.threads = 3;
  std::ostringstream b;
  const CertificationRun run = run_scenario(s);
  write_certificates_csv(b, run);
  CHECK(a.str() == b.str());

  std::ostringstream text;
  write_certificates_text(text, run);
  const std::string out = text.str();
  CHECK(out.rfind("run kind=minimal", 0) == 0);
  CHECK(out.find("summary probes=36 passed=36 failed=0 skipped=0") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : a.str()) lines += ch == '\n';
  CHECK(lines == 37);
}

TEST_CASE("boundary distance report") {
  const BarrierProfile p(0.4, 1.25);
  const surfgeo::DistanceField plane(std::make_shared<surfgeo::PlaneSurface>());
  auto patch = [](std::function<double(double, double)> h) {
    return surfgeo::JetSurface("patch", {-1, 1, -1, 1}, [h](const Vec2& uv) {
      surfgeo::Jet2 j;
      j.p = Vec3(uv.x(), uv.y(), h(uv.x(), uv.y()));
      return j;
    });
  };

  const BoundaryReport flat = boundary_distance_report(patch([](double, double) { return 0.1; }), plane, p, 21, 21);
  CHECK(flat.dist_M_N == doctest::Approx(0.1));
  CHECK(flat.dist_boundary_N == doctest::Approx(0.1));
  CHECK(flat.sup_interior_u == doctest::Approx(flat.sup_boundary_u));
  CHECK_FALSE(flat.interior_exceeds);

  // tilted: nearest to N along the edge u = -1
  const BoundaryReport tilt =
      boundary_distance_report(patch([](double u, double) { return 0.15 + 0.1 * u; }), plane, p, 21, 21);
  CHECK(tilt.dist_M_N == doctest::Approx(0.05));
  CHECK(tilt.dist_boundary_N == doctest::Approx(0.05));
  CHECK(tilt.sup_interior_u < tilt.sup_boundary_u);
  CHECK_FALSE(tilt.interior_exceeds);

  // paraboloid dipping toward N in the middle
  const BoundaryReport dip =
      boundary_distance_report(patch([](double u, double v) { return 0.05 + 0.15 * (u * u + v * v); }), plane, p,
                               21, 21);
  CHECK(dip.dist_M_N == doctest::Approx(0.05));
  CHECK(dip.dist_boundary_N > 0.15);
  CHECK(dip.interior_exceeds);

  std::ostringstream out;
  write_boundary_report(out, dip);
  CHECK(out.str().find("interior_exceeds=1") != std::string::npos);
}
