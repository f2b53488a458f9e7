#include "halfspace/barrier/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "halfspace/errors.hpp"
#include "halfspace/format.hpp"
#include "halfspace/parallel.hpp"
#include "halfspace/surfgeo/fundamental_forms.hpp"

namespace halfspace::barrier {
namespace {

using surfgeo::DistanceField;
using surfgeo::FootPoint;
using surfgeo::ParametricSurface;

struct Resolved {
  double epsilon;
  double c;
};

Resolved resolve(const DistanceField& N, const CertifyOptions& o) {
  if (!(o.delta > 0.0)) throw ContractViolation("delta must be positive");
  if (!(o.fd_step > 0.0)) throw ContractViolation("finite-difference step must be positive");
  const std::optional<double> bound = N.surface().curvature_bound();
  double c = 0.0;
  if (o.c) {
    c = *o.c;
    if (bound && c < *bound * (1.0 - 1e-12)) throw ContractViolation("c is below the curvature bound of N");
  } else if (bound && *bound > 0.0) {
    c = *bound;
  } else if (bound) {
    // Flat N: any c works as an upper bound; take the largest the tube allows.
    if (!o.epsilon) throw ContractViolation("flat N needs an explicit tube radius epsilon");
    c = 1.0 / (2.0 * *o.epsilon);
  } else {
    throw ContractViolation("N has no curvature bound; supply c");
  }
  const double eps = o.epsilon ? *o.epsilon : surfgeo::tubular_radius(c, c);
  return {eps, c};
}

Eigen::Matrix<double, 3, 2> tangent_basis(const surfgeo::Jet2& j) {
  Eigen::Matrix<double, 3, 2> W;
  const Vec3 e1 = j.pu.normalized();
  const Vec3 e2 = (j.pv - j.pv.dot(e1) * e1).normalized();
  W.col(0) = e1;
  W.col(1) = e2;
  return W;
}

// Distance from y to the sheet of N through `foot`.
double branch_distance(const DistanceField& N, const Vec3& y, const FootPoint& foot) {
  if (auto exact = N.surface().exact_feet(y)) {
    double best = std::numeric_limits<double>::infinity();
    Vec3 point = exact->front().point;
    for (const surfgeo::SurfacePoint& sp : *exact) {
      const double d = (sp.point - foot.point).norm();
      if (d < best) {
        best = d;
        point = sp.point;
      }
    }
    return (y - point).norm();
  }
  return (y - N.project_from(y, foot.uv).point).norm();
}

struct Derivs {
  double fu, fv, fuu, fuv, fvv;
};

// Fourth-order central differences at steps (hu, hv).
template <class F>
Derivs stencil(const F& f, const Vec2& uv, double hu, double hv, double f0) {
  static constexpr int off[4] = {-2, -1, 1, 2};
  static constexpr double d1[4] = {1.0, -8.0, 8.0, -1.0};
  static constexpr double d2[4] = {-1.0, 16.0, 16.0, -1.0};
  Derivs d{0, 0, 0, 0, 0};
  for (int a = 0; a < 4; ++a) {
    const double fu = f(uv + Vec2(off[a] * hu, 0.0));
    const double fv = f(uv + Vec2(0.0, off[a] * hv));
    d.fu += d1[a] * fu;
    d.fv += d1[a] * fv;
    d.fuu += d2[a] * fu;
    d.fvv += d2[a] * fv;
    for (int b = 0; b < 4; ++b) d.fuv += d1[a] * d1[b] * f(uv + Vec2(off[a] * hu, off[b] * hv));
  }
  d.fu /= 12.0 * hu;
  d.fv /= 12.0 * hv;
  d.fuu = (d.fuu - 30.0 * f0) / (12.0 * hu * hu);
  d.fvv = (d.fvv - 30.0 * f0) / (12.0 * hv * hv);
  d.fuv /= 144.0 * hu * hv;
  return d;
}

// Laplace-Beltrami of u = g(t_z) on M at uv: g^{ij} (u_ij - <x_ij, grad u>).
double intrinsic_laplacian(const ParametricSurface& M, const DistanceField& N, const BarrierProfile& profile,
                           const surfgeo::Jet2& j, const Vec2& uv, const FootPoint& foot, double step) {
  auto u = [&](const Vec2& p) { return profile.g(branch_distance(N, M.position(p), foot)); };
  const double u0 = u(uv);
  const double hu = step / j.pu.norm();
  const double hv = step / j.pv.norm();
  const Derivs coarse = stencil(u, uv, hu, hv, u0);
  const Derivs fine = stencil(u, uv, 0.5 * hu, 0.5 * hv, u0);
  auto rich = [](double c, double f) { return (16.0 * f - c) / 15.0; };
  const Derivs d{rich(coarse.fu, fine.fu), rich(coarse.fv, fine.fv), rich(coarse.fuu, fine.fuu),
                 rich(coarse.fuv, fine.fuv), rich(coarse.fvv, fine.fvv)};

  Eigen::Matrix2d G;
  G << j.pu.dot(j.pu), j.pu.dot(j.pv), j.pu.dot(j.pv), j.pv.dot(j.pv);
  const Eigen::Matrix2d Gi = G.inverse();
  const Vec2 grad_coords = Gi * Vec2(d.fu, d.fv);
  const Vec3 grad = grad_coords.x() * j.pu + grad_coords.y() * j.pv;
  return Gi(0, 0) * (d.fuu - j.puu.dot(grad)) + 2.0 * Gi(0, 1) * (d.fuv - j.puv.dot(grad)) +
         Gi(1, 1) * (d.fvv - j.pvv.dot(grad));
}

struct FootEval {
  HessianEigenvalues mu;
  double trace_w = 0.0;
  double extrinsic = 0.0;
  double laplacian = 0.0;
  double H_N = 0.0;
  std::size_t foot = 0;
};

struct ProbeEval {
  BarrierCertificate cert;
  std::vector<FootEval> feet;
  std::vector<double> foot_H_N;  // all feet, also outside the tube
  bool queried = false;
};

ProbeEval evaluate_probe(const ParametricSurface& M, const DistanceField& N, const BarrierProfile& profile,
                         const CertifyOptions& o, const Vec2& uv, std::size_t index, bool require_minimal) {
  ProbeEval e;
  BarrierCertificate& cert = e.cert;
  cert.index = index;
  cert.uv = uv;
  cert.delta = o.delta;
  cert.mu_relax = o.delta / (2.0 * profile.c);
  try {
    const surfgeo::Jet2 j = M.jet(uv);
    const surfgeo::FundamentalForms ff = surfgeo::fundamental_forms(j);
    cert.point = j.p;
    cert.H_M = ff.H;
    if (require_minimal && std::abs(ff.H) > o.minimality_tol)
      throw ContractViolation("M is not minimal at probe " + std::to_string(index) + ": |H_M| = " + fmt17(ff.H));

    const surfgeo::TubularQuery q = N.query(j.p, profile.epsilon);
    e.queried = true;
    cert.t = q.foot().distance;
    cert.k1 = q.foot().k1;
    cert.k2 = q.foot().k2;
    cert.multiplicity = q.multiplicity();
    cert.H_N = q.foot().k1 + q.foot().k2;
    cert.u = profile.g(cert.t);
    for (const FootPoint& f : q.feet) e.foot_H_N.push_back(f.k1 + f.k2);

    if (!(cert.t > 0.0 && 2.0 * cert.t < profile.epsilon)) {
      cert.reason = "outside the tube 0 < 2t < eps";
      return e;
    }
    if (q.foot().on_boundary) {
      cert.reason = "foot on the edge of the parameter domain of N";
      return e;
    }

    const Eigen::Matrix<double, 3, 2> W = tangent_basis(j);
    for (std::size_t k = 0; k < q.feet.size(); ++k) {
      const FootPoint& f = q.feet[k];
      FootEval fe;
      fe.foot = k;
      fe.mu = hessian_eigenvalues(profile, cert.t, f.k1, f.k2);
      fe.trace_w = subspace_trace(hessian_matrix(fe.mu, f.dir1, f.dir2, f.normal), W);
      fe.extrinsic = fe.trace_w + profile.dg(cert.t) * ff.H * f.normal.dot(ff.normal);
      fe.laplacian = intrinsic_laplacian(M, N, profile, j, uv, f, o.fd_step);
      fe.H_N = f.k1 + f.k2;
      e.feet.push_back(fe);
    }
  } catch (const DomainError& err) {
    cert.reason = err.what();
    e.feet.clear();
  }
  return e;
}

CertificationRun certify(const ParametricSurface& M, const DistanceField& N, const std::vector<Vec2>& probes,
                         const CertifyOptions& o, bool cmc) {
  const Resolved r = resolve(N, o);
  const BarrierProfile profile(r.epsilon, r.c);
  std::vector<ProbeEval> evals(probes.size());
  parallel_for(probes.size(), o.threads,
               [&](std::size_t i) { evals[i] = evaluate_probe(M, N, profile, o, probes[i], i, !cmc); });

  CertificationRun run;
  run.epsilon = r.epsilon;
  run.c = r.c;
  run.delta = o.delta;
  run.cmc = cmc;
  double sup_HM = 0.0;
  if (cmc) {
    double inf_HN = std::numeric_limits<double>::infinity();
    const double tol = 1e-9 * (1.0 + r.c);
    for (const ProbeEval& e : evals) {
      if (!e.queried) continue;
      sup_HM = std::max(sup_HM, std::abs(e.cert.H_M));
      for (double h : e.foot_H_N) {
        if (h < -tol)
          throw RefusedError("N is not well-oriented with respect to M: at probe " + std::to_string(e.cert.index) +
                             " the mean curvature of N toward M is " + fmt17(h) +
                             ", so its mean curvature vector points away from M");
        inf_HN = std::min(inf_HN, h);
      }
    }
    if (!std::isfinite(inf_HN)) throw ContractViolation("no probe reached N");
    run.inf_H_N = inf_HN;
    run.sup_abs_H_M = sup_HM;
    run.lambda = inf_HN - sup_HM;
    run.hypothesis_violated = sup_HM > inf_HN;
  }

  for (ProbeEval& e : evals) {
    BarrierCertificate& cert = e.cert;
    const double w = profile.weight(cert.t);
    if (cmc && e.queried) cert.rhs = w * run.lambda;
    if (e.feet.empty()) {
      cert.verdict = Verdict::Skipped;
      run.certificates.push_back(cert);
      continue;
    }
    const FootEval* worst = &e.feet.front();
    double relaxed = std::numeric_limits<double>::infinity();
    for (const FootEval& fe : e.feet) {
      if (fe.laplacian < worst->laplacian) worst = &fe;
      relaxed = std::min(relaxed, fe.mu.mu1 + fe.mu.mu2 - w * (cert.mu_relax + sup_HM) - cert.rhs);
    }
    cert.mu = worst->mu;
    cert.trace_lb = worst->mu.trace_lower_bound();
    cert.trace_w = worst->trace_w;
    cert.extrinsic = worst->extrinsic;
    cert.laplacian = worst->laplacian;
    const double scale = std::max({std::abs(cert.laplacian), std::abs(cert.extrinsic), 1e-12});
    cert.agreement = std::abs(cert.laplacian - cert.extrinsic) / scale;
    cert.laplacian_margin = cert.laplacian - cert.rhs;
    cert.relaxed_margin = relaxed;
    cert.lambda_margin = cert.laplacian - run.lambda * cert.u;
    const bool pass = cert.laplacian_margin > -o.delta && cert.relaxed_margin >= -o.delta;
    cert.verdict = pass ? Verdict::Pass : Verdict::Fail;
    if (!pass)
      cert.reason = cert.laplacian_margin <= -o.delta ? "laplacian below -delta" : "relaxed trace bound below -delta";
    run.certificates.push_back(cert);
  }
  return run;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

CertificateSummary summarize(const CertificationRun& run) {
  CertificateSummary s;
  s.probes = run.certificates.size();
  s.min_margin = std::numeric_limits<double>::infinity();
  for (const BarrierCertificate& c : run.certificates) {
    switch (c.verdict) {
      case Verdict::Pass: ++s.passed; break;
      case Verdict::Fail: ++s.failed; break;
      case Verdict::Skipped: ++s.skipped; continue;
    }
    s.min_margin = std::min({s.min_margin, c.laplacian_margin, c.relaxed_margin});
    s.max_agreement = std::max(s.max_agreement, c.agreement);
  }
  if (s.passed + s.failed == 0) s.min_margin = std::numeric_limits<double>::quiet_NaN();
  return s;
}

CertificationRun certify_minimal(const ParametricSurface& M, const DistanceField& N, const std::vector<Vec2>& probes,
                                 const CertifyOptions& options) {
  return certify(M, N, probes, options, false);
}

CertificationRun certify_cmc(const ParametricSurface& M, const DistanceField& N, const std::vector<Vec2>& probes,
                             const CertifyOptions& options) {
  return certify(M, N, probes, options, true);
}

void write_certificates_text(std::ostream& out, const CertificationRun& run) {
  out << "run kind=" << (run.cmc ? "cmc" : "minimal") << " epsilon=" << fmt17(run.epsilon) << " c=" << fmt17(run.c)
      << " delta=" << fmt17(run.delta);
  if (run.cmc)
    out << " inf_H_N=" << fmt17(run.inf_H_N) << " sup_abs_H_M=" << fmt17(run.sup_abs_H_M)
        << " lambda=" << fmt17(run.lambda) << " hypothesis_violated=" << (run.hypothesis_violated ? 1 : 0);
  out << '\n';
  for (const BarrierCertificate& c : run.certificates) {
    out << "certificate index=" << c.index << " u=" << fmt17(c.uv.x()) << " v=" << fmt17(c.uv.y())
        << " x=" << fmt17(c.point.x()) << " y=" << fmt17(c.point.y()) << " z=" << fmt17(c.point.z())
        << " t=" << fmt17(c.t) << " k1=" << fmt17(c.k1) << " k2=" << fmt17(c.k2) << " mu1=" << fmt17(c.mu.mu1)
        << " mu2=" << fmt17(c.mu.mu2) << " mu3=" << fmt17(c.mu.mu3) << " trace_lb=" << fmt17(c.trace_lb)
        << " laplacian=" << fmt17(c.laplacian) << " extrinsic=" << fmt17(c.extrinsic) << " rhs=" << fmt17(c.rhs)
        << " margin=" << fmt17(c.laplacian_margin) << " relaxed=" << fmt17(c.relaxed_margin)
        << " multiplicity=" << c.multiplicity << " verdict=" << verdict_name(c.verdict);
    if (!c.reason.empty()) out << " reason=\"" << c.reason << '"';
    out << '\n';
  }
  const CertificateSummary s = summarize(run);
  out << "summary probes=" << s.probes << " passed=" << s.passed << " failed=" << s.failed
      << " skipped=" << s.skipped << " min_margin=" << fmt17(s.min_margin)
      << " max_agreement=" << fmt17(s.max_agreement) << '\n';
}

void write_certificates_csv(std::ostream& out, const CertificationRun& run) {
  out << "index,u,v,x,y,z,t,k1,k2,mu1,mu2,mu3,trace_lb,trace_w,extrinsic,laplacian,agreement,rhs,margin,relaxed,"
         "lambda_margin,u_value,H_M,H_N,delta,mu_relax,multiplicity,verdict\n";
  for (const BarrierCertificate& c : run.certificates) {
    const double vals[] = {c.uv.x(),   c.uv.y(),        c.point.x(),  c.point.y(),      c.point.z(),
                           c.t,        c.k1,            c.k2,         c.mu.mu1,         c.mu.mu2,
                           c.mu.mu3,   c.trace_lb,      c.trace_w,    c.extrinsic,      c.laplacian,
                           c.agreement, c.rhs,          c.laplacian_margin, c.relaxed_margin, c.lambda_margin,
                           c.u,        c.H_M,           c.H_N,        c.delta,          c.mu_relax};
    out << c.index;
    for (double v : vals) out << ',' << fmt17(v);
    out << ',' << c.multiplicity << ',' << verdict_name(c.verdict) << '\n';
  }
}

BoundaryReport boundary_distance_report(const ParametricSurface& M, const DistanceField& N,
                                        const BarrierProfile& profile, int nu, int nv, int boundary_samples) {
  if (nu < 3 || nv < 3 || boundary_samples < 2) throw ContractViolation("boundary report needs a 3x3 grid");
  const surfgeo::ParamDomain d = M.domain();
  BoundaryReport r;
  r.dist_M_N = std::numeric_limits<double>::infinity();
  r.dist_boundary_N = std::numeric_limits<double>::infinity();
  r.sup_interior_u = -std::numeric_limits<double>::infinity();
  r.sup_boundary_u = -std::numeric_limits<double>::infinity();
  double spacing = 0.0;

  auto at = [&](double a, double b) { return Vec2(d.u0 + a * (d.u1 - d.u0), d.v0 + b * (d.v1 - d.v0)); };
  auto dist = [&](const Vec3& y) { return N.query(y).foot().distance; };

  // Interior grid, boundary rows and columns excluded.
  std::vector<Vec3> row_prev;
  for (int i = 1; i < nu - 1; ++i) {
    std::vector<Vec3> row;
    for (int k = 1; k < nv - 1; ++k) {
      const Vec3 y = M.position(at(double(i) / (nu - 1), double(k) / (nv - 1)));
      const double t = dist(y);
      r.dist_M_N = std::min(r.dist_M_N, t);
      r.sup_interior_u = std::max(r.sup_interior_u, profile.g(t));
      if (!row.empty()) spacing = std::max(spacing, 0.5 * (y - row.back()).norm());
      if (!row_prev.empty()) spacing = std::max(spacing, 0.5 * (y - row_prev[row.size()]).norm());
      row.push_back(y);
      ++r.interior_samples;
    }
    row_prev = std::move(row);
  }

  auto edge = [&](bool along_u, double fixed) {
    Vec3 prev;
    for (int s = 0; s < boundary_samples; ++s) {
      const double a = double(s) / (boundary_samples - 1);
      const Vec3 y = M.position(along_u ? at(a, fixed) : at(fixed, a));
      const double t = dist(y);
      r.dist_boundary_N = std::min(r.dist_boundary_N, t);
      r.sup_boundary_u = std::max(r.sup_boundary_u, profile.g(t));
      if (s > 0) spacing = std::max(spacing, 0.5 * (y - prev).norm());
      prev = y;
      ++r.boundary_samples;
    }
  };
  if (!d.periodic_u) {
    edge(false, 0.0);
    edge(false, 1.0);
  }
  if (!d.periodic_v) {
    edge(true, 0.0);
    edge(true, 1.0);
  }
  r.dist_M_N = std::min(r.dist_M_N, r.dist_boundary_N);
  // u is Lipschitz in the ambient distance with constant sup|g'| = 2c (t >= 0).
  r.resolution_bound = 2.0 * profile.c * spacing;
  r.interior_exceeds = r.sup_interior_u - r.sup_boundary_u > r.resolution_bound;
  return r;
}

void write_boundary_report(std::ostream& out, const BoundaryReport& r) {
  out << "boundary_report dist_M_N=" << fmt17(r.dist_M_N) << " dist_boundary_N=" << fmt17(r.dist_boundary_N)
      << " sup_interior_u=" << fmt17(r.sup_interior_u) << " sup_boundary_u=" << fmt17(r.sup_boundary_u)
      << " resolution_bound=" << fmt17(r.resolution_bound) << " interior_exceeds=" << (r.interior_exceeds ? 1 : 0)
      << " interior_samples=" << r.interior_samples << " boundary_samples=" << r.boundary_samples << '\n';
}

}  // namespace halfspace::barrier
