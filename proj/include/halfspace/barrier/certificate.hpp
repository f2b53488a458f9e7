#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "halfspace/barrier/profile.hpp"
#include "halfspace/surfgeo/distance.hpp"

namespace halfspace::barrier {

using surfgeo::Vec2;
using surfgeo::Vec3;

enum class Verdict { Pass, Fail, Skipped };

const char* verdict_name(Verdict v);

/// Pointwise check of the barrier sub-equation at one probe of M.
///
/// `laplacian` is the intrinsic Laplacian of u = g(t_z) on M by finite
/// differences, where t_z is the distance to the sheet of N through the foot
/// z; `extrinsic` is Tr_{T_qM} Hess F + <grad F, H_M vector> at the same
/// foot. With several feet, every foot is evaluated and the worst is kept.
struct BarrierCertificate {
  std::size_t index = 0;
  Vec2 uv = Vec2::Zero();
  Vec3 point = Vec3::Zero();
  double t = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  HessianEigenvalues mu;
  double trace_lb = 0.0;   // mu1 + mu2
  double trace_w = 0.0;    // Tr Hess F restricted to T_qM
  double extrinsic = 0.0;  // trace_w + <grad F, H_M vector>
  double laplacian = 0.0;
  double agreement = 0.0;  // |laplacian - extrinsic| / max(|laplacian|, |extrinsic|)
  double rhs = 0.0;        // 0, or (2c/(1+2ct)) (inf H_N - sup |H_M|)
  double laplacian_margin = 0.0;  // laplacian - rhs
  double relaxed_margin = 0.0;    // mu1 + mu2 - (2c/(1+2ct)) (mu_relax + sup|H_M|) - rhs
  double lambda_margin = 0.0;     // laplacian - lambda u (CMC runs)
  double u = 0.0;
  double H_M = 0.0;
  double H_N = 0.0;  // at the foot, toward M
  double delta = 0.0;
  double mu_relax = 0.0;
  int multiplicity = 0;
  Verdict verdict = Verdict::Skipped;
  std::string reason;
};

struct CertifyOptions {
  double delta = 1e-4;
  /// Tube radius; defaults to tubular_radius(c_N, c_N). Required for flat N.
  std::optional<double> epsilon;
  /// Curvature constant; defaults to the bound of N, or 1/(2 eps) when N is
  /// flat. Must not be below the bound of N.
  std::optional<double> c;
  /// Finite-difference step in ambient length units.
  double fd_step = 1e-3;
  /// Probes of a "minimal" M must have |H_M| below this.
  double minimality_tol = 1e-6;
  int threads = 1;
};

struct CertificationRun {
  std::vector<BarrierCertificate> certificates;
  double epsilon = 0.0;
  double c = 0.0;
  double delta = 0.0;
  bool cmc = false;
  double inf_H_N = 0.0;      // over the probe feet (CMC runs)
  double sup_abs_H_M = 0.0;  // over the probes (CMC runs)
  double lambda = 0.0;       // inf H_N - sup |H_M|
  bool hypothesis_violated = false;  // sup |H_M| > inf H_N
};

struct CertificateSummary {
  std::size_t probes = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  double min_margin = 0.0;  // over evaluated probes, min(laplacian, relaxed) margin
  double max_agreement = 0.0;
  bool all_pass() const { return failed == 0 && skipped == 0 && probes > 0; }
};

CertificateSummary summarize(const CertificationRun& run);

/// Minimal M against N. Verdict pass iff laplacian_margin > -delta and
/// relaxed_margin >= -delta, with mu_relax = delta / 2c. Probes outside
/// 0 < 2t < eps (or whose foot is on the edge of N's domain) are skipped.
/// ContractViolation when |H_M| exceeds the minimality tolerance at a probe.
CertificationRun certify_minimal(const surfgeo::ParametricSurface& M, const surfgeo::DistanceField& N,
                                 const std::vector<Vec2>& probes, const CertifyOptions& options = {});

/// CMC version: rhs = (2c/(1+2ct)) (inf H_N - sup|H_M|) over the probe set.
/// RefusedError when the mean curvature of N at some foot points away from M.
CertificationRun certify_cmc(const surfgeo::ParametricSurface& M, const surfgeo::DistanceField& N,
                             const std::vector<Vec2>& probes, const CertifyOptions& options = {});

/// One record per probe ("certificate key=value ...") and a summary line.
void write_certificates_text(std::ostream& out, const CertificationRun& run);
void write_certificates_csv(std::ostream& out, const CertificationRun& run);

/// Observational comparison of barrier suprema over M and over its boundary.
struct BoundaryReport {
  double dist_M_N = 0.0;
  double dist_boundary_N = 0.0;
  double sup_interior_u = 0.0;
  double sup_boundary_u = 0.0;
  /// Sampling error bound for the suprema: sup|g'| times the largest
  /// distance from M to the nearest sample.
  double resolution_bound = 0.0;
  bool interior_exceeds = false;  // sup_interior_u - sup_boundary_u > resolution_bound
  std::size_t interior_samples = 0;
  std::size_t boundary_samples = 0;
};

/// M is sampled on an nu x nv interior grid of its parameter rectangle and
/// `boundary_samples` points per non-periodic edge.
BoundaryReport boundary_distance_report(const surfgeo::ParametricSurface& M, const surfgeo::DistanceField& N,
                                        const BarrierProfile& profile, int nu = 101, int nv = 101,
                                        int boundary_samples = 401);

void write_boundary_report(std::ostream& out, const BoundaryReport& report);

}  // namespace halfspace::barrier
