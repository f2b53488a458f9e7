#pragma once

#include <Eigen/Core>
#include <vector>

namespace halfspace::barrier {

/// g(t) = log((2 + eps c) / (2 + 4 c t)); the barrier is F = g o t.
/// Requires eps > 0, c > 0 and 2 eps c <= 1.
struct BarrierProfile {
  double epsilon = 0.0;
  double c = 0.0;

  BarrierProfile(double epsilon, double c);

  double g(double t) const;
  /// -2c / (1 + 2ct)
  double dg(double t) const;
  /// 4c^2 / (1 + 2ct)^2, which equals dg(t)^2.
  double d2g(double t) const;
  /// 2c / (1 + 2ct) = -dg(t), the factor in front of every curvature term.
  double weight(double t) const { return -dg(t); }
};

/// Eigenvalues of Hess F at signed distance t over a foot with principal
/// curvatures k1 <= k2 (taken toward the query side).
struct HessianEigenvalues {
  double mu1 = 0.0;  // along the first principal direction
  double mu2 = 0.0;  // along the second
  double mu3 = 0.0;  // along the normal
  double kt1 = 0.0;  // parallel curvatures k_i / (1 - t k_i)
  double kt2 = 0.0;

  double trace_lower_bound() const { return mu1 + mu2; }
};

/// mu_i = (2c/(1+2ct)) k_i/(1 - t k_i), mu3 = 4c^2/(1+2ct)^2.
/// ContractViolation unless 0 < 2t <= eps; focal t propagates DomainError.
HessianEigenvalues hessian_eigenvalues(const BarrierProfile& profile, double t, double k1, double k2);

/// Hess F as a 3x3 matrix in the frame (dir1, dir2, normal) of a foot.
Eigen::Matrix3d hessian_matrix(const HessianEigenvalues& mu, const Eigen::Vector3d& dir1,
                               const Eigen::Vector3d& dir2, const Eigen::Vector3d& normal);

/// Trace of the symmetric Q restricted to span(W.col(0), W.col(1)).
/// ContractViolation unless W is orthonormal to 1e-10.
double subspace_trace(const Eigen::Matrix3d& Q, const Eigen::Matrix<double, 3, 2>& W);

/// Flat-ambient slice data: an n-dimensional slice with parallel curvatures
/// kt (|kt_i| <= c) and the unit vector (lambda_{n+1,1}, ..., lambda_{n+1,n+1})
/// given by spherical angles theta_1..theta_n.
struct SliceEstimateInput {
  int n = 2;
  double dg = 0.0;
  double d2g = 0.0;
  double c = 0.0;
  double mu_relax = 0.0;
  std::vector<double> theta;  // size n
  std::vector<double> kt;     // size n
};

struct SliceEstimate {
  double lower_bound = 0.0;   // mu dg + (d2g + c dg) sin^2 theta_1
  double direct_value = 0.0;  // dg sum(-kt_i (1 - l_i^2)) + d2g (1 - l_{n+1}^2)
  Eigen::VectorXd frame_row;  // lambda_{n+1, 1..n+1}
};

/// The unit vector of the spherical-coordinate frame, indexed 1..n+1 as
/// lambda_{n+1,1} .. lambda_{n+1,n+1} (stored 0-based).
Eigen::VectorXd spherical_frame_row(const std::vector<double>& theta);

/// ContractViolation for n outside {2,3,4}, size mismatches, |kt_i| > c or
/// sum kt_i < -mu_relax (the relaxed mean-curvature lower bound).
SliceEstimate slice_estimate(const SliceEstimateInput& in);

/// gamma H^2 / (4 (2 - gamma H)); ContractViolation unless 0 < 2 gamma H < 1.
double lambda_threshold(double gamma, double H);

}  // namespace halfspace::barrier
