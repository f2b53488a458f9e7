#include "halfspace/barrier/profile.hpp"

#include <cmath>

#include "halfspace/errors.hpp"
#include "halfspace/surfgeo/distance.hpp"

namespace halfspace::barrier {

BarrierProfile::BarrierProfile(double epsilon_, double c_) : epsilon(epsilon_), c(c_) {
  if (!(epsilon > 0.0 && c > 0.0 && std::isfinite(epsilon) && std::isfinite(c)))
    throw ContractViolation("barrier profile needs eps > 0 and c > 0");
  // a few ulps of slack so that c = 1/(2 eps) is accepted
  if (2.0 * epsilon * c > 1.0 + 1e-12) throw ContractViolation("barrier profile needs 2 eps c <= 1");
}

double BarrierProfile::g(double t) const { return std::log((2.0 + epsilon * c) / (2.0 + 4.0 * c * t)); }

double BarrierProfile::dg(double t) const { return -2.0 * c / (1.0 + 2.0 * c * t); }

double BarrierProfile::d2g(double t) const {
  const double s = 1.0 + 2.0 * c * t;
  return 4.0 * c * c / (s * s);
}

HessianEigenvalues hessian_eigenvalues(const BarrierProfile& profile, double t, double k1, double k2) {
  if (!(t > 0.0 && 2.0 * t <= profile.epsilon * (1.0 + 1e-12)))
    throw ContractViolation("Hessian eigenvalues need 0 < 2t <= eps");
  if (k1 > k2) throw ContractViolation("principal curvatures must be ordered k1 <= k2");
  const surfgeo::ParallelCurvatures pc = surfgeo::parallel_curvatures(k1, k2, t);
  if (!(pc.focal_margin > 0.0)) throw ContractViolation("Hessian eigenvalues need t k_i < 1");
  HessianEigenvalues mu;
  mu.kt1 = k1 / (1.0 - t * k1);
  mu.kt2 = k2 / (1.0 - t * k2);
  const double w = profile.weight(t);
  mu.mu1 = w * mu.kt1;
  mu.mu2 = w * mu.kt2;
  mu.mu3 = profile.d2g(t);
  return mu;
}

Eigen::Matrix3d hessian_matrix(const HessianEigenvalues& mu, const Eigen::Vector3d& dir1,
                               const Eigen::Vector3d& dir2, const Eigen::Vector3d& normal) {
  return mu.mu1 * dir1 * dir1.transpose() + mu.mu2 * dir2 * dir2.transpose() +
         mu.mu3 * normal * normal.transpose();
}

double subspace_trace(const Eigen::Matrix3d& Q, const Eigen::Matrix<double, 3, 2>& W) {
  const Eigen::Matrix2d gram = W.transpose() * W;
  if ((gram - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw ContractViolation("subspace basis must be orthonormal");
  const Eigen::Matrix3d S = 0.5 * (Q + Q.transpose());
  return (W.transpose() * S * W).trace();
}

Eigen::VectorXd spherical_frame_row(const std::vector<double>& theta) {
  const int n = static_cast<int>(theta.size());
  Eigen::VectorXd row(n + 1);
  double sines = 1.0;
  // row(n) = lambda_{n+1,n+1} = cos theta_1, row(n-1) = sin theta_1 cos theta_2, ...
  for (int k = 0; k < n; ++k) {
    row(n - k) = sines * std::cos(theta[k]);
    sines *= std::sin(theta[k]);
  }
  row(0) = sines;
  return row;
}

SliceEstimate slice_estimate(const SliceEstimateInput& in) {
  if (in.n < 2 || in.n > 4) throw ContractViolation("slice estimate supports n = 2, 3, 4");
  if (static_cast<int>(in.theta.size()) != in.n || static_cast<int>(in.kt.size()) != in.n)
    throw ContractViolation("slice estimate needs n angles and n curvatures");
  if (!(in.c > 0.0 && in.dg <= 0.0 && in.d2g >= 0.0 && in.mu_relax >= 0.0))
    throw ContractViolation("slice estimate needs c > 0, g' <= 0, g'' >= 0, mu >= 0");
  double sum = 0.0;
  for (double k : in.kt) {
    if (std::abs(k) > in.c) throw ContractViolation("parallel curvature exceeds c = max |k_i^t|");
    sum += k;
  }
  if (sum < -in.mu_relax)
    throw ContractViolation("parallel mean curvature below -mu violates the monotonicity hypothesis");

  SliceEstimate out;
  out.frame_row = spherical_frame_row(in.theta);
  double tangential = 0.0;
  for (int i = 0; i < in.n; ++i) tangential += -in.kt[i] * (1.0 - out.frame_row(i) * out.frame_row(i));
  const double last = out.frame_row(in.n);
  out.direct_value = in.dg * tangential + in.d2g * (1.0 - last * last);
  const double s1 = std::sin(in.theta[0]);
  out.lower_bound = in.mu_relax * in.dg + (in.d2g + in.c * in.dg) * s1 * s1;
  return out;
}

double lambda_threshold(double gamma, double H) {
  const double gh = gamma * H;
  if (!(gh > 0.0 && 2.0 * gh < 1.0)) throw ContractViolation("threshold needs 0 < 2 gamma H < 1");
  return gamma * H * H / (4.0 * (2.0 - gh));
}

}  // namespace halfspace::barrier
