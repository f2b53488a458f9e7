#include "halfspace/weierstrass/probe.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "halfspace/errors.hpp"

namespace halfspace::weierstrass {

std::vector<double> geometric_radii(double T0, double ratio, int count) {
  if (!(T0 > 0.0 && ratio > 1.0 && count > 0)) throw ContractViolation("geometric radii need T0 > 0, ratio > 1");
  std::vector<double> T(count);
  T[0] = T0;
  for (int k = 1; k < count; ++k) T[k] = T[k - 1] * ratio;
  return T;
}

LimitProbe limit_probe(const std::function<Vec3(cplx)>& surface, double theta, const std::vector<double>& T_list,
                       double cauchy_tol) {
  for (std::size_t k = 1; k < T_list.size(); ++k)
    if (!(T_list[k] > T_list[k - 1])) throw ContractViolation("limit probe radii must be strictly increasing");
  if (!(cauchy_tol > 0.0)) throw ContractViolation("Cauchy tolerance must be positive");

  LimitProbe probe;
  probe.theta = theta;
  cplx dir = std::polar(1.0, theta);
  // On a diagonal cos and sin differ by an ulp; t^2 times that ulp swamps
  // Re z^2 = 0 at large t, so use the exact diagonal direction.
  if (std::abs(std::abs(dir.real()) - std::abs(dir.imag())) <= 4.0 * std::numeric_limits<double>::epsilon()) {
    const double h = std::sqrt(0.5);
    dir = cplx(std::copysign(h, dir.real()), std::copysign(h, dir.imag()));
  }
  for (double t : T_list) {
    Vec3 p;
    try {
      p = surface(t * dir);
    } catch (const std::exception& e) {
      probe.truncated = true;
      probe.truncation_reason = e.what();
      break;
    }
    if (!p.allFinite()) {
      probe.truncated = true;
      probe.truncation_reason = "non-finite position";
      break;
    }
    probe.T.push_back(t);
    probe.points.push_back(p);
  }

  const std::size_t n = probe.points.size();
  std::vector<double> gaps;
  for (std::size_t k = 1; k < n; ++k) gaps.push_back((probe.points[k] - probe.points[k - 1]).norm());
  if (!gaps.empty()) probe.last_gap = gaps.back();

  std::vector<double> exponents;
  for (std::size_t k = gaps.size() >= 9 ? gaps.size() - 8 : 1; k < gaps.size(); ++k) {
    if (gaps[k] > 0.0 && gaps[k - 1] > 0.0)
      exponents.push_back(std::log(gaps[k - 1] / gaps[k]) / std::log(probe.T[k + 1] / probe.T[k]));
  }
  if (!exponents.empty()) {
    std::nth_element(exponents.begin(), exponents.begin() + exponents.size() / 2, exponents.end());
    probe.rate = exponents[exponents.size() / 2];
  }

  probe.converged = !probe.truncated && n >= 3 && probe.last_gap <= cauchy_tol;
  if (probe.converged) probe.limit = probe.points.back();
  return probe;
}

}  // namespace halfspace::weierstrass
