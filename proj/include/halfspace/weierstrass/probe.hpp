#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfspace/weierstrass/immersion.hpp"

namespace halfspace::weierstrass {

struct LimitProbe {
  double theta = 0.0;
  std::vector<double> T;       // radii actually evaluated
  std::vector<Vec3> points;    // x(T e^{i theta})
  bool converged = false;
  Vec3 limit = Vec3::Zero();   // last point when converged
  double last_gap = 0.0;       // |x(T_n) - x(T_{n-1})|
  /// Median local exponent p in gap ~ T^{-p} over the last few steps.
  double rate = 0.0;
  bool truncated = false;      // evaluation failed before the list ended
  std::string truncation_reason;
};

/// T0, T0 r, T0 r^2, ... (count entries).
std::vector<double> geometric_radii(double T0 = 1.0, double ratio = 2.0, int count = 28);

/// Evaluates along t e^{i theta} for t in T_list (strictly increasing).
/// Converged when the final successive gap is at most cauchy_tol. An
/// evaluation error or non-finite point truncates the sequence and marks
/// the probe as diverged.
LimitProbe limit_probe(const std::function<Vec3(cplx)>& surface, double theta, const std::vector<double>& T_list,
                       double cauchy_tol = 1e-7);

}  // namespace halfspace::weierstrass
