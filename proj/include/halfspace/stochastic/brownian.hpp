#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "halfspace/surfgeo/distance.hpp"

namespace halfspace::stochastic {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Path k of an ensemble uses stream first_stream + k under `seed`.
struct RngSpec {
  std::uint64_t seed = 42;
  std::uint64_t first_stream = 0;
};

/// Limits on the work sample_paths accepts before refusing.
struct PathBudget {
  std::uint64_t max_steps = 10'000'000;        // per path, T/h
  std::uint64_t max_stored = 50'000'000;       // steps x paths kept in memory
};

/// Default step h = 1e-3 sqrt(T).
double default_step(double T);

/// Number of steps round(T/h); ContractViolation unless h > 0, T > 0.
std::uint64_t step_count(double h, double T);

/// Euler samples of Brownian motion from the origin: positions[k] at time
/// k h, k = 0..steps. `dim` is 2 (planar) or 3 (control experiments; the
/// third coordinate goes to `z`).
struct BMPath {
  std::uint64_t stream = 0;
  double h = 0.0;
  double T = 0.0;
  std::vector<Vec2> positions;
  std::vector<double> z;  // third coordinate, dim = 3 only

  int dim() const { return z.empty() ? 2 : 3; }
  std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
  double time(std::size_t k) const { return static_cast<double>(k) * h; }
  double radius(std::size_t k) const;
};

/// One path of (seed, stream). RefusedError when T/h exceeds the budget.
BMPath sample_path(std::uint64_t seed, std::uint64_t stream, double h, double T, int dim = 2,
                   const PathBudget& budget = {});

/// n_paths paths on consecutive streams. RefusedError when the per-path step
/// count or the stored total exceeds the budget.
std::vector<BMPath> sample_paths(const RngSpec& rng, std::size_t n_paths, double h, double T, int dim = 2,
                                 const PathBudget& budget = {});

/// Visits of one path to the disk (ball for dim 3) of radius r about the
/// origin. Runs of inside-samples separated by less than `revisit_gap` in
/// time count as one visit.
struct PathVisits {
  std::uint64_t stream = 0;
  std::size_t visits = 0;
  double last_visit_time = -1.0;  // -1 when never inside
  bool revisited_late = false;    // inside at some time > T/2
};

PathVisits path_visits(const BMPath& path, double radius, double revisit_gap);

struct RecurrenceStats {
  std::size_t n_paths = 0;
  std::vector<PathVisits> per_path;
  double revisit_fraction = 0.0;  // fraction of paths inside at some time > T/2
  double mean_visits = 0.0;
};

RecurrenceStats recurrence_stat(const std::vector<BMPath>& paths, double radius, double revisit_gap);
RecurrenceStats aggregate_visits(std::vector<PathVisits> per_path);

enum class TimeChangeVerdict { Conservative, Inconclusive };
const char* verdict_name(TimeChangeVerdict v);

/// tau(s) = int_0^s lambda^2(B_r) dr by the left-endpoint rule: tau[k] sums
/// the first k samples. Evaluation failure (exception or non-finite value)
/// truncates the integral at that step.
struct TimeChange {
  std::vector<double> tau;
  double tau_T = 0.0;
  double min_lambda2 = 0.0;  // along the evaluated samples
  bool truncated = false;
  std::string truncation_reason;
  TimeChangeVerdict verdict = TimeChangeVerdict::Inconclusive;
};

using Lambda2 = std::function<double(const Vec2&)>;

/// Verdict Conservative when inf_lambda2 > 0 is supplied by the caller (an
/// analytic lower bound) and tau(T) >= T inf_lambda2 on an untruncated path.
TimeChange time_change(const BMPath& path, const Lambda2& lambda2, std::optional<double> inf_lambda2 = std::nullopt);

/// Minimum unsigned distance from the image of a path to N.
using Immersion = std::function<Vec3(const Vec2&)>;
double path_min_distance(const BMPath& path, const Immersion& immersion, const surfgeo::DistanceField& N);

/// For each eps, the fraction of paths whose image comes within eps of N.
std::vector<double> neighborhood_hits(const std::vector<BMPath>& paths, const Immersion& immersion,
                                      const surfgeo::DistanceField& N, const std::vector<double>& eps_list);
std::vector<double> hit_frequencies(const std::vector<double>& min_distances, const std::vector<double>& eps_list);

/// Streaming ensemble: each path is generated, measured and dropped, so
/// memory stays bounded. Results are indexed by path and do not depend on
/// the thread count.
struct EnsembleConfig {
  RngSpec rng;
  std::size_t n_paths = 1000;
  double T = 1.0;
  std::optional<double> h;  // default_step(T) when unset
  int dim = 2;
  int threads = 1;
  PathBudget budget;

  double disk_radius = 1.0;
  double revisit_gap = 0.0;  // 0 = one step

  Lambda2 lambda2;                  // optional time change
  std::optional<double> inf_lambda2;
  Immersion immersion;              // optional, with N, for neighborhood hits
  const surfgeo::DistanceField* N = nullptr;
  std::vector<double> eps_list;
};

struct PathRecord {
  std::uint64_t stream = 0;
  std::size_t visits = 0;
  double last_visit_time = -1.0;
  bool revisited_late = false;
  double tau_T = std::numeric_limits<double>::quiet_NaN();
  bool tau_truncated = false;
  bool conservative = false;
  double min_lambda2 = std::numeric_limits<double>::quiet_NaN();
  double min_tN = std::numeric_limits<double>::quiet_NaN();
  Vec3 final_position = Vec3::Zero();
};

struct EnsembleSummary {
  std::size_t n_paths = 0;
  double h = 0.0;
  std::size_t steps = 0;
  Vec3 mean_final = Vec3::Zero();
  double mean_sq_radius = 0.0;  // E|B_T|^2
  double revisit_fraction = 0.0;
  double mean_visits = 0.0;
  std::size_t conservative_paths = 0;
  std::size_t truncated_paths = 0;
  double min_tau_ratio = std::numeric_limits<double>::quiet_NaN();  // min over paths of tau_T / T
  std::vector<double> eps_list;
  std::vector<double> hit_frequency;
};

struct EnsembleResult {
  std::vector<PathRecord> records;
  EnsembleSummary summary;
};

EnsembleResult run_ensemble(const EnsembleConfig& config);

/// One row per path (stream, visits, last_visit_time, tau_T, min_tN, final
/// position), then "# key=value" summary lines.
void write_ensemble_csv(std::ostream& out, const EnsembleResult& result);
/// positions as "k,t,x,y" rows (plus z for dim 3).
void write_path_csv(std::ostream& out, const BMPath& path);

}  // namespace halfspace::stochastic
