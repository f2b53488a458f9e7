#include "halfspace/stochastic/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>

#include "halfspace/errors.hpp"
#include "halfspace/format.hpp"
#include "halfspace/parallel.hpp"
#include "halfspace/stochastic/philox.hpp"

namespace halfspace::stochastic {

double default_step(double T) {
  if (!(T > 0.0)) throw ContractViolation("horizon T must be positive");
  return 1e-3 * std::sqrt(T);
}

std::uint64_t step_count(double h, double T) {
  if (!(h > 0.0 && T > 0.0 && std::isfinite(h) && std::isfinite(T)))
    throw ContractViolation("Brownian paths need h > 0 and T > 0");
  const double n = std::round(T / h);
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(std::min(n, 1e19));
}

double BMPath::radius(std::size_t k) const {
  const double r2 = positions[k].squaredNorm() + (z.empty() ? 0.0 : z[k] * z[k]);
  return std::sqrt(r2);
}

BMPath sample_path(std::uint64_t seed, std::uint64_t stream, double h, double T, int dim, const PathBudget& budget) {
  if (dim != 2 && dim != 3) throw ContractViolation("Brownian paths are planar or 3-dimensional");
  const std::uint64_t steps = step_count(h, T);
  if (steps > budget.max_steps)
    throw RefusedError("path needs " + std::to_string(steps) + " steps, budget is " + std::to_string(budget.max_steps));
  BMPath p;
  p.stream = stream;
  p.h = h;
  p.T = static_cast<double>(steps) * h;
  p.positions.resize(steps + 1);
  p.positions[0] = Vec2::Zero();
  if (dim == 3) p.z.assign(steps + 1, 0.0);
  NormalStream normals(seed, stream);
  const double s = std::sqrt(h);
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double dx = s * normals.next();
    const double dy = s * normals.next();
    p.positions[k + 1] = p.positions[k] + Vec2(dx, dy);
    if (dim == 3) p.z[k + 1] = p.z[k] + s * normals.next();
  }
  return p;
}

std::vector<BMPath> sample_paths(const RngSpec& rng, std::size_t n_paths, double h, double T, int dim,
                                 const PathBudget& budget) {
  const std::uint64_t steps = step_count(h, T);
  if (steps > budget.max_steps)
    throw RefusedError("path needs " + std::to_string(steps) + " steps, budget is " + std::to_string(budget.max_steps));
  if (static_cast<double>(steps + 1) * static_cast<double>(n_paths) > static_cast<double>(budget.max_stored))
    throw RefusedError("ensemble would store more than " + std::to_string(budget.max_stored) +
                       " samples; use run_ensemble to stream it");
  std::vector<BMPath> out;
  out.reserve(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) out.push_back(sample_path(rng.seed, rng.first_stream + i, h, T, dim, budget));
  return out;
}

PathVisits path_visits(const BMPath& path, double radius, double revisit_gap) {
  if (!(radius > 0.0) || revisit_gap < 0.0) throw ContractViolation("visits need radius > 0 and gap >= 0");
  PathVisits v;
  v.stream = path.stream;
  const double gap = std::max(revisit_gap, path.h) * (1.0 + 1e-9);
  double last_inside = -1.0;
  for (std::size_t k = 0; k < path.positions.size(); ++k) {
    if (path.radius(k) > radius) continue;
    const double t = path.time(k);
    if (last_inside < 0.0 || t - last_inside > gap) ++v.visits;
    last_inside = t;
    if (t > 0.5 * path.T) v.revisited_late = true;
  }
  v.last_visit_time = last_inside;
  return v;
}

RecurrenceStats aggregate_visits(std::vector<PathVisits> per_path) {
  RecurrenceStats s;
  s.n_paths = per_path.size();
  std::size_t late = 0;
  double visits = 0.0;
  for (const PathVisits& v : per_path) {
    late += v.revisited_late ? 1 : 0;
    visits += static_cast<double>(v.visits);
  }
  if (s.n_paths > 0) {
    s.revisit_fraction = static_cast<double>(late) / static_cast<double>(s.n_paths);
    s.mean_visits = visits / static_cast<double>(s.n_paths);
  }
  s.per_path = std::move(per_path);
  return s;
}

RecurrenceStats recurrence_stat(const std::vector<BMPath>& paths, double radius, double revisit_gap) {
  std::vector<PathVisits> per_path;
  per_path.reserve(paths.size());
  for (const BMPath& p : paths) per_path.push_back(path_visits(p, radius, revisit_gap));
  return aggregate_visits(std::move(per_path));
}

const char* verdict_name(TimeChangeVerdict v) {
  return v == TimeChangeVerdict::Conservative ? "conservative" : "inconclusive";
}

TimeChange time_change(const BMPath& path, const Lambda2& lambda2, std::optional<double> inf_lambda2) {
  if (!lambda2) throw ContractViolation("time change needs lambda^2");
  TimeChange tc;
  const std::size_t n = path.steps();
  tc.tau.reserve(n + 1);
  tc.tau.push_back(0.0);
  tc.min_lambda2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    double l2 = 0.0;
    try {
      l2 = lambda2(path.positions[k]);
    } catch (const std::exception& e) {
      tc.truncated = true;
      tc.truncation_reason = e.what();
      break;
    }
    if (!std::isfinite(l2) || l2 < 0.0) {
      tc.truncated = true;
      tc.truncation_reason = "lambda^2 not finite at step " + std::to_string(k);
      break;
    }
    tc.min_lambda2 = std::min(tc.min_lambda2, l2);
    tc.tau.push_back(tc.tau.back() + path.h * l2);
  }
  tc.tau_T = tc.tau.back();
  const double T = static_cast<double>(n) * path.h;
  if (inf_lambda2 && *inf_lambda2 > 0.0 && !tc.truncated && tc.tau_T >= T * *inf_lambda2)
    tc.verdict = TimeChangeVerdict::Conservative;
  return tc;
}

double path_min_distance(const BMPath& path, const Immersion& immersion, const surfgeo::DistanceField& N) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& p : path.positions) best = std::min(best, N.query(immersion(p)).foot().distance);
  return best;
}

std::vector<double> hit_frequencies(const std::vector<double>& min_distances, const std::vector<double>& eps_list) {
  std::vector<double> out;
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw ContractViolation("neighborhood radii must be positive");
    std::size_t hits = 0;
    for (double d : min_distances) hits += d < eps ? 1 : 0;
    out.push_back(min_distances.empty() ? 0.0 : double(hits) / double(min_distances.size()));
  }
  return out;
}

std::vector<double> neighborhood_hits(const std::vector<BMPath>& paths, const Immersion& immersion,
                                      const surfgeo::DistanceField& N, const std::vector<double>& eps_list) {
  std::vector<double> d;
  d.reserve(paths.size());
  for (const BMPath& p : paths) d.push_back(path_min_distance(p, immersion, N));
  return hit_frequencies(d, eps_list);
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  if (cfg.n_paths == 0) throw ContractViolation("ensemble needs at least one path");
  if (static_cast<bool>(cfg.immersion) != (cfg.N != nullptr))
    throw ContractViolation("neighborhood hits need both an immersion and N");
  const double h = cfg.h ? *cfg.h : default_step(cfg.T);
  const std::uint64_t steps = step_count(h, cfg.T);
  if (steps > cfg.budget.max_steps)
    throw RefusedError("path needs " + std::to_string(steps) + " steps, budget is " +
                       std::to_string(cfg.budget.max_steps));

  EnsembleResult res;
  res.records.resize(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t i) {
    const BMPath p = sample_path(cfg.rng.seed, cfg.rng.first_stream + i, h, cfg.T, cfg.dim, cfg.budget);
    PathRecord& r = res.records[i];
    r.stream = p.stream;
    const PathVisits v = path_visits(p, cfg.disk_radius, cfg.revisit_gap);
    r.visits = v.visits;
    r.last_visit_time = v.last_visit_time;
    r.revisited_late = v.revisited_late;
    if (cfg.lambda2) {
      const TimeChange tc = time_change(p, cfg.lambda2, cfg.inf_lambda2);
      r.tau_T = tc.tau_T;
      r.tau_truncated = tc.truncated;
      r.conservative = tc.verdict == TimeChangeVerdict::Conservative;
      r.min_lambda2 = tc.min_lambda2;
    }
    if (cfg.N) r.min_tN = path_min_distance(p, cfg.immersion, *cfg.N);
    const std::size_t last = p.steps();
    r.final_position = Vec3(p.positions[last].x(), p.positions[last].y(), p.dim() == 3 ? p.z[last] : 0.0);
  });

  // Aggregation in path order keeps the sums independent of scheduling.
  EnsembleSummary& s = res.summary;
  s.n_paths = cfg.n_paths;
  s.h = h;
  s.steps = steps;
  const double n = static_cast<double>(cfg.n_paths);
  const double T = static_cast<double>(steps) * h;
  std::vector<PathVisits> visits;
  std::vector<double> min_d;
  for (const PathRecord& r : res.records) {
    s.mean_final += r.final_position / n;
    s.mean_sq_radius += r.final_position.squaredNorm() / n;
    visits.push_back({r.stream, r.visits, r.last_visit_time, r.revisited_late});
    if (cfg.lambda2) {
      s.conservative_paths += r.conservative ? 1 : 0;
      s.truncated_paths += r.tau_truncated ? 1 : 0;
      const double ratio = r.tau_T / T;
      if (std::isnan(s.min_tau_ratio) || ratio < s.min_tau_ratio) s.min_tau_ratio = ratio;
    }
    if (cfg.N) min_d.push_back(r.min_tN);
  }
  const RecurrenceStats rs = aggregate_visits(std::move(visits));
  s.revisit_fraction = rs.revisit_fraction;
  s.mean_visits = rs.mean_visits;
  if (cfg.N) {
    s.eps_list = cfg.eps_list;
    s.hit_frequency = hit_frequencies(min_d, cfg.eps_list);
  }
  return res;
}

void write_ensemble_csv(std::ostream& out, const EnsembleResult& res) {
  out << "stream,visits,last_visit_time,revisited_late,tau_T,tau_truncated,min_tN,x_T,y_T,z_T\n";
  for (const PathRecord& r : res.records) {
    out << r.stream << ',' << r.visits << ',' << fmt17(r.last_visit_time) << ',' << (r.revisited_late ? 1 : 0) << ','
        << fmt17(r.tau_T) << ',' << (r.tau_truncated ? 1 : 0) << ',' << fmt17(r.min_tN) << ','
        << fmt17(r.final_position.x()) << ',' << fmt17(r.final_position.y()) << ',' << fmt17(r.final_position.z())
        << '\n';
  }
  const EnsembleSummary& s = res.summary;
  out << "# n_paths=" << s.n_paths << '\n'
      << "# h=" << fmt17(s.h) << '\n'
      << "# steps=" << s.steps << '\n'
      << "# mean_x_T=" << fmt17(s.mean_final.x()) << '\n'
      << "# mean_y_T=" << fmt17(s.mean_final.y()) << '\n'
      << "# mean_sq_radius=" << fmt17(s.mean_sq_radius) << '\n'
      << "# revisit_fraction=" << fmt17(s.revisit_fraction) << '\n'
      << "# mean_visits=" << fmt17(s.mean_visits) << '\n'
      << "# conservative_paths=" << s.conservative_paths << '\n'
      << "# truncated_paths=" << s.truncated_paths << '\n'
      << "# min_tau_ratio=" << fmt17(s.min_tau_ratio) << '\n';
  for (std::size_t i = 0; i < s.eps_list.size(); ++i)
    out << "# hit_frequency eps=" << fmt17(s.eps_list[i]) << " value=" << fmt17(s.hit_frequency[i]) << '\n';
}

void write_path_csv(std::ostream& out, const BMPath& p) {
  out << (p.dim() == 3 ? "k,t,x,y,z\n" : "k,t,x,y\n");
  for (std::size_t k = 0; k < p.positions.size(); ++k) {
    out << k << ',' << fmt17(p.time(k)) << ',' << fmt17(p.positions[k].x()) << ',' << fmt17(p.positions[k].y());
    if (p.dim() == 3) out << ',' << fmt17(p.z[k]);
    out << '\n';
  }
}

}  // namespace halfspace::stochastic
