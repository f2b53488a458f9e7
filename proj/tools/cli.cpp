#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "halfspace/barrier/certificate.hpp"
#include "halfspace/barrier/scenarios.hpp"
#include "halfspace/errors.hpp"
#include "halfspace/format.hpp"
#include "halfspace/parallel.hpp"
#include "halfspace/stochastic/brownian.hpp"
#include "halfspace/stochastic/experiments.hpp"
#include "halfspace/weierstrass/export.hpp"
#include "halfspace/weierstrass/probe.hpp"

namespace halfspace::cli {

namespace fs = std::filesystem;
using namespace halfspace::weierstrass;

namespace {

struct Context {
  RunConfig config;
  fs::path dir;
  int threads = 1;
  std::ostream* out = nullptr;
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path.string() + "'");
  return f;
}

void write_echo(const Context& ctx) {
  std::ofstream f = open_output(ctx.dir / "resolved_config.json");
  f << ctx.config.to_json().dump(2) << "\n";
}

std::string csv_field(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n') ch = ';';
  return s;
}

// ---------------------------------------------------------------- surfaces

struct BuiltSurface {
  std::shared_ptr<const surfgeo::ParametricSurface> surface;
  const ConformalImmersion* conformal = nullptr;
};

BuiltSurface build_surface(const RunConfig& cfg) {
  const SurfaceBlock& s = cfg.surface;
  const GridBlock& g = cfg.probe.grid;
  const surfgeo::ParamDomain dom{g.u0, g.u1, g.v0, g.v1};
  auto p = [&](const char* key) { return s.params.at(key); };
  BuiltSurface b;
  try {
    if (s.name == "erf_example") {
      b.surface = std::make_shared<ErfExampleSurface>(p("r1"), p("r2"), dom);
    } else if (s.name == "enneper_andrade") {
      b.surface = std::make_shared<EnneperSurface>(EnneperParams{p("r1"), p("r2"), p("d")}, dom);
    } else if (s.name == "weierstrass") {
      WeierstrassData data;
      data.f = cnum::parse_expression(s.f, s.params);
      data.g = cnum::parse_expression(s.g, s.params);
      data.base = cnum::cplx(s.base_re, s.base_im);
      b.surface = std::make_shared<WeierstrassSurface>(data, 1e-12, dom);
    } else if (s.name == "plane") {
      b.surface = std::make_shared<surfgeo::PlaneSurface>(p("half_width"));
    } else if (s.name == "helicoid") {
      b.surface = std::make_shared<surfgeo::HelicoidSurface>(p("a"), dom);
    } else if (s.name == "catenoid") {
      b.surface = std::make_shared<surfgeo::CatenoidSurface>(p("a"), p("half_height"));
    } else if (s.name == "sphere") {
      b.surface = std::make_shared<surfgeo::SphereSurface>(p("radius"));
    } else if (s.name == "cylinder") {
      b.surface = std::make_shared<surfgeo::CylinderSurface>(p("radius"), p("half_height"));
    }
  } catch (const ContractViolation& e) {
    throw ConfigError("surface: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("surface: " + std::string(e.what()));
  } catch (const DomainError& e) {
    throw ConfigError("surface: " + std::string(e.what()));
  }
  b.conformal = dynamic_cast<const ConformalImmersion*>(b.surface.get());
  return b;
}

GridSpec grid_spec(const GridBlock& g) { return {g.u0, g.u1, g.v0, g.v1, g.nu, g.nv}; }

int cmd_surface(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const BuiltSurface b = build_surface(cfg);
  const GridSpec grid = grid_spec(cfg.probe.grid);

  std::ofstream jets = open_output(ctx.dir / "jets.csv");
  const ExportStats stats = write_jet_csv(jets, *b.surface, grid);
  *ctx.out << "surface name=" << cfg.surface.name << " points=" << stats.points << " failures=" << stats.failures
           << " max_residual=" << fmt17(stats.max_residual) << " max_abs_H=" << fmt17(stats.max_abs_H) << "\n";

  if (cfg.output.wants("obj")) {
    std::ofstream mesh = open_output(ctx.dir / "mesh.obj");
    write_mesh_obj(mesh, *b.surface, grid);
  }

  // figure data: the curve z = s + i s
  if (b.conformal) {
    const CurveBlock& c = cfg.probe.curve;
    std::vector<double> samples(c.n);
    for (int k = 0; k < c.n; ++k) samples[k] = c.s0 + (c.s1 - c.s0) * k / (c.n - 1);
    std::ofstream curve = open_output(ctx.dir / "curve.csv");
    write_curve_csv(curve, *b.conformal, [](double s) { return cnum::cplx(s, s); }, samples);
  }
  return kOk;
}

// ------------------------------------------------------------------- limit

std::optional<Vec3> golden_limit(const RunConfig& cfg, double theta) {
  if (cfg.surface.name != "erf_example") return std::nullopt;
  const double q = theta / (std::numbers::pi / 4.0);
  const double k = std::round(q);
  if (std::abs(q - k) > 1e-12) return std::nullopt;
  const int idx = ((static_cast<int>(k) % 8) + 8) % 8;
  if (idx % 2 == 0) return std::nullopt;
  try {
    return erf_example_limit_point(cfg.surface.params.at("r1"), cfg.surface.params.at("r2"), idx);
  } catch (const ContractViolation&) {
    return std::nullopt;  // outside the regime with listed limits
  }
}

int cmd_limit(Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const BuiltSurface b = build_surface(cfg);
  if (!b.conformal) throw ConfigError("limit: surface '" + cfg.surface.name + "' has no complex parameter");
  const ConformalImmersion& surface = *b.conformal;
  const std::vector<double> radii = geometric_radii(cfg.probe.T0, cfg.probe.ratio, cfg.probe.count);
  const std::vector<double>& angles = cfg.probe.angles;

  std::vector<LimitProbe> probes(angles.size());
  parallel_for(angles.size(), ctx.threads, [&](std::size_t i) {
    probes[i] = limit_probe([&](cnum::cplx z) { return surface.point(z); }, angles[i], radii, cfg.probe.cauchy_tol);
  });

  std::ofstream table = open_output(ctx.dir / "limit.csv");
  std::ofstream path = open_output(ctx.dir / "limit_path.csv");
  table << "theta,verdict,radius,x,y,z,last_gap,rate,golden_x,golden_y,golden_z,error,reason\n";
  path << "theta,T,x,y,z\n";
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const LimitProbe& p = probes[i];
    const std::string verdict = p.converged ? "converged" : "diverged";
    const Vec3 last = p.points.empty() ? Vec3::Constant(std::nan("")) : p.points.back();
    const double radius = p.T.empty() ? std::nan("") : p.T[p.points.size() - 1];
    const std::optional<Vec3> gold = golden_limit(cfg, p.theta);
    const double error = gold && p.converged ? (last - *gold).cwiseAbs().maxCoeff() : std::nan("");
    const Vec3 g = gold.value_or(Vec3::Constant(std::nan("")));
    table << fmt17(p.theta) << ',' << verdict << ',' << fmt17(radius) << ',' << fmt17(last.x()) << ','
          << fmt17(last.y()) << ',' << fmt17(last.z()) << ',' << fmt17(p.last_gap) << ',' << fmt17(p.rate) << ','
          << fmt17(g.x()) << ',' << fmt17(g.y()) << ',' << fmt17(g.z()) << ',' << fmt17(error) << ','
          << csv_field(p.truncation_reason) << "\n";
    for (std::size_t k = 0; k < p.points.size(); ++k)
      path << fmt17(p.theta) << ',' << fmt17(p.T[k]) << ',' << fmt17(p.points[k].x()) << ','
           << fmt17(p.points[k].y()) << ',' << fmt17(p.points[k].z()) << "\n";
    *ctx.out << "limit theta=" << fmt17(p.theta) << " verdict=" << verdict << " error=" << fmt17(error) << "\n";
  }
  return kOk;
}

// ----------------------------------------------------------------- barrier

barrier::Scenario build_scenario(const RunConfig& cfg, int threads) {
  const BarrierBlock& b = cfg.barrier;
  barrier::Scenario s;
  if (!b.n) {
    try {
      s = barrier::make_scenario(b.scenario);
    } catch (const ContractViolation&) {
      throw ConfigError("barrier.scenario: unknown scenario '" + b.scenario + "'");
    }
  } else if (b.scenario == "helicoid_catenoid") {
    s = barrier::helicoid_catenoid_scenario(*b.n);
  } else if (b.scenario == "parallel_planes") {
    s = barrier::parallel_planes_scenario(0.1, *b.n);
  } else if (b.scenario == "tilted_plane") {
    s = barrier::tilted_plane_scenario(0.05, *b.n);
  } else if (b.scenario == "concentric_spheres") {
    s = barrier::concentric_spheres_scenario(*b.n);
  } else if (b.scenario == "disk_in_sphere") {
    s = barrier::disk_in_sphere_scenario(*b.n);
  } else {
    throw ConfigError("barrier.scenario: unknown scenario '" + b.scenario + "'");
  }
  s.options.delta = b.delta;
  if (b.epsilon) s.options.epsilon = b.epsilon;
  if (b.c) s.options.c = b.c;
  s.options.threads = threads;
  return s;
}

int cmd_certify(Context& ctx) {
  const barrier::Scenario s = build_scenario(ctx.config, ctx.threads);
  barrier::CertificationRun run;
  try {
    run = barrier::run_scenario(s);
  } catch (const RefusedError& e) {
    *ctx.out << "certify scenario=" << s.name << " refused: " << e.what() << "\n";
    return kCertificationFailed;
  }
  {
    std::ofstream text = open_output(ctx.dir / "certificates.txt");
    barrier::write_certificates_text(text, run);
    std::ofstream csv = open_output(ctx.dir / "certificates.csv");
    barrier::write_certificates_csv(csv, run);
  }
  const barrier::CertificateSummary sum = barrier::summarize(run);
  *ctx.out << "certify scenario=" << s.name << " probes=" << sum.probes << " passed=" << sum.passed
           << " failed=" << sum.failed << " skipped=" << sum.skipped << " min_margin=" << fmt17(sum.min_margin)
           << " max_agreement=" << fmt17(sum.max_agreement) << "\n";
  return sum.all_pass() ? kOk : kCertificationFailed;
}

int cmd_report_boundary(Context& ctx) {
  const barrier::Scenario s = build_scenario(ctx.config, ctx.threads);
  const surfgeo::DistanceField field(s.N);
  barrier::CertificationRun run;
  try {
    run = barrier::run_scenario(s);
  } catch (const RefusedError& e) {
    *ctx.out << "report-boundary scenario=" << s.name << " refused: " << e.what() << "\n";
    return kCertificationFailed;
  }
  const barrier::BarrierProfile profile(run.epsilon, run.c);
  const BarrierBlock& b = ctx.config.barrier;
  const barrier::BoundaryReport report =
      barrier::boundary_distance_report(*s.M, field, profile, b.boundary_nu, b.boundary_nv, b.boundary_samples);
  std::ofstream f = open_output(ctx.dir / "boundary.txt");
  barrier::write_boundary_report(f, report);
  barrier::write_boundary_report(*ctx.out, report);
  return kOk;
}

// -------------------------------------------------------------- stochastic

int cmd_stochastic(Context& ctx) {
  const StochasticBlock& s = ctx.config.stochastic;
  stochastic::EnsembleConfig e;
  e.rng.seed = s.seed;
  e.n_paths = s.n_paths;
  e.T = s.T;
  e.h = s.h;
  e.dim = s.dim;
  e.threads = ctx.threads;
  e.disk_radius = s.disk_radius;
  e.revisit_gap = s.revisit_gap;

  stochastic::PlanePair pair;
  if (s.experiment == "time_change") {
    e.lambda2 = stochastic::erf_example_lambda2(s.r1, s.r2);
    // lambda sqrt(pi) = e^{r1 s} + e^{(r1 - 2 r2) s} >= 1 with s = Re z^2
    if (s.r1 > 0.0 && s.r1 < 2.0 * s.r2) e.inf_lambda2 = 1.0 / std::numbers::pi;
  } else if (s.experiment == "gaussian_time_change") {
    e.lambda2 = stochastic::gaussian_lambda2();
  } else if (s.experiment == "hits") {
    pair = s.plane == "parallel" ? stochastic::parallel_plane_pair() : stochastic::crossing_plane_pair();
    e.immersion = pair.immersion;
    e.N = pair.N.get();
    e.eps_list = s.eps_list;
  }

  stochastic::EnsembleResult result;
  try {
    result = stochastic::run_ensemble(e);
  } catch (const RefusedError& err) {
    throw ConfigError("stochastic: " + std::string(err.what()));
  }
  std::ofstream csv = open_output(ctx.dir / "stochastic.csv");
  stochastic::write_ensemble_csv(csv, result);

  const stochastic::EnsembleSummary& sum = result.summary;
  *ctx.out << "stochastic experiment=" << s.experiment << " n_paths=" << sum.n_paths << " h=" << fmt17(sum.h)
           << " steps=" << sum.steps << " mean_sq_radius=" << fmt17(sum.mean_sq_radius)
           << " revisit_fraction=" << fmt17(sum.revisit_fraction);
  if (e.lambda2)
    *ctx.out << " conservative=" << sum.conservative_paths << " truncated=" << sum.truncated_paths
             << " min_tau_ratio=" << fmt17(sum.min_tau_ratio);
  for (std::size_t k = 0; k < sum.eps_list.size(); ++k)
    *ctx.out << " hits(" << fmt17(sum.eps_list[k]) << ")=" << fmt17(sum.hit_frequency[k]);
  *ctx.out << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"halfspace: minimal surfaces, barriers and Brownian probes"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 1;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override stochastic.seed");
  app.add_option("--out", out_dir, std::string("output directory (default: $") + kOutEnv + " or ./halfspace_out)");
  app.add_option("--threads", threads, "worker threads, 0 = all cores; never changes results")
      ->check(CLI::NonNegativeNumber);

  using Command = int (*)(Context&);
  const std::vector<std::pair<std::string, Command>> commands = {
      {"surface", cmd_surface},       {"limit", cmd_limit},
      {"certify", cmd_certify},       {"stochastic", cmd_stochastic},
      {"report-boundary", cmd_report_boundary},
  };
  const std::map<std::string, std::string> help = {
      {"surface", "jet table, mesh and curve data on the probe grid"},
      {"limit", "limits along rays t e^{i theta}"},
      {"certify", "barrier certificates for a scenario; exit 1 unless all pass"},
      {"stochastic", "Brownian ensemble statistics"},
      {"report-boundary", "interior versus boundary barrier suprema"},
  };
  for (const auto& [name, fn] : commands) app.add_subcommand(name, help.at(name))->fallthrough();

  std::vector<const char*> argv{"halfspace"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    Context ctx;
    ctx.out = &out;
    ctx.config = config_path.empty() ? RunConfig::from_json(json::object()) : RunConfig::from_file(config_path);
    if (seed) ctx.config.stochastic.seed = *seed;
    ctx.threads = resolve_threads(threads);

    if (out_dir.empty()) out_dir = ctx.config.output.directory;
    if (out_dir.empty()) {
      const char* env = std::getenv(kOutEnv);
      out_dir = env && *env ? env : "halfspace_out";
    }
    ctx.config.output.directory = out_dir;
    ctx.dir = out_dir;
    fs::create_directories(ctx.dir);
    write_echo(ctx);

    for (const auto& [name, fn] : commands)
      if (app.got_subcommand(name)) return fn(ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    err << "invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "output error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace halfspace::cli
