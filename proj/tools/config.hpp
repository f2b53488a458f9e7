#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace halfspace::cli {

using nlohmann::json;

/// Malformed configuration: unknown key, wrong type, bad value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridBlock {
  double u0 = -2.0;
  double u1 = 2.0;
  double v0 = -2.0;
  double v1 = 2.0;
  int nu = 101;
  int nv = 101;
};

/// Parameter curve z = s + i s for s in [s0, s1], n samples.
struct CurveBlock {
  double s0 = -2.0;
  double s1 = 2.0;
  int n = 401;
};

/// `name` with real `params`, or name "weierstrass" with raw f and g
/// expressions (params are then constants visible to the expressions).
struct SurfaceBlock {
  std::string name = "erf_example";
  std::map<std::string, double> params;
  std::string f;
  std::string g;
  double base_re = 0.0;
  double base_im = 0.0;
};

struct ProbeBlock {
  GridBlock grid;
  std::vector<json> rays;       // numbers (radians) or expressions such as "3*pi/4"
  std::vector<double> angles;   // rays evaluated
  double T0 = 1.0;
  double ratio = 2.0;
  int count = 28;
  double cauchy_tol = 1e-7;
  CurveBlock curve;
};

struct BarrierBlock {
  std::string scenario = "helicoid_catenoid";
  std::optional<int> n;  // probes per side; scenario default when unset
  double delta = 1e-4;
  std::optional<double> epsilon;
  std::optional<double> c;
  int boundary_nu = 101;
  int boundary_nv = 101;
  int boundary_samples = 401;
};

struct StochasticBlock {
  std::string experiment = "variance";  // variance, revisit, time_change, gaussian_time_change, hits
  std::uint64_t seed = 42;
  std::size_t n_paths = 0;  // experiment defaults are filled by resolve()
  std::optional<double> h;
  double T = 0.0;
  int dim = 2;
  double disk_radius = 1.0;
  double revisit_gap = 0.0;
  std::vector<double> eps_list;
  std::string plane = "crossing";  // hits: crossing or parallel
  double r1 = 1.0;                 // time_change surface parameters
  double r2 = 5.0;
};

struct OutputBlock {
  std::string directory;
  std::vector<std::string> formats{"csv", "obj"};

  bool wants(const std::string& format) const;
};

struct RunConfig {
  SurfaceBlock surface;
  ProbeBlock probe;
  BarrierBlock barrier;
  StochasticBlock stochastic;
  OutputBlock output;

  /// Parses and validates; unknown keys at any level raise ConfigError.
  static RunConfig from_json(const json& doc);
  static RunConfig from_file(const std::string& path);
  /// Fills defaults that depend on other fields (surface parameters,
  /// stochastic presets, ray angles).
  void resolve();
  /// Complete document with every default spelled out; from_json of it
  /// reproduces this configuration.
  json to_json() const;
};

/// A ray given as a number or an expression in pi (no z).
double evaluate_angle(const json& ray);

}  // namespace halfspace::cli
