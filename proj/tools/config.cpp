#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "halfspace/cnum/expr.hpp"

namespace halfspace::cli {

namespace {

void check_keys(const json& j, const std::string& block, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("'" + block + "' must be an object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError("unknown key '" + block + "." + item.key() + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& dst) {
  if (j.contains(key) && !j.at(key).is_null()) dst = j.at(key).get<T>();
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Parameter names and defaults of the named surfaces.
const std::map<std::string, std::map<std::string, double>>& surface_defaults() {
  static const std::map<std::string, std::map<std::string, double>> table = {
      {"erf_example", {{"r1", 1.0}, {"r2", 5.0}}},
      {"enneper_andrade", {{"r1", std::sqrt(5.0)}, {"r2", 1.0}}},  // d = r1 - r2 unless given
      {"weierstrass", {}},
      {"plane", {{"half_width", 10.0}}},
      {"helicoid", {{"a", 1.0}}},
      {"catenoid", {{"a", 1.0}, {"half_height", 2.0}}},
      {"sphere", {{"radius", 1.0}}},
      {"cylinder", {{"radius", 1.0}, {"half_height", 5.0}}},
  };
  return table;
}

void parse_grid(const json& j, GridBlock& g) {
  check_keys(j, "probe.grid", {"u0", "u1", "v0", "v1", "nu", "nv"});
  read(j, "u0", g.u0);
  read(j, "u1", g.u1);
  read(j, "v0", g.v0);
  read(j, "v1", g.v1);
  read(j, "nu", g.nu);
  read(j, "nv", g.nv);
  if (!(g.u1 > g.u0) || !(g.v1 > g.v0) || g.nu < 2 || g.nv < 2) throw ConfigError("probe.grid: empty grid");
}

}  // namespace

bool OutputBlock::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

double evaluate_angle(const json& ray) {
  if (ray.is_number()) return ray.get<double>();
  if (!ray.is_string()) throw ConfigError("probe.rays: expected a number or an expression");
  const std::string text = ray.get<std::string>();
  if (text.find('z') != std::string::npos) throw ConfigError("probe.rays: '" + text + "' depends on z");
  cnum::cplx v;
  try {
    v = cnum::parse_expression(text)(0.0);
  } catch (const std::exception& e) {
    throw ConfigError("probe.rays: " + std::string(e.what()));
  }
  if (v.imag() != 0.0 || !std::isfinite(v.real())) throw ConfigError("probe.rays: '" + text + "' is not real");
  return v.real();
}

RunConfig RunConfig::from_json(const json& doc) {
  RunConfig c;
  try {
    check_keys(doc, "config", {"surface", "probe", "barrier", "stochastic", "output"});

    if (doc.contains("surface")) {
      const json& j = doc["surface"];
      check_keys(j, "surface", {"name", "params", "f", "g", "base"});
      read(j, "name", c.surface.name);
      if (j.contains("params")) {
        if (!j["params"].is_object()) throw ConfigError("'surface.params' must be an object");
        for (const auto& item : j["params"].items()) c.surface.params[item.key()] = item.value().get<double>();
      }
      read(j, "f", c.surface.f);
      read(j, "g", c.surface.g);
      if (j.contains("base")) {
        const auto b = j["base"].get<std::vector<double>>();
        if (b.size() != 2) throw ConfigError("surface.base: expected [re, im]");
        c.surface.base_re = b[0];
        c.surface.base_im = b[1];
      }
    }

    if (doc.contains("probe")) {
      const json& j = doc["probe"];
      check_keys(j, "probe", {"grid", "rays", "T0", "ratio", "count", "cauchy_tol", "curve"});
      if (j.contains("grid")) parse_grid(j["grid"], c.probe.grid);
      if (j.contains("rays")) {
        if (!j["rays"].is_array()) throw ConfigError("'probe.rays' must be an array");
        c.probe.rays = j["rays"].get<std::vector<json>>();
      }
      read(j, "T0", c.probe.T0);
      read(j, "ratio", c.probe.ratio);
      read(j, "count", c.probe.count);
      read(j, "cauchy_tol", c.probe.cauchy_tol);
      if (j.contains("curve")) {
        const json& k = j["curve"];
        check_keys(k, "probe.curve", {"s0", "s1", "n"});
        read(k, "s0", c.probe.curve.s0);
        read(k, "s1", c.probe.curve.s1);
        read(k, "n", c.probe.curve.n);
      }
    }

    if (doc.contains("barrier")) {
      const json& j = doc["barrier"];
      check_keys(j, "barrier", {"scenario", "n", "delta", "epsilon", "c", "boundary"});
      read(j, "scenario", c.barrier.scenario);
      read(j, "n", c.barrier.n);
      read(j, "delta", c.barrier.delta);
      read(j, "epsilon", c.barrier.epsilon);
      read(j, "c", c.barrier.c);
      if (j.contains("boundary")) {
        const json& k = j["boundary"];
        check_keys(k, "barrier.boundary", {"nu", "nv", "samples"});
        read(k, "nu", c.barrier.boundary_nu);
        read(k, "nv", c.barrier.boundary_nv);
        read(k, "samples", c.barrier.boundary_samples);
      }
    }

    if (doc.contains("stochastic")) {
      const json& j = doc["stochastic"];
      check_keys(j, "stochastic", {"experiment", "seed", "n_paths", "h", "T", "dim", "disk_radius", "revisit_gap",
                                   "eps_list", "plane", "r1", "r2"});
      read(j, "experiment", c.stochastic.experiment);
      read(j, "seed", c.stochastic.seed);
      read(j, "n_paths", c.stochastic.n_paths);
      read(j, "h", c.stochastic.h);
      read(j, "T", c.stochastic.T);
      read(j, "dim", c.stochastic.dim);
      read(j, "disk_radius", c.stochastic.disk_radius);
      read(j, "revisit_gap", c.stochastic.revisit_gap);
      read(j, "eps_list", c.stochastic.eps_list);
      read(j, "plane", c.stochastic.plane);
      read(j, "r1", c.stochastic.r1);
      read(j, "r2", c.stochastic.r2);
    }

    if (doc.contains("output")) {
      const json& j = doc["output"];
      check_keys(j, "output", {"directory", "formats"});
      read(j, "directory", c.output.directory);
      read(j, "formats", c.output.formats);
    }
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  c.resolve();
  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(doc);
}

void RunConfig::resolve() {
  const auto& table = surface_defaults();
  const auto it = table.find(surface.name);
  if (it == table.end()) throw ConfigError("surface.name: unknown surface '" + surface.name + "'");
  if (surface.name == "weierstrass") {
    if (surface.f.empty()) surface.f = "1";
    if (surface.g.empty()) surface.g = "z";
  } else {
    if (!surface.f.empty() || !surface.g.empty())
      throw ConfigError("surface.f and surface.g apply only to the 'weierstrass' surface");
    for (const auto& [key, value] : surface.params) {
      const bool extra_d = surface.name == "enneper_andrade" && key == "d";
      if (!it->second.count(key) && !extra_d)
        throw ConfigError("unknown key 'surface.params." + key + "' for " + surface.name);
    }
    for (const auto& [key, value] : it->second) surface.params.try_emplace(key, value);
    if (surface.name == "enneper_andrade")
      surface.params.try_emplace("d", surface.params["r1"] - surface.params["r2"]);
  }

  if (probe.rays.empty()) probe.rays = {"pi/4", "3*pi/4", "5*pi/4", "7*pi/4"};
  probe.angles.clear();
  for (const json& r : probe.rays) probe.angles.push_back(evaluate_angle(r));
  if (!(probe.T0 > 0.0) || !(probe.ratio > 1.0) || probe.count < 2)
    throw ConfigError("probe: need T0 > 0, ratio > 1, count >= 2");
  if (probe.curve.n < 2 || !(probe.curve.s1 > probe.curve.s0)) throw ConfigError("probe.curve: empty range");

  if (!(barrier.delta > 0.0)) throw ConfigError("barrier.delta must be positive");
  if (barrier.n && *barrier.n < 2) throw ConfigError("barrier.n must be at least 2");

  StochasticBlock& s = stochastic;
  std::size_t n = 0;
  double T = 0.0;
  if (s.experiment == "variance") {
    n = 10000, T = 4.0;
  } else if (s.experiment == "revisit") {
    n = 2000, T = 100.0;
  } else if (s.experiment == "time_change" || s.experiment == "gaussian_time_change") {
    n = 1000, T = 1.0;
  } else if (s.experiment == "hits") {
    n = 1000, T = 40.0;
    if (s.eps_list.empty()) s.eps_list = {0.4, 0.2, 0.1};
    if (s.plane != "crossing" && s.plane != "parallel") throw ConfigError("stochastic.plane: crossing or parallel");
  } else {
    throw ConfigError("stochastic.experiment: unknown experiment '" + s.experiment + "'");
  }
  if (s.n_paths == 0) s.n_paths = n;
  if (s.T == 0.0) s.T = T;
  if (!(s.T > 0.0)) throw ConfigError("stochastic.T must be positive");
  if (s.h && !(*s.h > 0.0)) throw ConfigError("stochastic.h must be positive");
  if (s.dim != 2 && s.dim != 3) throw ConfigError("stochastic.dim must be 2 or 3");
  if (s.dim == 3 && s.experiment != "variance" && s.experiment != "revisit")
    throw ConfigError("stochastic.dim = 3 is only a control for variance and revisit");

  for (const std::string& f : output.formats)
    if (f != "csv" && f != "obj") throw ConfigError("output.formats: unknown format '" + f + "'");
}

json RunConfig::to_json() const {
  json doc;
  json surf = {{"name", surface.name}, {"params", json::object()}};
  for (const auto& [k, v] : surface.params) surf["params"][k] = v;
  if (surface.name == "weierstrass") {
    surf["f"] = surface.f;
    surf["g"] = surface.g;
    surf["base"] = {surface.base_re, surface.base_im};
  }
  doc["surface"] = surf;

  const GridBlock& g = probe.grid;
  doc["probe"] = {{"grid", {{"u0", g.u0}, {"u1", g.u1}, {"v0", g.v0}, {"v1", g.v1}, {"nu", g.nu}, {"nv", g.nv}}},
                  {"rays", probe.rays},
                  {"T0", probe.T0},
                  {"ratio", probe.ratio},
                  {"count", probe.count},
                  {"cauchy_tol", probe.cauchy_tol},
                  {"curve", {{"s0", probe.curve.s0}, {"s1", probe.curve.s1}, {"n", probe.curve.n}}}};

  doc["barrier"] = {{"scenario", barrier.scenario},
                    {"n", opt(barrier.n)},
                    {"delta", barrier.delta},
                    {"epsilon", opt(barrier.epsilon)},
                    {"c", opt(barrier.c)},
                    {"boundary",
                     {{"nu", barrier.boundary_nu}, {"nv", barrier.boundary_nv}, {"samples", barrier.boundary_samples}}}};

  const StochasticBlock& s = stochastic;
  doc["stochastic"] = {{"experiment", s.experiment}, {"seed", s.seed},        {"n_paths", s.n_paths},
                       {"h", opt(s.h)},              {"T", s.T},              {"dim", s.dim},
                       {"disk_radius", s.disk_radius}, {"revisit_gap", s.revisit_gap}, {"eps_list", s.eps_list},
                       {"plane", s.plane},           {"r1", s.r1},            {"r2", s.r2}};

  doc["output"] = {{"directory", output.directory}, {"formats", output.formats}};
  return doc;
}

}  // namespace halfspace::cli
