#include "halfspace/weierstrass/export.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>

#include "halfspace/errors.hpp"

namespace halfspace::weierstrass {
namespace {

void put(std::ostream& out, double x, bool last = false) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);  // no "-0"
  out << buf << (last ? '\n' : ',');
}

void check_grid(const GridSpec& g) {
  if (g.nu < 2 || g.nv < 2) throw ContractViolation("grid needs at least 2 points per direction");
}

}  // namespace

Vec2 GridSpec::at(int i, int j) const {
  return {u0 + (u1 - u0) * i / (nu - 1), v0 + (v1 - v0) * j / (nv - 1)};
}

SurfaceJet generic_jet(const surfgeo::ParametricSurface& surface, const Vec2& uv) {
  if (const auto* conformal = dynamic_cast<const ConformalImmersion*>(&surface))
    return conformal->surface_jet(cplx(uv.x(), uv.y()));
  const surfgeo::Jet2 j = surface.jet(uv);
  const surfgeo::FundamentalForms ff = surfgeo::fundamental_forms(j);
  SurfaceJet out;
  out.position = j.p;
  out.xu = j.pu;
  out.xv = j.pv;
  out.normal = ff.normal;
  out.K = ff.K;
  out.H = ff.H;
  const double E = ff.first(0, 0), F = ff.first(0, 1), G = ff.first(1, 1);
  out.lambda = std::pow(E * G - F * F, 0.25);
  out.residual = 0.25 * std::hypot(E - G, 2.0 * F);
  return out;
}

ExportStats write_jet_csv(std::ostream& out, const surfgeo::ParametricSurface& surface, const GridSpec& grid) {
  check_grid(grid);
  ExportStats stats;
  out << "u,v,x,y,z,lambda,K,H,residual\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      const Vec2 uv = grid.at(i, j);
      ++stats.points;
      SurfaceJet jet;
      bool ok = true;
      try {
        jet = generic_jet(surface, uv);
        ok = jet.position.allFinite() && std::isfinite(jet.K) && std::isfinite(jet.H);
      } catch (const std::exception&) {
        ok = false;
      }
      put(out, uv.x());
      put(out, uv.y());
      if (!ok) {
        ++stats.failures;
        for (int k = 0; k < 6; ++k) put(out, nan);
        put(out, nan, true);
        continue;
      }
      stats.max_residual = std::max(stats.max_residual, jet.residual);
      stats.max_abs_H = std::max(stats.max_abs_H, std::abs(jet.H));
      put(out, jet.position.x());
      put(out, jet.position.y());
      put(out, jet.position.z());
      put(out, jet.lambda);
      put(out, jet.K);
      put(out, jet.H);
      put(out, jet.residual, true);
    }
  }
  return stats;
}

ExportStats write_mesh_obj(std::ostream& out, const surfgeo::ParametricSurface& surface, const GridSpec& grid) {
  check_grid(grid);
  ExportStats stats;
  std::vector<char> good(static_cast<std::size_t>(grid.nu) * grid.nv, 1);
  char buf[160];
  for (int j = 0; j < grid.nv; ++j) {
    for (int i = 0; i < grid.nu; ++i) {
      ++stats.points;
      Vec3 p = Vec3::Zero();
      try {
        p = surface.position(grid.at(i, j));
      } catch (const std::exception&) {
        p = Vec3(std::nan(""), 0.0, 0.0);
      }
      if (!p.allFinite()) {
        good[j * grid.nu + i] = 0;
        ++stats.failures;
        p = Vec3::Zero();
      }
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
      out << buf;
    }
  }
  for (int j = 0; j + 1 < grid.nv; ++j) {
    for (int i = 0; i + 1 < grid.nu; ++i) {
      const int a = j * grid.nu + i, b = a + 1, c = a + grid.nu, d = c + 1;
      if (good[a] && good[b] && good[d]) out << "f " << a + 1 << ' ' << b + 1 << ' ' << d + 1 << '\n';
      if (good[a] && good[d] && good[c]) out << "f " << a + 1 << ' ' << d + 1 << ' ' << c + 1 << '\n';
    }
  }
  return stats;
}

void write_curve_csv(std::ostream& out, const ConformalImmersion& surface, const std::function<cplx(double)>& curve,
                     const std::vector<double>& samples) {
  out << "s,x,y,z\n";
  for (double s : samples) {
    const Vec3 p = surface.point(curve(s));
    put(out, s);
    put(out, p.x());
    put(out, p.y());
    put(out, p.z(), true);
  }
}

}  // namespace halfspace::weierstrass
