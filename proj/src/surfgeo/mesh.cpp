#include "halfspace/surfgeo/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "halfspace/errors.hpp"

namespace halfspace::surfgeo {
namespace {

constexpr int kLeafSize = 4;

Eigen::AlignedBox3d triangle_box(const Vec3& a, const Vec3& b, const Vec3& c) {
  Eigen::AlignedBox3d box(a);
  box.extend(b);
  box.extend(c);
  return box;
}

double box_distance_sq(const Eigen::AlignedBox3d& box, const Vec3& p) {
  return box.squaredExteriorDistance(p);
}

}  // namespace

// Region classification from Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, Vec3* bary) {
  auto out = [&](double u, double v, double w) {
    if (bary) *bary = Vec3(u, v, w);
    return Vec3(u * a + v * b + w * c);
  };
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return out(1.0, 0.0, 0.0);

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return out(0.0, 1.0, 0.0);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return out(1.0 - v, v, 0.0);
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return out(0.0, 0.0, 1.0);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return out(1.0 - w, 0.0, w);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return out(0.0, 1.0 - w, w);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return out(1.0 - v - w, v, w);
}

MeshIndex::MeshIndex(std::vector<Vec3> vertices, std::vector<Face> faces, std::vector<Vec3> normals,
                     std::vector<Vec2> uvs, std::vector<Vec2> curvatures)
    : vertices_(std::move(vertices)),
      faces_(std::move(faces)),
      normals_(std::move(normals)),
      uvs_(std::move(uvs)),
      curvatures_(std::move(curvatures)) {
  const int nv = static_cast<int>(vertices_.size());
  for (const Face& f : faces_)
    for (int i : f)
      if (i < 0 || i >= nv) throw ContractViolation("mesh face references a missing vertex");
  if (!uvs_.empty() && static_cast<int>(uvs_.size()) != nv)
    throw ContractViolation("mesh uv count differs from vertex count");
  if (!curvatures_.empty() && static_cast<int>(curvatures_.size()) != nv)
    throw ContractViolation("mesh curvature count differs from vertex count");

  if (static_cast<int>(normals_.size()) != nv) normals_.assign(nv, Vec3::Zero());
  std::vector<Vec3> accumulated(nv, Vec3::Zero());
  for (const Face& f : faces_) {
    // Cross product length is twice the area, so this is area weighting.
    const Vec3 n = (vertices_[f[1]] - vertices_[f[0]]).cross(vertices_[f[2]] - vertices_[f[0]]);
    for (int i : f) accumulated[i] += n;
  }
  for (int i = 0; i < nv; ++i) {
    if (normals_[i].squaredNorm() > 0.0) {
      normals_[i].normalize();
    } else if (accumulated[i].squaredNorm() > 0.0) {
      normals_[i] = accumulated[i].normalized();
    }
  }

  centroids_.reserve(faces_.size());
  for (const Face& f : faces_) centroids_.push_back((vertices_[f[0]] + vertices_[f[1]] + vertices_[f[2]]) / 3.0);
  order_.resize(faces_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  nodes_.reserve(2 * faces_.size() / kLeafSize + 2);
  if (!faces_.empty()) build(0, static_cast<int>(faces_.size()));
  centroids_.clear();
  centroids_.shrink_to_fit();
}

int MeshIndex::build(int first, int count) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d centroid_box;
  for (int k = first; k < first + count; ++k) {
    const Face& f = faces_[order_[k]];
    box.extend(triangle_box(vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]));
    centroid_box.extend(centroids_[order_[k]]);
  }
  nodes_[index].box = box;
  if (count <= kLeafSize) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  int axis = 0;
  centroid_box.sizes().maxCoeff(&axis);
  const int half = count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + first + half, order_.begin() + first + count,
                   [&](int a, int b) { return centroids_[a](axis) < centroids_[b](axis); });
  const int left = build(first, half);
  const int right = build(first + half, count - half);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

MeshIndex::Hit MeshIndex::nearest(const Vec3& y) const {
  Hit best;
  if (nodes_.empty()) throw ContractViolation("nearest-point query on an empty mesh");
  double best_sq = std::numeric_limits<double>::infinity();
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance_sq(node.box, y) > best_sq) continue;
    if (node.left < 0) {
      for (int k = node.first; k < node.first + node.count; ++k) {
        const int fi = order_[k];
        const Face& f = faces_[fi];
        Vec3 bary;
        const Vec3 q = closest_point_on_triangle(y, vertices_[f[0]], vertices_[f[1]], vertices_[f[2]], &bary);
        const double d = (q - y).squaredNorm();
        if (d < best_sq || (d == best_sq && fi < best.face)) {
          best_sq = d;
          best = {fi, q, bary, 0.0};
        }
      }
      continue;
    }
    const double dl = box_distance_sq(nodes_[node.left].box, y);
    const double dr = box_distance_sq(nodes_[node.right].box, y);
    // Push the farther child first so the nearer one is explored next.
    if (dl <= dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

std::vector<MeshIndex::Hit> MeshIndex::within(const Vec3& y, double radius) const {
  std::vector<Hit> hits;
  if (nodes_.empty()) return hits;
  const double r2 = radius * radius;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (box_distance_sq(node.box, y) > r2) continue;
    if (node.left < 0) {
      for (int k = node.first; k < node.first + node.count; ++k) {
        const int fi = order_[k];
        const Face& f = faces_[fi];
        Vec3 bary;
        const Vec3 q = closest_point_on_triangle(y, vertices_[f[0]], vertices_[f[1]], vertices_[f[2]], &bary);
        const double d = (q - y).norm();
        if (d <= radius) hits.push_back({fi, q, bary, d});
      }
      continue;
    }
    stack.push_back(node.left);
    stack.push_back(node.right);
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.face < b.face);
  });
  return hits;
}

double MeshIndex::max_edge_length() const {
  double m = 0.0;
  for (const Face& f : faces_)
    for (int k = 0; k < 3; ++k) m = std::max(m, (vertices_[f[k]] - vertices_[f[(k + 1) % 3]]).norm());
  return m;
}

Vec3 MeshIndex::interpolated_normal(const Hit& hit) const {
  const Face& f = faces_[hit.face];
  Vec3 n = hit.bary(0) * normals_[f[0]] + hit.bary(1) * normals_[f[1]] + hit.bary(2) * normals_[f[2]];
  if (n.squaredNorm() == 0.0) n = (vertices_[f[1]] - vertices_[f[0]]).cross(vertices_[f[2]] - vertices_[f[0]]);
  return n.normalized();
}

Vec2 MeshIndex::interpolated_uv(const Hit& hit) const {
  if (uvs_.empty()) throw ContractViolation("mesh carries no parameter coordinates");
  const Face& f = faces_[hit.face];
  return hit.bary(0) * uvs_[f[0]] + hit.bary(1) * uvs_[f[1]] + hit.bary(2) * uvs_[f[2]];
}

Vec2 MeshIndex::interpolated_curvatures(const Hit& hit) const {
  if (curvatures_.empty()) throw ContractViolation("mesh carries no vertex curvatures");
  const Face& f = faces_[hit.face];
  return hit.bary(0) * curvatures_[f[0]] + hit.bary(1) * curvatures_[f[1]] + hit.bary(2) * curvatures_[f[2]];
}

void MeshIndex::write_obj(std::ostream& out) const {
  char buf[160];
  for (const Vec3& v : vertices_) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const Vec3& n : normals_) {
    std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
    out << buf;
  }
  for (const Face& f : faces_) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

MeshIndex MeshIndex::read_obj(std::istream& in) {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<Face> faces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v" || tag == "vn") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw std::invalid_argument("malformed vertex on line " + std::to_string(line_no));
      (tag == "v" ? vertices : normals).emplace_back(x, y, z);
    } else if (tag == "f") {
      Face f;
      for (int k = 0; k < 3; ++k) {
        std::string item;
        if (!(ls >> item)) throw std::invalid_argument("face needs three indices on line " + std::to_string(line_no));
        // Accept "i", "i/j", "i//k"; only the vertex index matters here.
        f[k] = std::stoi(item.substr(0, item.find('/'))) - 1;
      }
      faces.push_back(f);
    }
  }
  if (!normals.empty() && normals.size() != vertices.size()) normals.clear();
  return MeshIndex(std::move(vertices), std::move(faces), std::move(normals));
}

MeshIndex tessellate(const ParametricSurface& surface, int nu, int nv) {
  if (nu < 2 || nv < 2) throw ContractViolation("tessellation needs at least 2x2 vertices");
  const ParamDomain d = surface.domain();
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<Vec2> uvs;
  std::vector<Vec2> curvatures;
  vertices.reserve(static_cast<std::size_t>(nu) * nv);
  for (int j = 0; j < nv; ++j) {
    for (int i = 0; i < nu; ++i) {
      const Vec2 uv(d.u0 + (d.u1 - d.u0) * i / (nu - 1), d.v0 + (d.v1 - d.v0) * j / (nv - 1));
      const Jet2 jet = surface.jet(uv);
      vertices.push_back(jet.p);
      uvs.push_back(uv);
      try {
        const FundamentalForms ff = fundamental_forms(jet);
        normals.push_back(ff.normal);
        curvatures.emplace_back(ff.k1, ff.k2);
      } catch (const DomainError&) {
        // Degenerate vertex (pole or branch point): area-weighted normal,
        // curvature left at zero.
        normals.push_back(Vec3::Zero());
        curvatures.emplace_back(0.0, 0.0);
      }
    }
  }
  std::vector<Face> faces;
  faces.reserve(2 * static_cast<std::size_t>(nu - 1) * (nv - 1));
  for (int j = 0; j + 1 < nv; ++j) {
    for (int i = 0; i + 1 < nu; ++i) {
      const int a = j * nu + i;
      const int b = a + 1;
      const int c = a + nu;
      const int e = c + 1;
      faces.push_back({a, b, e});
      faces.push_back({a, e, c});
    }
  }
  return MeshIndex(std::move(vertices), std::move(faces), std::move(normals), std::move(uvs),
                   std::move(curvatures));
}

}  // namespace halfspace::surfgeo
