#pragma once

#include <Eigen/Geometry>
#include <array>
#include <iosfwd>
#include <vector>

#include "halfspace/surfgeo/surface.hpp"

namespace halfspace::surfgeo {

using Face = std::array<int, 3>;

/// Closest point on triangle (a, b, c) to p; barycentric weights in `bary`.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, Vec3* bary = nullptr);

/// Triangle soup with vertex normals and a bounding-volume hierarchy for
/// nearest-point queries. Immutable after construction.
class MeshIndex {
 public:
  struct Hit {
    int face = -1;
    Vec3 point = Vec3::Zero();
    Vec3 bary = Vec3::Zero();
    double distance = 0.0;
  };

  struct Node {
    Eigen::AlignedBox3d box;
    int left = -1;   // child node indices, -1 for leaves
    int right = -1;
    int first = 0;   // range into the face order for leaves
    int count = 0;
  };

  /// Missing (or zero) vertex normals default to area-weighted face normals. `uvs`, when
  /// given, records the parameter point each vertex was sampled from.
  /// `curvatures`, when given, holds (k1, k2) per vertex with respect to the
  /// vertex normal.
  MeshIndex(std::vector<Vec3> vertices, std::vector<Face> faces, std::vector<Vec3> normals = {},
            std::vector<Vec2> uvs = {}, std::vector<Vec2> curvatures = {});

  Hit nearest(const Vec3& y) const;
  /// Every face whose closest point lies within `radius` of y.
  std::vector<Hit> within(const Vec3& y, double radius) const;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Vec3>& normals() const { return normals_; }
  const std::vector<Vec2>& uvs() const { return uvs_; }
  const std::vector<Vec2>& curvatures() const { return curvatures_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& face_order() const { return order_; }

  double max_edge_length() const;
  /// Normal at a hit, interpolated from vertex normals.
  Vec3 interpolated_normal(const Hit& hit) const;
  /// Parameter point at a hit, interpolated from vertex uvs (requires uvs).
  Vec2 interpolated_uv(const Hit& hit) const;
  /// (k1, k2) at a hit, interpolated from vertex values (requires curvatures).
  Vec2 interpolated_curvatures(const Hit& hit) const;

  /// Indexed triangle text format: "v x y z", optional "vn x y z",
  /// "f i j k" with 1-based indices.
  void write_obj(std::ostream& out) const;
  static MeshIndex read_obj(std::istream& in);

 private:
  int build(int first, int count);

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Vec3> normals_;
  std::vector<Vec2> uvs_;
  std::vector<Vec2> curvatures_;
  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<Vec3> centroids_;
};

/// Regular (nu x nv) vertex grid over the closed surface domain, two
/// triangles per cell. Seam vertices of periodic directions are duplicated so
/// that per-vertex uvs interpolate continuously inside every triangle.
MeshIndex tessellate(const ParametricSurface& surface, int nu, int nv);

}  // namespace halfspace::surfgeo
