#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace poursim::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct NonWatertightError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvertedOrientationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MeshValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Watertight triangle mesh with outward-oriented faces. Vertices are in
/// consistent model units per mesh; faces index into `vertices`.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  std::pair<Vec3, Vec3> bounding_box() const;
  double bbox_diagonal() const;
  Vec3 vertex_centroid() const;

  TriangleMesh translated(const Vec3& t) const;
  TriangleMesh rotated(const Mat3& r, const Vec3& center) const;
  TriangleMesh scaled(double factor) const;
};

/// Oriented half-space boundary {p : normal . p = offset}. "Below" means
/// normal . p <= offset.
struct Plane {
  Vec3 normal;
  double offset = 0.0;

  Plane(const Vec3& n, double off);
  static Plane horizontal(double z) { return Plane(Vec3::UnitZ(), z); }

  double signed_distance(const Vec3& p) const { return normal.dot(p) - offset; }
};

/// Rotation about a horizontal axis by an angle in [0, 180] degrees.
struct Rotation {
  Vec3 axis;
  double angle_deg = 0.0;

  Rotation(const Vec3& horizontal_axis, double degrees);
  Mat3 matrix() const;
};

struct MeshValidationReport {
  // Undirected edges not shared by exactly two faces (boundary or >2-fan).
  std::vector<std::pair<int, int>> non_manifold_edges;
  // Undirected edges whose two incident faces traverse them in the same
  // direction.
  std::vector<std::pair<int, int>> inconsistent_edges;
  // Faces with a repeated vertex or area below 1e-12 * bbox_diagonal^2.
  std::vector<int> degenerate_faces;
  // Faces referencing a vertex index outside [0, vertex_count).
  std::vector<int> out_of_range_faces;
  double signed_volume = 0.0;
  bool non_positive_volume = false;

  bool ok() const {
    return non_manifold_edges.empty() && inconsistent_edges.empty() &&
           degenerate_faces.empty() && out_of_range_faces.empty() &&
           !non_positive_volume;
  }
  std::string summary() const;
};

MeshValidationReport validate_mesh(const TriangleMesh& mesh);

/// Throws NonWatertightError unless every undirected edge is shared by
/// exactly two faces with opposite traversal directions.
void require_watertight(const TriangleMesh& mesh);

/// Enclosed volume by the divergence theorem (signed tetrahedra). Positive
/// for outward orientation; throws on non-watertight or inverted input.
double mesh_volume(const TriangleMesh& mesh);

}  // namespace poursim::geometry
