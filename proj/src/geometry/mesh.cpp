#include "poursim/geometry/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

namespace poursim::geometry {

namespace {

constexpr double kUnitTol = 1e-9;

struct EdgeKey {
  int a, b;
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
  size_t operator()(const EdgeKey& k) const {
    size_t h1 = std::hash<int>()(k.a);
    size_t h2 = std::hash<int>()(k.b);
    return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
  }
};

struct EdgeUse {
  int count = 0;     // incident faces
  int net_dir = 0;   // +1 per a->b traversal, -1 per b->a
};

EdgeKey edge_key(int u, int v) { return u < v ? EdgeKey{u, v} : EdgeKey{v, u}; }

using EdgeMap = std::unordered_map<EdgeKey, EdgeUse, EdgeKeyHash>;

// Accumulates edge incidences over structurally valid faces only.
EdgeMap build_edge_map(const TriangleMesh& mesh) {
  EdgeMap edges;
  edges.reserve(mesh.faces.size() * 2);
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    bool in_range = f[0] >= 0 && f[0] < nv && f[1] >= 0 && f[1] < nv &&
                    f[2] >= 0 && f[2] < nv;
    bool distinct = f[0] != f[1] && f[1] != f[2] && f[0] != f[2];
    if (!in_range || !distinct) continue;
    for (int i = 0; i < 3; ++i) {
      const int u = f[i];
      const int v = f[(i + 1) % 3];
      auto& use = edges[edge_key(u, v)];
      use.count += 1;
      use.net_dir += (u < v) ? +1 : -1;
    }
  }
  return edges;
}

double signed_volume(const TriangleMesh& mesh, const Vec3& apex) {
  double six_vol = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]] - apex;
    const Vec3 b = mesh.vertices[f[1]] - apex;
    const Vec3 c = mesh.vertices[f[2]] - apex;
    six_vol += a.dot(b.cross(c));
  }
  return six_vol / 6.0;
}

}  // namespace

std::pair<Vec3, Vec3> TriangleMesh::bounding_box() const {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

double TriangleMesh::bbox_diagonal() const {
  if (vertices.empty()) return 0.0;
  auto [lo, hi] = bounding_box();
  return (hi - lo).norm();
}

Vec3 TriangleMesh::vertex_centroid() const {
  Vec3 c = Vec3::Zero();
  for (const auto& v : vertices) c += v;
  return vertices.empty() ? c : Vec3(c / static_cast<double>(vertices.size()));
}

TriangleMesh TriangleMesh::translated(const Vec3& t) const {
  TriangleMesh out = *this;
  for (auto& v : out.vertices) v += t;
  return out;
}

TriangleMesh TriangleMesh::rotated(const Mat3& r, const Vec3& center) const {
  TriangleMesh out = *this;
  for (auto& v : out.vertices) v = r * (v - center) + center;
  return out;
}

TriangleMesh TriangleMesh::scaled(double factor) const {
  TriangleMesh out = *this;
  for (auto& v : out.vertices) v *= factor;
  return out;
}

Plane::Plane(const Vec3& n, double off) : normal(n), offset(off) {
  if (std::abs(normal.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("plane normal must be a unit vector");
  }
}

Rotation::Rotation(const Vec3& horizontal_axis, double degrees)
    : axis(horizontal_axis), angle_deg(degrees) {
  if (std::abs(axis.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("rotation axis must be a unit vector");
  }
  if (std::abs(axis.z()) > kUnitTol) {
    throw std::invalid_argument("rotation axis must be horizontal");
  }
  if (!(angle_deg >= 0.0 && angle_deg <= 180.0)) {
    throw std::invalid_argument("rotation angle must be in [0, 180] degrees");
  }
}

Mat3 Rotation::matrix() const {
  return Eigen::AngleAxisd(angle_deg * M_PI / 180.0, axis).toRotationMatrix();
}

std::string MeshValidationReport::summary() const {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "non-manifold edges: %zu, inconsistent edges: %zu, "
                "degenerate faces: %zu, out-of-range faces: %zu, volume: %g",
                non_manifold_edges.size(), inconsistent_edges.size(),
                degenerate_faces.size(), out_of_range_faces.size(),
                signed_volume);
  return buf;
}

MeshValidationReport validate_mesh(const TriangleMesh& mesh) {
  MeshValidationReport report;
  const int nv = static_cast<int>(mesh.vertices.size());
  const double diag = mesh.bbox_diagonal();
  const double area_floor = 1e-12 * diag * diag;

  for (int fi = 0; fi < static_cast<int>(mesh.faces.size()); ++fi) {
    const auto& f = mesh.faces[fi];
    if (f[0] < 0 || f[0] >= nv || f[1] < 0 || f[1] >= nv || f[2] < 0 ||
        f[2] >= nv) {
      report.out_of_range_faces.push_back(fi);
      continue;
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      report.degenerate_faces.push_back(fi);
      continue;
    }
    const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
    const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
    if (0.5 * e1.cross(e2).norm() < area_floor) {
      report.degenerate_faces.push_back(fi);
    }
  }

  for (const auto& [key, use] : build_edge_map(mesh)) {
    if (use.count != 2) {
      report.non_manifold_edges.emplace_back(key.a, key.b);
    } else if (use.net_dir != 0) {
      report.inconsistent_edges.emplace_back(key.a, key.b);
    }
  }

  report.signed_volume = signed_volume(mesh, mesh.vertex_centroid());
  report.non_positive_volume = report.signed_volume <= 0.0;
  return report;
}

void require_watertight(const TriangleMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& f : mesh.faces) {
    if (f[0] < 0 || f[0] >= nv || f[1] < 0 || f[1] >= nv || f[2] < 0 ||
        f[2] >= nv) {
      throw NonWatertightError("mesh face references an out-of-range vertex");
    }
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
      throw NonWatertightError("mesh face references a repeated vertex");
    }
  }
  for (const auto& [key, use] : build_edge_map(mesh)) {
    if (use.count != 2 || use.net_dir != 0) {
      throw NonWatertightError(
          "mesh edge (" + std::to_string(key.a) + ", " + std::to_string(key.b) +
          ") is not shared by exactly two consistently wound faces");
    }
  }
}

double mesh_volume(const TriangleMesh& mesh) {
  require_watertight(mesh);
  auto [lo, hi] = mesh.bounding_box();
  const double vol = signed_volume(mesh, 0.5 * (lo + hi));
  if (vol <= 0.0) {
    throw InvertedOrientationError("mesh signed volume is not positive");
  }
  return vol;
}

}  // namespace poursim::geometry
