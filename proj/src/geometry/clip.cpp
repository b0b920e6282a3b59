#include "poursim/geometry/clip.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace poursim::geometry {

namespace {

// Symbolic identity of a point on the cut plane: either an original mesh
// vertex ((v, -1)) or the intersection of the plane with the undirected
// edge (min, max). Matching on identity instead of coordinates makes cap
// stitching exact.
struct CutId {
  int a, b;
  bool operator<(const CutId& o) const {
    return a != o.a ? a < o.a : b < o.b;
  }
  bool operator==(const CutId& o) const { return a == o.a && b == o.b; }
};

CutId vertex_id(int v) { return {v, -1}; }
CutId edge_id(int u, int v) { return u < v ? CutId{u, v} : CutId{v, u}; }

struct ClipVertex {
  Vec3 point;
  CutId id;
  bool on_plane;
};

struct Segment {
  CutId tail, head;
  Vec3 tail_pt, head_pt;
};

// Intersection parameter computed in canonical edge order so both faces
// sharing the edge produce bit-identical points.
Vec3 edge_plane_point(const TriangleMesh& mesh, int u, int v, double du,
                      double dv) {
  if (v < u) {
    std::swap(u, v);
    std::swap(du, dv);
  }
  const double t = du / (du - dv);
  return mesh.vertices[u] + t * (mesh.vertices[v] - mesh.vertices[u]);
}

}  // namespace

double clip_volume_below(const TriangleMesh& mesh, const Plane& plane) {
  require_watertight(mesh);
  if (mesh.faces.empty()) return 0.0;

  const double eps = 1e-9 * mesh.bbox_diagonal();
  std::vector<double> dist(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) {
    const double d = plane.signed_distance(mesh.vertices[i]);
    dist[i] = std::abs(d) <= eps ? 0.0 : d;
  }

  auto [lo, hi] = mesh.bounding_box();
  const Vec3 apex = 0.5 * (lo + hi);
  auto tet6 = [&apex](const Vec3& a, const Vec3& b, const Vec3& c) {
    return (a - apex).dot((b - apex).cross(c - apex));
  };

  double six_vol = 0.0;
  std::vector<Segment> segments;
  std::vector<ClipVertex> poly;
  poly.reserve(4);

  for (const auto& f : mesh.faces) {
    // Half-space clip of one triangle. On-plane vertices count as kept, so
    // a cut never introduces an intersection point at a snapped vertex.
    poly.clear();
    for (int i = 0; i < 3; ++i) {
      const int p = f[i];
      const int c = f[(i + 1) % 3];
      const double dp = dist[p];
      const double dc = dist[c];
      if (dc < 0.0) {
        if (dp > 0.0) {
          poly.push_back({edge_plane_point(mesh, p, c, dp, dc),
                          edge_id(p, c), true});
        }
        poly.push_back({mesh.vertices[c], vertex_id(c), false});
      } else if (dc == 0.0) {
        poly.push_back({mesh.vertices[c], vertex_id(c), true});
      } else if (dp < 0.0) {
        poly.push_back({edge_plane_point(mesh, p, c, dp, dc), edge_id(p, c),
                        true});
      }
    }
    if (poly.size() < 3) continue;

    for (size_t i = 1; i + 1 < poly.size(); ++i) {
      six_vol += tet6(poly[0].point, poly[i].point, poly[i + 1].point);
    }
    for (size_t i = 0; i < poly.size(); ++i) {
      const auto& u = poly[i];
      const auto& v = poly[(i + 1) % poly.size()];
      if (u.on_plane && v.on_plane) {
        segments.push_back({u.id, v.id, u.point, v.point});
      }
    }
  }

  // Opposite-direction segment pairs come from kept faces on both sides of
  // a plane-lying edge; they are interior, not cap boundary.
  std::map<std::pair<CutId, CutId>, int> net;
  std::map<std::pair<CutId, CutId>, Segment> rep;
  for (const auto& s : segments) {
    net[{s.tail, s.head}] += 1;
    net[{s.head, s.tail}] += 0;
    rep.insert({{s.tail, s.head}, s});
  }
  std::map<CutId, Segment> outgoing;  // keyed by reversed tail = raw head
  for (const auto& [key, count] : net) {
    const int opposite = net[{key.second, key.first}];
    const int surplus = count - opposite;
    if (surplus <= 0) continue;
    if (surplus > 1) {
      throw DegenerateCapError("duplicate cut segments on the clip plane");
    }
    const Segment& s = rep.at(key);
    // Cap loops traverse the kept-surface boundary in reverse, closing the
    // clipped solid with outward-facing cap triangles.
    Segment reversed{s.head, s.tail, s.head_pt, s.tail_pt};
    if (!outgoing.emplace(reversed.tail, reversed).second) {
      throw DegenerateCapError(
          "cut cross-section pinches at a shared point; perturb the input");
    }
  }

  while (!outgoing.empty()) {
    const CutId start = outgoing.begin()->first;
    std::vector<Vec3> loop;
    CutId cur = start;
    do {
      auto it = outgoing.find(cur);
      if (it == outgoing.end()) {
        throw DegenerateCapError("cut segments do not close into a loop");
      }
      loop.push_back(it->second.tail_pt);
      cur = it->second.head;
      outgoing.erase(it);
    } while (!(cur == start));

    if (loop.size() < 3) continue;
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : loop) centroid += p;
    centroid /= static_cast<double>(loop.size());
    for (size_t i = 0; i < loop.size(); ++i) {
      six_vol += tet6(centroid, loop[i], loop[(i + 1) % loop.size()]);
    }
  }

  return std::max(six_vol / 6.0, 0.0);
}

}  // namespace poursim::geometry
