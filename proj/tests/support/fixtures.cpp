#include "support/fixtures.hpp"

#include <cmath>

namespace fixtures {

TriangleMesh box(double ax, double ay, double az) {
  TriangleMesh m;
  m.vertices = {{0, 0, 0},   {ax, 0, 0},  {ax, ay, 0}, {0, ay, 0},
                {0, 0, az},  {ax, 0, az}, {ax, ay, az}, {0, ay, az}};
  m.faces = {{0, 2, 1}, {0, 3, 2},   // bottom (-z)
             {4, 5, 6}, {4, 6, 7},   // top (+z)
             {0, 1, 5}, {0, 5, 4},   // front (-y)
             {1, 2, 6}, {1, 6, 5},   // right (+x)
             {2, 3, 7}, {2, 7, 6},   // back (+y)
             {3, 0, 4}, {3, 4, 7}};  // left (-x)
  return m;
}

TriangleMesh unit_cube() { return box(1, 1, 1); }

CupFixture box_cup(double a, double b, double h) {
  return {box(a, b, h), {2, 3}};
}

CupFixture cylinder_cup(double r, double h, int segments) {
  const int n = segments;
  TriangleMesh m;
  m.vertices.emplace_back(0, 0, 0);  // bottom center
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi), 0.0);
  }
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi), h);
  }
  m.vertices.emplace_back(0, 0, h);  // top center

  auto bot = [&](int k) { return 1 + (k % n); };
  auto top = [&](int k) { return 1 + n + (k % n); };
  const int top_center = 2 * n + 1;

  for (int k = 0; k < n; ++k) m.faces.push_back({0, bot(k + 1), bot(k)});
  for (int k = 0; k < n; ++k) {
    m.faces.push_back({bot(k), bot(k + 1), top(k + 1)});
    m.faces.push_back({bot(k), top(k + 1), top(k)});
  }
  CupFixture cup;
  for (int k = 0; k < n; ++k) {
    cup.cap_faces.push_back(static_cast<int>(m.faces.size()));
    m.faces.push_back({top_center, top(k), top(k + 1)});
  }
  cup.mesh = std::move(m);
  return cup;
}

CupFixture cone_cup(double r, double h, int segments) {
  const int n = segments;
  TriangleMesh m;
  m.vertices.emplace_back(0, 0, 0);  // apex
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * M_PI * k / n;
    m.vertices.emplace_back(r * std::cos(phi), r * std::sin(phi), h);
  }
  m.vertices.emplace_back(0, 0, h);  // top center

  auto ring = [&](int k) { return 1 + (k % n); };
  const int top_center = n + 1;

  for (int k = 0; k < n; ++k) m.faces.push_back({0, ring(k + 1), ring(k)});
  CupFixture cup;
  for (int k = 0; k < n; ++k) {
    cup.cap_faces.push_back(static_cast<int>(m.faces.size()));
    m.faces.push_back({top_center, ring(k), ring(k + 1)});
  }
  cup.mesh = std::move(m);
  return cup;
}

TriangleMesh octahedron(const Vec3& center, double radius) {
  TriangleMesh m;
  m.vertices = {center + radius * Vec3::UnitX(), center - radius * Vec3::UnitX(),
                center + radius * Vec3::UnitY(), center - radius * Vec3::UnitY(),
                center + radius * Vec3::UnitZ(), center - radius * Vec3::UnitZ()};
  m.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return m;
}

TriangleMesh double_octahedron() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0},                              // shared vertex
                {-2, 0, 0}, {-1, 1, 0}, {-1, -1, 0},    // left -x, +y, -y
                {-1, 0, 1}, {-1, 0, -1},                // left +z, -z
                {2, 0, 0},  {1, 1, 0},  {1, -1, 0},     // right +x, +y, -y
                {1, 0, 1},  {1, 0, -1}};                // right +z, -z
  // left octahedron with +x vertex merged into 0
  m.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5},
             // right octahedron with -x vertex merged into 0
             {6, 7, 9}, {7, 0, 9}, {0, 8, 9}, {8, 6, 9},
             {7, 6, 10}, {0, 7, 10}, {8, 0, 10}, {6, 8, 10}};
  return m;
}

TriangleMesh cube_missing_face() {
  TriangleMesh m = unit_cube();
  m.faces.pop_back();
  return m;
}

TriangleMesh cube_flipped_face() {
  TriangleMesh m = unit_cube();
  std::swap(m.faces[5][1], m.faces[5][2]);
  return m;
}

TriangleMesh inverted_cube() {
  TriangleMesh m = unit_cube();
  for (auto& f : m.faces) std::swap(f[1], f[2]);
  return m;
}

TriangleMesh collinear_pillow() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  m.faces = {{0, 1, 2}, {2, 1, 0}};
  return m;
}

double ngon_area(double r, int segments) {
  return 0.5 * segments * r * r * std::sin(2.0 * M_PI / segments);
}

double cylinder_cup_volume(double r, double h, int segments) {
  return ngon_area(r, segments) * h;
}

double cone_cup_volume(double r, double h, int segments) {
  return ngon_area(r, segments) * h / 3.0;
}

double cylinder_cup_stable(double r, double h, int segments,
                           double theta_deg) {
  const double tan_t = std::tan(theta_deg * M_PI / 180.0);
  // air wedge above the plane through the lip: depth tan(theta) * (r - x),
  // centroid of the n-gon section at x = 0
  return ngon_area(r, segments) * (h - r * tan_t);
}

double box_cup_stable(double a, double b, double h, double theta_deg) {
  if (theta_deg >= 90.0) return 0.0;
  const double tan_t = std::tan(theta_deg * M_PI / 180.0);
  if (tan_t <= h / a) return b * (a * h - 0.5 * a * a * tan_t);
  return 0.5 * b * h * h / tan_t;
}

double diamond_clip_volume(double u) {
  // rotated square profile: width sqrt(2) - 2|u| at signed height u
  const double half = std::sqrt(2.0) / 2.0;
  if (u <= -half) return 0.0;
  if (u >= half) return 1.0;
  if (u <= 0.0) return std::sqrt(2.0) * u + u * u + 0.5;
  return 1.0 - (std::sqrt(2.0) * (-u) + u * u + 0.5);
}

}  // namespace fixtures
