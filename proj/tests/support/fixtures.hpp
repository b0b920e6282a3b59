#pragma once

#include <vector>

#include "poursim/geometry/mesh.hpp"

// Hand-built watertight meshes with known analytic volumes, used as test
// subjects and as oracles for the clipping and pouring code.
namespace fixtures {

using poursim::geometry::TriangleMesh;
using poursim::geometry::Vec3;

/// Axis-aligned box [0,ax] x [0,ay] x [0,az], 12 outward triangles.
/// Faces 2 and 3 are the top (z = az).
TriangleMesh box(double ax, double ay, double az);
TriangleMesh unit_cube();

/// Open-top container: the mesh stays watertight, cap_faces tags the faces
/// sealing the opening.
struct CupFixture {
  TriangleMesh mesh;
  std::vector<int> cap_faces;
};

/// Box cup [0,a] x [0,b] x [0,h]; cap = the two top triangles.
CupFixture box_cup(double a, double b, double h);

/// Regular n-gon prism cup; first rim vertex at angle 0 (+x). Bottom and
/// top are center-vertex fans; the top fan is the cap.
CupFixture cylinder_cup(double r, double h, int segments);

/// Apex-down cone cup: apex at the origin, n-gon opening of radius r at
/// z = h capped by a center-vertex fan.
CupFixture cone_cup(double r, double h, int segments);

/// Regular octahedron: vertices center +- radius * e_i, 8 faces.
TriangleMesh octahedron(const Vec3& center, double radius);

/// Two unit octahedra sharing one merged vertex at the origin. Watertight
/// edge-wise, but the z = 0 cross-section pinches at the shared vertex.
TriangleMesh double_octahedron();

// Deliberately broken variants of the unit cube.
TriangleMesh cube_missing_face();   // one face removed: 3 boundary edges
TriangleMesh cube_flipped_face();   // one face reversed: 3 inconsistent edges
TriangleMesh inverted_cube();       // all faces reversed: negative volume
/// Two coincident triangles over collinear points: watertight edges, zero
/// area everywhere.
TriangleMesh collinear_pillow();

/// Exact volume of the tessellated cylinder_cup / cone_cup solids.
double ngon_area(double r, int segments);
double cylinder_cup_volume(double r, double h, int segments);
double cone_cup_volume(double r, double h, int segments);

/// Exact max stable volume of cylinder_cup tilted by theta about +y
/// (valid while the air wedge stays above the floor: 2 r tan(theta) <= h).
double cylinder_cup_stable(double r, double h, int segments, double theta_deg);

/// Exact max stable volume of box_cup(a, b, h) tilted by theta about +y.
double box_cup_stable(double a, double b, double h, double theta_deg);

/// Exact volume of the unit cube rotated 45 degrees about the y axis
/// through its center, clipped below height u relative to the center
/// (u in [-sqrt(2)/2, sqrt(2)/2]).
double diamond_clip_volume(double u);

}  // namespace fixtures
