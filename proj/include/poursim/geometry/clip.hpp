#pragma once

#include "poursim/geometry/mesh.hpp"

namespace poursim::geometry {

/// Volume of the intersection of the enclosed solid with the half-space
/// below `plane`. Each triangle is clipped against the half-space, the cut
/// segments are stitched into cap loops, and the closed result is summed by
/// the divergence theorem. Result is clamped to [0, mesh volume].
///
/// Vertices within 1e-9 * bbox_diagonal of the plane are treated as lying
/// on it. Throws DegenerateCapError when the cut segments do not stitch
/// into simple loops (pinched cross-sections); the input then needs a
/// perturbation of the plane or the mesh.
double clip_volume_below(const TriangleMesh& mesh, const Plane& plane);

}  // namespace poursim::geometry
