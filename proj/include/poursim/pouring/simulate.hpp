#pragma once

#include "poursim/geometry/clip.hpp"
#include "poursim/pouring/container.hpp"

namespace poursim::pouring {

using geometry::Rotation;

struct VolumeOutOfRangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPositiveTargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Height of the lowest rim vertex after rotating the container about its
/// vertex centroid.
double lip_height(const ContainerModel& container, const Rotation& rotation);

/// Most liquid the tilted container holds without overflowing: interior
/// volume below the horizontal plane through the lip. In [0, nominal].
double max_stable_volume(const ContainerModel& container,
                         const Rotation& rotation);

/// Liquid left at this angle given `current_volume` was present before:
/// min(current, max stable). Spilled liquid never returns.
double remaining_volume(const ContainerModel& container,
                        const Rotation& rotation, double current_volume);

struct PourStep {
  double angle_deg;
  double max_stable;   // mesh units^3
  double remaining;    // after the running-min rule
  double fraction;     // remaining / nominal
  FractionClass snapped;
};

struct PourTrace {
  std::vector<PourStep> steps;  // empty for the opaque / initially-empty cases
  PourSequence sequence;
};

/// Tilts through angles t*x/T for t = 1..T, carries the remaining volume
/// forward with the running-min rule, snaps each remaining fraction to the
/// closest tenth, and truncates at the first 0.0. Opaque and initially
/// empty containers yield length-1 sequences without simulation.
PourTrace simulate_pour_trace(const ContainerModel& container,
                              InitialContent initial, const TiltQuery& query);

PourSequence simulate_pour(const ContainerModel& container,
                           InitialContent initial, const TiltQuery& query);

/// Horizontal-plane height at which the upright interior holds
/// fraction * nominal_volume, found by bisection over the vertical support.
/// Converges to 1e-6 * nominal_volume in volume.
double fill_surface_height(const ContainerModel& container, double fraction);

/// Uniform rescale by (target / nominal)^(1/3) about the origin so the new
/// nominal volume equals `target_ml` (mesh units become cm, 1 unit^3 = 1 mL).
ContainerModel rescale_to_volume(const ContainerModel& container,
                                 double target_ml);

}  // namespace poursim::pouring
