#include "poursim/pouring/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace poursim::pouring {

namespace {

double min_rim_height(const TriangleMesh& rotated,
                      const std::vector<int>& rim) {
  double lip = std::numeric_limits<double>::infinity();
  for (int v : rim) lip = std::min(lip, rotated.vertices[v].z());
  return lip;
}

}  // namespace

double lip_height(const ContainerModel& container, const Rotation& rotation) {
  if (container.rim.empty()) {
    throw EmptyRimError("container rim is empty");
  }
  const Vec3 center = container.interior.vertex_centroid();
  const auto r = rotation.matrix();
  double lip = std::numeric_limits<double>::infinity();
  for (int v : container.rim) {
    lip = std::min(lip, (r * (container.interior.vertices[v] - center) + center).z());
  }
  return lip;
}

double max_stable_volume(const ContainerModel& container,
                         const Rotation& rotation) {
  if (container.rim.empty()) {
    throw EmptyRimError("container rim is empty");
  }
  const Vec3 center = container.interior.vertex_centroid();
  const TriangleMesh rotated = container.interior.rotated(rotation.matrix(), center);
  const double lip = min_rim_height(rotated, container.rim);
  const double v = geometry::clip_volume_below(
      rotated, geometry::Plane::horizontal(lip));
  return std::clamp(v, 0.0, container.nominal_volume);
}

double remaining_volume(const ContainerModel& container,
                        const Rotation& rotation, double current_volume) {
  const double slack = 1e-9 * container.nominal_volume;
  if (current_volume < -slack ||
      current_volume > container.nominal_volume + slack) {
    throw VolumeOutOfRangeError("current volume outside [0, nominal volume]");
  }
  return std::min(current_volume, max_stable_volume(container, rotation));
}

PourTrace simulate_pour_trace(const ContainerModel& container,
                              InitialContent initial, const TiltQuery& query) {
  if (initial.is_opaque) {
    return {{}, PourSequence({FractionClass::opaque()})};
  }
  if (initial.fill_fraction == 0.0) {
    return {{}, PourSequence({FractionClass::tenths(0)})};
  }

  std::vector<PourStep> steps;
  std::vector<FractionClass> seq;
  double volume = initial.fill_fraction * container.nominal_volume;
  for (int t = 1; t <= query.timesteps; ++t) {
    const double angle = query.target_angle_deg *
                         static_cast<double>(t) /
                         static_cast<double>(query.timesteps);
    const Rotation rotation(query.axis, angle);
    const double stable = max_stable_volume(container, rotation);
    volume = std::min(volume, stable);
    const double fraction = volume / container.nominal_volume;
    const FractionClass snapped = FractionClass::snap(fraction);
    steps.push_back({angle, stable, volume, fraction, snapped});
    seq.push_back(snapped);
    if (snapped.index() == 0) break;
  }
  return {std::move(steps), PourSequence(std::move(seq))};
}

PourSequence simulate_pour(const ContainerModel& container,
                           InitialContent initial, const TiltQuery& query) {
  return simulate_pour_trace(container, initial, query).sequence;
}

double fill_surface_height(const ContainerModel& container, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("fill fraction must be in [0, 1]");
  }
  auto [lo_pt, hi_pt] = container.interior.bounding_box();
  double lo = lo_pt.z();
  double hi = hi_pt.z();
  const double target = fraction * container.nominal_volume;
  const double tol = 1e-6 * container.nominal_volume;

  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = geometry::clip_volume_below(
        container.interior, geometry::Plane::horizontal(mid));
    if (std::abs(v - target) <= tol) return mid;
    (v < target ? lo : hi) = mid;
  }
  throw NoConvergenceError("fill level bisection did not converge");
}

ContainerModel rescale_to_volume(const ContainerModel& container,
                                 double target_ml) {
  if (!(target_ml > 0.0)) {
    throw NonPositiveTargetError("target volume must be positive");
  }
  const double factor = std::cbrt(target_ml / container.nominal_volume);
  ContainerModel out = container;
  out.interior = container.interior.scaled(factor);
  out.nominal_volume = geometry::mesh_volume(out.interior);
  return out;
}

}  // namespace poursim::pouring
