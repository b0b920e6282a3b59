#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poursim/geometry/mesh.hpp"

namespace poursim::pouring {

using geometry::TriangleMesh;
using geometry::Vec3;

struct MissingCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyRimError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidPourSequenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Closed interior solid of a container. The opening is modelled as a set
/// of cap faces sealing the mesh; the rim is the boundary loop left when
/// the cap faces are removed. Liquid spills over the rim's lowest point.
struct ContainerModel {
  TriangleMesh interior;
  std::vector<int> cap_faces;       // sorted, unique face indices
  std::vector<int> rim;             // ordered rim vertex loop
  double nominal_volume = 0.0;      // mesh units^3; 1 unit^3 == 1 mL after rescale
  std::optional<Vec3> tilt_axis;    // sidecar override; else default_tilt_axis
};

/// Validates the mesh, derives the rim loop from the cap faces, and fills
/// in the nominal volume. Throws geometry validation errors, MissingCapError
/// (no cap faces) or InvalidCapError (cap boundary is not a single loop).
ContainerModel make_container_model(TriangleMesh interior,
                                    std::vector<int> cap_faces,
                                    std::optional<Vec3> tilt_axis = {});

/// Angle in degrees between the rim's mean-plane normal and vertical.
/// Upright fixtures should be horizontal within 1 degree; loaders warn
/// otherwise.
double rim_tilt_deg(const ContainerModel& model);

/// Horizontal unit axis such that positive rotation tips the container's
/// dominant horizontal asymmetry (rim centroid offset from the mesh
/// centroid) downward. Symmetric cups get +Y; any horizontal axis is
/// equivalent for them.
Vec3 default_tilt_axis(const ContainerModel& model);

/// One of the 12 discretized liquid amounts: fractions 0.0, 0.1, ..., 1.0
/// (indices 0..10) plus the opaque class (index 11).
class FractionClass {
 public:
  static constexpr int kNumClasses = 12;
  static constexpr int kOpaqueIndex = 11;

  static FractionClass tenths(int i);
  static FractionClass opaque() { return FractionClass(kOpaqueIndex); }
  /// Closest fraction to `f` in {0.0, ..., 1.0}; exact ties round up.
  static FractionClass snap(double f);
  static std::optional<FractionClass> parse(std::string_view label);

  int index() const { return index_; }
  bool is_opaque() const { return index_ == kOpaqueIndex; }
  /// Fraction value; only valid for non-opaque classes.
  double fraction() const { return index_ / 10.0; }
  std::string label() const;

  bool operator==(const FractionClass&) const = default;

 private:
  explicit FractionClass(int index) : index_(index) {}
  int index_;
};

/// Remaining-liquid sequence over up to 5 timesteps. Fractions are
/// non-increasing; 0.0 and opaque terminate the sequence, and opaque only
/// appears alone.
class PourSequence {
 public:
  static constexpr int kMaxLength = 5;

  explicit PourSequence(std::vector<FractionClass> elements);

  const std::vector<FractionClass>& elements() const { return elements_; }
  size_t size() const { return elements_.size(); }
  std::string to_string() const;  // e.g. "[0.7, 0.2, 0.0]"

  bool operator==(const PourSequence&) const = default;

 private:
  std::vector<FractionClass> elements_;
};

/// Tilt request: reach `target_angle_deg` in `timesteps` equal increments
/// about the horizontal `axis`. 180 degrees is upside down.
struct TiltQuery {
  double target_angle_deg;
  int timesteps = 5;
  Vec3 axis = Vec3::UnitY();

  TiltQuery(double angle_deg, int steps, const Vec3& tilt_axis);
  TiltQuery(double angle_deg, const Vec3& tilt_axis)
      : TiltQuery(angle_deg, 5, tilt_axis) {}
};

/// Initial content of a container before tilting: a fill fraction or the
/// opaque marker (contents not observable).
struct InitialContent {
  static InitialContent opaque() { return {true, 0.0}; }
  static InitialContent fraction(double f);

  bool is_opaque;
  double fill_fraction;
};

}  // namespace poursim::pouring
