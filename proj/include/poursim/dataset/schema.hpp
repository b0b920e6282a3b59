#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "poursim/pouring/container.hpp"

namespace poursim::dataset {

struct NonPositiveVolumeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CrossImagePairError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Annotated amount of liquid in a container, in percent full.
enum class ContentClass { kEmpty, k33, k50, k66, kFull, kOpaque };

constexpr std::array<ContentClass, 6> kAllContentClasses = {
    ContentClass::kEmpty, ContentClass::k33,   ContentClass::k50,
    ContentClass::k66,    ContentClass::kFull, ContentClass::kOpaque};

std::string content_label(ContentClass c);  // "0", "33", ..., "opaque"
std::optional<ContentClass> parse_content(std::string_view label);

/// Fill fraction used for arithmetic and simulation: 0, 0.33, 0.50, 0.66, 1.
double content_fraction(ContentClass c);
pouring::InitialContent content_initial(ContentClass c);

/// Container-volume class. Bin upper edges in mL, inclusive; the last bin
/// is unbounded.
struct VolumeBin {
  static constexpr int kNumBins = 10;
  // Upper edges of the finite side: 50, 100, ..., 3000; bin 9 is open.
  static const std::array<double, 9>& upper_edges();

  int index = 0;

  /// Midpoint of the bin in mL (lower edge of bin 0 is 0; bin 9 uses 4000),
  /// the regression target for the box baseline.
  double midpoint_ml() const;

  bool operator==(const VolumeBin&) const = default;
};

/// Smallest bin whose upper edge is >= volume_ml. Throws on volume <= 0.
VolumeBin volume_bin(double volume_ml);

struct BoundingBox {
  double x = 0, y = 0, w = 0, h = 0;
};

struct ContainerAnnotation {
  std::string image_id;  // copied from the parent record
  BoundingBox bbox;
  double volume_ml = 0.0;
  ContentClass content = ContentClass::kEmpty;
  std::string cad_id;
  bool upright = true;
};

struct ImageRecord {
  std::string image_id;
  int width = 0;
  int height = 0;
  std::vector<ContainerAnnotation> containers;
};

enum class ComparativeLabel { kYes, kNo, kCantTell };

std::string comparative_label_name(ComparativeLabel l);
std::optional<ComparativeLabel> parse_comparative(std::string_view label);

/// Can the entire content of `a` be poured into `b`? cant_tell if either is
/// opaque; otherwise yes iff c_a * v_a < (1 - c_b) * v_b strictly. Both
/// annotations must come from the same image.
ComparativeLabel comparative_label(const ContainerAnnotation& a,
                                   const ContainerAnnotation& b);

}  // namespace poursim::dataset
