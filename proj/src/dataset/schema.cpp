#include "poursim/dataset/schema.hpp"

namespace poursim::dataset {

std::string content_label(ContentClass c) {
  switch (c) {
    case ContentClass::kEmpty: return "0";
    case ContentClass::k33: return "33";
    case ContentClass::k50: return "50";
    case ContentClass::k66: return "66";
    case ContentClass::kFull: return "100";
    case ContentClass::kOpaque: return "opaque";
  }
  throw std::logic_error("unreachable");
}

std::optional<ContentClass> parse_content(std::string_view label) {
  for (ContentClass c : kAllContentClasses) {
    if (content_label(c) == label) return c;
  }
  return std::nullopt;
}

double content_fraction(ContentClass c) {
  switch (c) {
    case ContentClass::kEmpty: return 0.0;
    case ContentClass::k33: return 0.33;
    case ContentClass::k50: return 0.50;
    case ContentClass::k66: return 0.66;
    case ContentClass::kFull: return 1.0;
    case ContentClass::kOpaque:
      throw std::invalid_argument("opaque content has no fill fraction");
  }
  throw std::logic_error("unreachable");
}

pouring::InitialContent content_initial(ContentClass c) {
  if (c == ContentClass::kOpaque) return pouring::InitialContent::opaque();
  return pouring::InitialContent::fraction(content_fraction(c));
}

const std::array<double, 9>& VolumeBin::upper_edges() {
  static const std::array<double, 9> edges = {50,  100,  200,  300, 500,
                                              750, 1000, 2000, 3000};
  return edges;
}

double VolumeBin::midpoint_ml() const {
  const auto& edges = upper_edges();
  if (index >= kNumBins - 1) return 4000.0;  // open-ended top bin
  const double lower = index == 0 ? 0.0 : edges[index - 1];
  return 0.5 * (lower + edges[index]);
}

VolumeBin volume_bin(double volume_ml) {
  if (!(volume_ml > 0.0)) {
    throw NonPositiveVolumeError("volume must be positive");
  }
  const auto& edges = VolumeBin::upper_edges();
  for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
    if (volume_ml <= edges[i]) return VolumeBin{i};
  }
  return VolumeBin{VolumeBin::kNumBins - 1};
}

std::string comparative_label_name(ComparativeLabel l) {
  switch (l) {
    case ComparativeLabel::kYes: return "yes";
    case ComparativeLabel::kNo: return "no";
    case ComparativeLabel::kCantTell: return "cant_tell";
  }
  throw std::logic_error("unreachable");
}

std::optional<ComparativeLabel> parse_comparative(std::string_view label) {
  if (label == "yes") return ComparativeLabel::kYes;
  if (label == "no") return ComparativeLabel::kNo;
  if (label == "cant_tell") return ComparativeLabel::kCantTell;
  return std::nullopt;
}

ComparativeLabel comparative_label(const ContainerAnnotation& a,
                                   const ContainerAnnotation& b) {
  if (a.image_id != b.image_id) {
    throw CrossImagePairError(
        "comparative labels are defined only within one image");
  }
  if (a.content == ContentClass::kOpaque || b.content == ContentClass::kOpaque) {
    return ComparativeLabel::kCantTell;
  }
  const double poured = content_fraction(a.content) * a.volume_ml;
  const double space = (1.0 - content_fraction(b.content)) * b.volume_ml;
  return poured < space ? ComparativeLabel::kYes : ComparativeLabel::kNo;
}

}  // namespace poursim::dataset
