#pragma once

#include <stdexcept>
#include <vector>

#include "poursim/dataset/schema.hpp"

namespace poursim::eval {

struct DegenerateFeaturesError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// n uniform random class indices in [0, num_classes). Deterministic for a
/// fixed seed on every platform (raw mt19937 draws, not
/// std::uniform_int_distribution, whose mapping is implementation-defined).
std::vector<int> chance_baseline(int num_classes, int n, unsigned seed);

/// Bounding-box size normalized by the image: (w / W, h / H).
struct BoxFeature {
  double w_frac = 0.0;
  double h_frac = 0.0;
};

/// Least-squares volume regression on the two normalized box sides plus an
/// intercept. Targets are the mL midpoints of the label bins (4000 for the
/// open-ended top bin); predictions are re-binned for classification.
struct BoxRegressionModel {
  double intercept = 0.0;
  double coef_w = 0.0;
  double coef_h = 0.0;

  double predict_ml(const BoxFeature& f) const;
  /// Non-positive predictions clamp into the smallest bin.
  dataset::VolumeBin predict_bin(const BoxFeature& f) const;
};

/// Fits the normal equations; throws DegenerateFeaturesError when they are
/// singular (e.g. all features identical or an empty training set).
BoxRegressionModel fit_box_regression(
    const std::vector<BoxFeature>& features,
    const std::vector<dataset::VolumeBin>& labels);

}  // namespace poursim::eval
