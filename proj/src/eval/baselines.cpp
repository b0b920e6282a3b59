#include "poursim/eval/baselines.hpp"

#include <random>

#include <Eigen/Dense>

namespace poursim::eval {

std::vector<int> chance_baseline(int num_classes, int n, unsigned seed) {
  if (num_classes < 2) {
    throw std::invalid_argument("chance baseline needs at least 2 classes");
  }
  if (n < 0) throw std::invalid_argument("sample count must be >= 0");
  std::mt19937 gen(seed);
  std::vector<int> out;
  out.reserve(n);
  // modulo draw: bias is K / 2^32, far below measurement noise, and the
  // stream is identical on every standard library
  for (int i = 0; i < n; ++i) {
    out.push_back(static_cast<int>(gen() % num_classes));
  }
  return out;
}

double BoxRegressionModel::predict_ml(const BoxFeature& f) const {
  return intercept + coef_w * f.w_frac + coef_h * f.h_frac;
}

dataset::VolumeBin BoxRegressionModel::predict_bin(const BoxFeature& f) const {
  const double ml = predict_ml(f);
  return dataset::volume_bin(std::max(ml, 1e-9));
}

BoxRegressionModel fit_box_regression(
    const std::vector<BoxFeature>& features,
    const std::vector<dataset::VolumeBin>& labels) {
  if (features.size() != labels.size()) {
    throw std::invalid_argument("feature and label counts differ");
  }
  Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
  Eigen::Vector3d atb = Eigen::Vector3d::Zero();
  for (size_t i = 0; i < features.size(); ++i) {
    const Eigen::Vector3d x(1.0, features[i].w_frac, features[i].h_frac);
    ata += x * x.transpose();
    atb += x * labels[i].midpoint_ml();
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(ata);
  lu.setThreshold(1e-10);
  if (lu.rank() < 3) {
    throw DegenerateFeaturesError(
        "normal equations are singular; features do not span the plane");
  }
  const Eigen::Vector3d beta = lu.solve(atb);
  return {beta[0], beta[1], beta[2]};
}

}  // namespace poursim::eval
