#include "poursim/eval/loss.hpp"

#include <cmath>

namespace poursim::eval {

namespace {

constexpr int kNumClasses = pouring::FractionClass::kNumClasses;
constexpr double kLogFloor = 1e-12;

int check_step(int t) {
  if (t < 0 || t >= kLossTimesteps) {
    throw std::out_of_range("timestep out of range");
  }
  return t;
}

pouring::FractionClass padded_class(const pouring::PourSequence& s, int t) {
  const auto& e = s.elements();
  return t < static_cast<int>(e.size()) ? e[t] : e.back();
}

}  // namespace

WeightTable::WeightTable() {
  for (auto& step : weights_) step.fill(1.0);
}

double WeightTable::at(int timestep, pouring::FractionClass c) const {
  return weights_[check_step(timestep)][c.index()];
}

void WeightTable::set(int timestep, pouring::FractionClass c, double weight) {
  if (!(weight > 0.0)) {
    throw std::invalid_argument("class weights must be positive");
  }
  weights_[check_step(timestep)][c.index()] = weight;
}

WeightTable class_weights(const std::vector<pouring::PourSequence>& training) {
  if (training.empty()) {
    throw EmptyTrainingSetError("class weights need a non-empty training set");
  }
  WeightTable table;
  for (int t = 0; t < kLossTimesteps; ++t) {
    std::array<long, kNumClasses> counts{};
    for (const auto& s : training) ++counts[padded_class(s, t).index()];
    const double total = static_cast<double>(training.size());
    double max_weight = 0.0;
    for (long c : counts) {
      if (c > 0) max_weight = std::max(max_weight, total / c);
    }
    for (int i = 0; i < kNumClasses; ++i) {
      const double w = counts[i] > 0 ? total / counts[i] : max_weight;
      table.set(t, i == pouring::FractionClass::kOpaqueIndex
                       ? pouring::FractionClass::opaque()
                       : pouring::FractionClass::tenths(i),
                w);
    }
  }
  return table;
}

StepDistribution StepDistribution::uniform() {
  StepDistribution d;
  d.p.fill(1.0 / kNumClasses);
  return d;
}

StepDistribution StepDistribution::one_hot(pouring::FractionClass c) {
  StepDistribution d;
  d.p[c.index()] = 1.0;
  return d;
}

void StepDistribution::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (v < 0.0) {
      throw BadDistributionError("distribution entries must be >= 0");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw BadDistributionError("distribution must sum to 1 within 1e-9");
  }
}

SequenceLoss sequence_loss(const pouring::PourSequence& groundtruth,
                           const std::vector<StepDistribution>& predicted,
                           const WeightTable& weights, int timesteps) {
  if (timesteps < 1 || timesteps > kLossTimesteps) {
    throw std::invalid_argument("timesteps must be in [1, 5]");
  }
  if (predicted.empty()) {
    throw BadDistributionError("need at least one predicted distribution");
  }
  for (const auto& d : predicted) d.validate();

  SequenceLoss result;
  double sum = 0.0;
  for (int t = 0; t < timesteps; ++t) {
    const pouring::FractionClass gt = padded_class(groundtruth, t);
    const StepDistribution& dist =
        predicted[std::min<size_t>(t, predicted.size() - 1)];
    double prob = dist.p[gt.index()];
    if (prob < kLogFloor) {
      prob = kLogFloor;
      result.clamped = true;
    }
    sum += weights.at(t, gt) * std::log(prob);
  }
  result.value = -sum / timesteps;
  return result;
}

}  // namespace poursim::eval
