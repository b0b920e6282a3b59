#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "poursim/pouring/container.hpp"

namespace poursim::eval {

struct EmptyTrainingSetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadDistributionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kLossTimesteps = 5;

/// Per-timestep class weights for the sequence loss. Defaults to unit
/// weights; class_weights fills in inverse frequencies.
class WeightTable {
 public:
  WeightTable();

  double at(int timestep, pouring::FractionClass c) const;
  void set(int timestep, pouring::FractionClass c, double weight);

 private:
  std::array<std::array<double, pouring::FractionClass::kNumClasses>,
             kLossTimesteps>
      weights_;
};

/// Inverse-frequency weights from a training set: sequences are padded to
/// 5 steps by their last element, then w_t(c) = total_t / count_t(c).
/// Classes unseen at a step get the largest observed weight at that step.
WeightTable class_weights(const std::vector<pouring::PourSequence>& training);

/// Predicted distribution over the 12 classes at one timestep.
struct StepDistribution {
  std::array<double, pouring::FractionClass::kNumClasses> p{};

  static StepDistribution uniform();
  static StepDistribution one_hot(pouring::FractionClass c);

  /// Throws BadDistributionError unless entries are >= 0 and sum to 1
  /// within 1e-9.
  void validate() const;
};

struct SequenceLoss {
  double value = 0.0;
  bool clamped = false;  // some o_t[s_t] fell below the 1e-12 log floor
};

/// Weighted sequence cross-entropy: -(1/T) sum_t w_t(s_t) * log(o_t[s_t]).
/// Groundtruth and predictions are padded to `timesteps` by their last
/// element. log arguments are clamped at 1e-12 and flagged.
SequenceLoss sequence_loss(const pouring::PourSequence& groundtruth,
                           const std::vector<StepDistribution>& predicted,
                           const WeightTable& weights,
                           int timesteps = kLossTimesteps);

}  // namespace poursim::eval
