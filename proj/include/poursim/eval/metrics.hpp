#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "poursim/pouring/container.hpp"

namespace poursim::eval {

struct EmptyMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LengthMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// K x K count matrix; rows index the groundtruth class, columns the
/// predicted class.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  static ConfusionMatrix from_predictions(int num_classes,
                                          const std::vector<int>& groundtruth,
                                          const std::vector<int>& predicted);

  void add(int groundtruth, int predicted, long count = 1);
  long at(int groundtruth, int predicted) const;
  long row_total(int groundtruth) const;
  int num_classes() const { return k_; }

 private:
  int check(int index) const;

  int k_;
  std::vector<long> counts_;  // row-major
};

/// Mean over classes with non-zero support of the per-class recall, as a
/// percentage. Classes that never occur in the groundtruth are excluded.
/// Throws EmptyMatrixError when no class has support.
double avg_per_class_accuracy(const ConfusionMatrix& cm);

/// Levenshtein distance with unit insert / delete / substitute costs.
int edit_distance(std::span<const int> a, std::span<const int> b);
int edit_distance(const pouring::PourSequence& a, const pouring::PourSequence& b);

/// Percentage of pairs whose edit distance is <= k (cumulative; k = 0 is
/// the exact-match rate). Throws LengthMismatchError when the lists differ
/// in size or are empty.
double sequence_accuracy_at(const std::vector<pouring::PourSequence>& predicted,
                            const std::vector<pouring::PourSequence>& groundtruth,
                            int k);

}  // namespace poursim::eval
