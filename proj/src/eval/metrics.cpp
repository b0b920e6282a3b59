#include "poursim/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace poursim::eval {

ConfusionMatrix::ConfusionMatrix(int num_classes) : k_(num_classes) {
  if (num_classes <= 0) {
    throw std::invalid_argument("confusion matrix needs at least one class");
  }
  counts_.assign(static_cast<size_t>(k_) * k_, 0);
}

ConfusionMatrix ConfusionMatrix::from_predictions(
    int num_classes, const std::vector<int>& groundtruth,
    const std::vector<int>& predicted) {
  if (groundtruth.size() != predicted.size()) {
    throw LengthMismatchError("groundtruth and prediction counts differ");
  }
  ConfusionMatrix cm(num_classes);
  for (size_t i = 0; i < groundtruth.size(); ++i) {
    cm.add(groundtruth[i], predicted[i]);
  }
  return cm;
}

int ConfusionMatrix::check(int index) const {
  if (index < 0 || index >= k_) {
    throw std::out_of_range("class index out of range");
  }
  return index;
}

void ConfusionMatrix::add(int groundtruth, int predicted, long count) {
  if (count < 0) throw std::invalid_argument("counts must be non-negative");
  counts_[static_cast<size_t>(check(groundtruth)) * k_ + check(predicted)] +=
      count;
}

long ConfusionMatrix::at(int groundtruth, int predicted) const {
  return counts_[static_cast<size_t>(check(groundtruth)) * k_ +
                 check(predicted)];
}

long ConfusionMatrix::row_total(int groundtruth) const {
  check(groundtruth);
  const auto begin = counts_.begin() + static_cast<size_t>(groundtruth) * k_;
  return std::accumulate(begin, begin + k_, 0L);
}

double avg_per_class_accuracy(const ConfusionMatrix& cm) {
  double sum = 0.0;
  int supported = 0;
  for (int c = 0; c < cm.num_classes(); ++c) {
    const long total = cm.row_total(c);
    if (total == 0) continue;
    sum += static_cast<double>(cm.at(c, c)) / static_cast<double>(total);
    ++supported;
  }
  if (supported == 0) {
    throw EmptyMatrixError("no groundtruth class has any samples");
  }
  return 100.0 * sum / supported;
}

int edit_distance(std::span<const int> a, std::span<const int> b) {
  const size_t n = a.size(), m = b.size();
  std::vector<int> row(m + 1);
  std::iota(row.begin(), row.end(), 0);
  for (size_t i = 1; i <= n; ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (size_t j = 1; j <= m; ++j) {
      const int subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      diag = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, subst});
    }
  }
  return row[m];
}

namespace {

std::vector<int> class_indices(const pouring::PourSequence& s) {
  std::vector<int> out;
  out.reserve(s.size());
  for (const auto& c : s.elements()) out.push_back(c.index());
  return out;
}

}  // namespace

int edit_distance(const pouring::PourSequence& a,
                  const pouring::PourSequence& b) {
  return edit_distance(std::span<const int>(class_indices(a)),
                       std::span<const int>(class_indices(b)));
}

double sequence_accuracy_at(
    const std::vector<pouring::PourSequence>& predicted,
    const std::vector<pouring::PourSequence>& groundtruth, int k) {
  if (predicted.size() != groundtruth.size()) {
    throw LengthMismatchError("prediction and groundtruth counts differ");
  }
  if (predicted.empty()) {
    throw LengthMismatchError("cannot score an empty prediction set");
  }
  if (k < 0) throw std::invalid_argument("edit distance bound must be >= 0");
  size_t hits = 0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (edit_distance(predicted[i], groundtruth[i]) <= k) ++hits;
  }
  return 100.0 * static_cast<double>(hits) /
         static_cast<double>(predicted.size());
}

}  // namespace poursim::eval
