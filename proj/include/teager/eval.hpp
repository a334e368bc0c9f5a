#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace teager {

using Matrix = std::vector<std::vector<double>>;

struct ScalerParams {
  std::vector<double> means;
  std::vector<double> stds;  // population std, floored at 1e-12
};

ScalerParams fit_scaler(const Matrix& train);
Matrix transform(const ScalerParams& params, const Matrix& rows);

struct FoldAssignment {
  std::vector<int> fold_of_row;
  int k = 0;

  std::vector<std::size_t> train_rows(int fold) const;
  std::vector<std::size_t> test_rows(int fold) const;
};

// Shuffles each class with the seed, then deals its rows round-robin over
// the folds, continuing the deal position from one class to the next.
FoldAssignment stratified_kfold(std::span<const int> labels, int k = 5, std::uint64_t seed = 0);

// Unweighted mean of per-class recall over the classes present in y_true.
double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred);

// Mann-Whitney estimate, ties count one half. `positive` marks positives.
double roc_auc(std::span<const std::uint8_t> positive, std::span<const double> scores);

// Macro one-vs-rest. scores[i][c] scores row i for classes[c], where
// classes is the sorted set of labels in y_true.
double roc_auc_ovr_macro(std::span<const int> y_true, const Matrix& scores, std::span<const int> classes);

std::vector<int> sorted_classes(std::span<const int> labels);

class NearestCentroid {
 public:
  static NearestCentroid fit(const Matrix& train, std::span<const int> labels);

  struct Prediction {
    std::vector<int> labels;
    Matrix distances;  // Euclidean distance per class, column order = classes()
    // Softmax of the negated distances: per-row class-membership weights in
    // [0, 1] summing to one. Higher means more likely.
    Matrix scores;
  };
  Prediction predict(const Matrix& rows) const;
  const std::vector<int>& classes() const { return classes_; }
  const Matrix& centroids() const { return centroids_; }

 private:
  std::vector<int> classes_;
  Matrix centroids_;
};

struct FoldMetrics {
  double balanced_accuracy;
  double roc_auc;
};

struct CrossValidationResult {
  FoldAssignment folds;
  std::vector<FoldMetrics> per_fold;
  FoldMetrics mean;
  FoldMetrics std;  // population std over folds
};

// Per fold: scaler fit on the train rows, nearest-centroid classifier,
// balanced accuracy and macro one-vs-rest ROC-AUC on the held-out rows.
CrossValidationResult cross_validate(const Matrix& features, std::span<const int> labels, int k = 5,
                                     std::uint64_t seed = 0);

// Scores produced elsewhere: returns the score row (one value per class in
// sorted order) for a row index and fold, or nullopt if missing.
using ExternalScores = std::function<std::optional<std::vector<double>>(std::size_t row, int fold)>;

// Same protocol with externally supplied scores; predictions are the argmax
// score, ties to the lowest class.
CrossValidationResult cross_validate_external(std::span<const int> labels, const ExternalScores& scores,
                                              int k = 5, std::uint64_t seed = 0);

}  // namespace teager
