#include "teager/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "teager/error.hpp"

namespace teager {

namespace {

constexpr double kStdFloor = 1e-12;

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
  Matrix out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(m[i]);
  return out;
}

std::vector<int> take(std::span<const int> v, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

FoldMetrics mean_of(const std::vector<FoldMetrics>& folds) {
  FoldMetrics m{0.0, 0.0};
  for (const auto& f : folds) {
    m.balanced_accuracy += f.balanced_accuracy;
    m.roc_auc += f.roc_auc;
  }
  m.balanced_accuracy /= static_cast<double>(folds.size());
  m.roc_auc /= static_cast<double>(folds.size());
  return m;
}

FoldMetrics std_of(const std::vector<FoldMetrics>& folds, const FoldMetrics& mean) {
  FoldMetrics s{0.0, 0.0};
  for (const auto& f : folds) {
    s.balanced_accuracy += (f.balanced_accuracy - mean.balanced_accuracy) * (f.balanced_accuracy - mean.balanced_accuracy);
    s.roc_auc += (f.roc_auc - mean.roc_auc) * (f.roc_auc - mean.roc_auc);
  }
  s.balanced_accuracy = std::sqrt(s.balanced_accuracy / static_cast<double>(folds.size()));
  s.roc_auc = std::sqrt(s.roc_auc / static_cast<double>(folds.size()));
  return s;
}

int argmax_label(std::span<const double> scores, const std::vector<int>& classes) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return classes[best];
}

}  // namespace

ScalerParams fit_scaler(const Matrix& train) {
  if (train.empty()) throw Error(ErrorKind::empty_result, "fit_scaler: empty training matrix");
  const std::size_t cols = train.front().size();
  ScalerParams p{std::vector<double>(cols, 0.0), std::vector<double>(cols, 0.0)};
  for (const auto& row : train) {
    if (row.size() != cols) throw Error(ErrorKind::layout, "fit_scaler: ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) p.means[j] += row[j];
  }
  const auto n = static_cast<double>(train.size());
  for (auto& m : p.means) m /= n;
  for (const auto& row : train) {
    for (std::size_t j = 0; j < cols; ++j) p.stds[j] += (row[j] - p.means[j]) * (row[j] - p.means[j]);
  }
  for (auto& s : p.stds) s = std::max(std::sqrt(s / n), kStdFloor);
  return p;
}

Matrix transform(const ScalerParams& params, const Matrix& rows) {
  Matrix out = rows;
  for (auto& row : out) {
    if (row.size() != params.means.size()) throw Error(ErrorKind::layout, "transform: column count mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - params.means[j]) / params.stds[j];
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::train_rows(int fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] != fold) idx.push_back(i);
  }
  return idx;
}

std::vector<std::size_t> FoldAssignment::test_rows(int fold) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
    if (fold_of_row[i] == fold) idx.push_back(i);
  }
  return idx;
}

std::vector<int> sorted_classes(std::span<const int> labels) {
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

FoldAssignment stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::parameter, "stratified_kfold: k must be >= 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < static_cast<std::size_t>(k)) {
      throw Error(ErrorKind::stratification, "stratified_kfold: class " + std::to_string(label) + " has " +
                                                 std::to_string(rows.size()) + " rows, fewer than k = " +
                                                 std::to_string(k));
    }
  }
  FoldAssignment out{std::vector<int>(labels.size(), 0), k};
  std::mt19937_64 rng(seed);
  int next = 0;
  for (auto& [label, rows] : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (auto r : rows) {
      out.fold_of_row[r] = next;
      next = (next + 1) % k;
    }
  }
  return out;
}

double balanced_accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorKind::parameter, "balanced_accuracy: length mismatch");
  }
  if (y_true.empty()) throw Error(ErrorKind::empty_result, "balanced_accuracy: empty input");
  std::map<int, std::pair<std::size_t, std::size_t>> hits;  // class -> (correct, total)
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    auto& h = hits[y_true[i]];
    ++h.second;
    if (y_pred[i] == y_true[i]) ++h.first;
  }
  for (int p : y_pred) {
    if (!hits.contains(p)) {
      throw Error(ErrorKind::undefined_class,
                  "balanced_accuracy: predicted class " + std::to_string(p) + " is absent from y_true");
    }
  }
  double sum = 0.0;
  for (const auto& [label, h] : hits) sum += static_cast<double>(h.first) / static_cast<double>(h.second);
  return sum / static_cast<double>(hits.size());
}

double roc_auc(std::span<const std::uint8_t> positive, std::span<const double> scores) {
  if (positive.size() != scores.size()) throw Error(ErrorKind::parameter, "roc_auc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
    for (std::size_t t = i; t < j; ++t) {
      if (positive[order[t]]) {
        rank_sum += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorKind::undefined_auc, "roc_auc: need both positive and negative rows");
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

double roc_auc_ovr_macro(std::span<const int> y_true, const Matrix& scores, std::span<const int> classes) {
  if (scores.size() != y_true.size()) throw Error(ErrorKind::parameter, "roc_auc_ovr_macro: row count mismatch");
  if (classes.size() < 2) throw Error(ErrorKind::undefined_auc, "roc_auc_ovr_macro: need at least two classes");
  double sum = 0.0;
  std::vector<std::uint8_t> pos(y_true.size());
  std::vector<double> col(y_true.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      if (scores[i].size() != classes.size()) throw Error(ErrorKind::layout, "roc_auc_ovr_macro: ragged scores");
      pos[i] = y_true[i] == classes[c] ? 1 : 0;
      col[i] = scores[i][c];
    }
    sum += roc_auc(pos, col);
  }
  return sum / static_cast<double>(classes.size());
}

NearestCentroid NearestCentroid::fit(const Matrix& train, std::span<const int> labels) {
  if (train.size() != labels.size()) throw Error(ErrorKind::parameter, "NearestCentroid: label count mismatch");
  if (train.empty()) throw Error(ErrorKind::empty_result, "NearestCentroid: empty training set");
  NearestCentroid model;
  model.classes_ = sorted_classes(labels);
  const std::size_t cols = train.front().size();
  model.centroids_.assign(model.classes_.size(), std::vector<double>(cols, 0.0));
  std::vector<std::size_t> counts(model.classes_.size(), 0);
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto c = static_cast<std::size_t>(
        std::lower_bound(model.classes_.begin(), model.classes_.end(), labels[i]) - model.classes_.begin());
    if (train[i].size() != cols) throw Error(ErrorKind::layout, "NearestCentroid: ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) model.centroids_[c][j] += train[i][j];
    ++counts[c];
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (auto& v : model.centroids_[c]) v /= static_cast<double>(counts[c]);
  }
  return model;
}

NearestCentroid::Prediction NearestCentroid::predict(const Matrix& rows) const {
  Prediction p;
  p.labels.reserve(rows.size());
  p.distances.reserve(rows.size());
  p.scores.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != centroids_.front().size()) throw Error(ErrorKind::layout, "NearestCentroid: column mismatch");
    std::vector<double> d(classes_.size());
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) d2 += (row[j] - centroids_[c][j]) * (row[j] - centroids_[c][j]);
      d[c] = std::sqrt(d2);
    }
    const double nearest = *std::min_element(d.begin(), d.end());
    std::vector<double> s(classes_.size());
    double total = 0.0;
    for (std::size_t c = 0; c < d.size(); ++c) {
      s[c] = std::exp(nearest - d[c]);
      total += s[c];
    }
    for (auto& v : s) v /= total;
    std::size_t best = 0;
    for (std::size_t c = 1; c < d.size(); ++c) {
      if (d[c] < d[best]) best = c;
    }
    p.labels.push_back(classes_[best]);
    p.distances.push_back(std::move(d));
    p.scores.push_back(std::move(s));
  }
  return p;
}

CrossValidationResult cross_validate(const Matrix& features, std::span<const int> labels, int k,
                                     std::uint64_t seed) {
  if (features.size() != labels.size()) throw Error(ErrorKind::parameter, "cross_validate: label count mismatch");
  CrossValidationResult res;
  res.folds = stratified_kfold(labels, k, seed);
  const auto classes = sorted_classes(labels);
  for (int f = 0; f < k; ++f) {
    const auto train_idx = res.folds.train_rows(f);
    const auto test_idx = res.folds.test_rows(f);
    const Matrix train_raw = take_rows(features, train_idx);
    const auto scaler = fit_scaler(train_raw);
    const auto y_train = take(labels, train_idx);
    const auto y_test = take(labels, test_idx);
    const auto model = NearestCentroid::fit(transform(scaler, train_raw), y_train);
    const auto pred = model.predict(transform(scaler, take_rows(features, test_idx)));
    res.per_fold.push_back({balanced_accuracy(y_test, pred.labels), roc_auc_ovr_macro(y_test, pred.scores, classes)});
  }
  res.mean = mean_of(res.per_fold);
  res.std = std_of(res.per_fold, res.mean);
  return res;
}

CrossValidationResult cross_validate_external(std::span<const int> labels, const ExternalScores& scores, int k,
                                              std::uint64_t seed) {
  CrossValidationResult res;
  res.folds = stratified_kfold(labels, k, seed);
  const auto classes = sorted_classes(labels);
  for (int f = 0; f < k; ++f) {
    const auto test_idx = res.folds.test_rows(f);
    Matrix s;
    std::vector<int> pred;
    for (auto i : test_idx) {
      auto row = scores(i, f);
      if (!row) {
        throw Error(ErrorKind::layout, "cross_validate_external: no scores for row " + std::to_string(i) +
                                           " in fold " + std::to_string(f));
      }
      if (row->size() != classes.size()) {
        throw Error(ErrorKind::layout, "cross_validate_external: expected " + std::to_string(classes.size()) +
                                           " scores per row");
      }
      pred.push_back(argmax_label(*row, classes));
      s.push_back(std::move(*row));
    }
    const auto y_test = take(labels, test_idx);
    res.per_fold.push_back({balanced_accuracy(y_test, pred), roc_auc_ovr_macro(y_test, s, classes)});
  }
  res.mean = mean_of(res.per_fold);
  res.std = std_of(res.per_fold, res.mean);
  return res;
}

}  // namespace teager
