#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "teager/error.hpp"
#include "teager/eval.hpp"

using namespace teager;

namespace {

// Three Gaussian clusters in 4-D.
Matrix clusters(std::size_t per_class, double spread, std::uint64_t seed, std::vector<int>& labels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, spread);
  Matrix m;
  labels.clear();
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> row(4);
      for (std::size_t j = 0; j < 4; ++j) row[j] = (j == static_cast<std::size_t>(c) ? 5.0 : 0.0) + n(rng);
      m.push_back(row);
      labels.push_back(c);
    }
  }
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("scaler") {
  const auto p = fit_scaler({{1.0, 5.0}, {2.0, 5.0}, {3.0, 5.0}});
  CHECK(p.means[0] == 2.0);
  CHECK(p.stds[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(p.stds[1] == 1e-12);
  const auto t = transform(p, {{1.0, 5.0}, {3.0, 5.0}});
  CHECK(t[0][0] == doctest::Approx(-1.2247448714));
  CHECK(t[1][0] == doctest::Approx(1.2247448714));
  CHECK(t[0][1] == 0.0);
}

TEST_CASE("stratified folds") {
  std::vector<int> y(20);
  for (int i = 0; i < 20; ++i) y[i] = i < 10 ? 0 : 1;
  const auto f = stratified_kfold(y, 5, 3);
  for (int k = 0; k < 5; ++k) {
    int a = 0, b = 0;
    for (std::size_t r : f.test_rows(k)) (y[r] == 0 ? a : b)++;
    CHECK(a == 2);
    CHECK(b == 2);
    CHECK(f.train_rows(k).size() == 16);
  }

  std::vector<int> z(21);
  for (int i = 0; i < 21; ++i) z[i] = i < 11 ? 0 : 1;
  const auto g = stratified_kfold(z, 5, 3);
  for (int k = 0; k < 5; ++k) {
    int a = 0, total = 0;
    for (std::size_t r : g.test_rows(k)) {
      a += z[r] == 0;
      ++total;
    }
    CHECK((a == 2 || a == 3));
    CHECK((total == 4 || total == 5));
  }
  CHECK(stratified_kfold(z, 5, 3).fold_of_row == g.fold_of_row);
  CHECK(stratified_kfold(z, 5, 4).fold_of_row != g.fold_of_row);

  CHECK(kind_of([&] { stratified_kfold(std::vector<int>{0, 0, 0, 1, 1}, 3, 0); }) == ErrorKind::stratification);
  CHECK(kind_of([&] { stratified_kfold(y, 1, 0); }) == ErrorKind::parameter);
}

TEST_CASE("balanced accuracy") {
  CHECK(balanced_accuracy(std::vector<int>{0, 0, 0, 1}, std::vector<int>{0, 0, 1, 1}) == doctest::Approx(5.0 / 6.0));
  CHECK(balanced_accuracy(std::vector<int>{0, 0, 1, 1}, std::vector<int>{0, 0, 0, 0}) == 0.5);
  CHECK(balanced_accuracy(std::vector<int>{2, 1, 0}, std::vector<int>{2, 1, 0}) == 1.0);
  CHECK(kind_of([] { balanced_accuracy(std::vector<int>{0, 0}, std::vector<int>{0, 7}); }) == ErrorKind::undefined_class);

  // relabeling invariance
  std::mt19937_64 rng(8);
  std::vector<int> t(40), p(40);
  for (int i = 0; i < 40; ++i) {
    t[i] = static_cast<int>(rng() % 3);
    p[i] = static_cast<int>(rng() % 3);
  }
  const int perm[] = {2, 0, 1};
  std::vector<int> t2(40), p2(40);
  for (int i = 0; i < 40; ++i) {
    t2[i] = perm[t[i]];
    p2[i] = perm[p[i]];
  }
  CHECK(balanced_accuracy(t, p) == doctest::Approx(balanced_accuracy(t2, p2)).epsilon(1e-15));
}

TEST_CASE("roc auc") {
  using P = std::vector<std::uint8_t>;
  using S = std::vector<double>;
  CHECK(roc_auc(P{0, 0, 1, 1}, S{0.1, 0.2, 0.8, 0.9}) == 1.0);
  CHECK(roc_auc(P{0, 1}, S{0.5, 0.5}) == 0.5);
  CHECK(roc_auc(P{0, 1, 1, 0}, S{0.3, 0.9, 0.2, 0.1}) == 0.75);
  CHECK(kind_of([] { roc_auc(P{1, 1}, S{0.1, 0.2}); }) == ErrorKind::undefined_auc);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 50; ++t) {
    P y(30);
    S s(30), m(30), neg(30);
    for (int i = 0; i < 30; ++i) {
      y[i] = i % 3 == 0;
      s[i] = u(rng);
      m[i] = std::exp(2.0 * s[i]) + 7.0;
      neg[i] = -s[i];
    }
    const double a = roc_auc(y, s);
    CHECK(roc_auc(y, m) == a);
    CHECK(a + roc_auc(y, neg) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("macro one-vs-rest") {
  const std::vector<int> y{0, 1, 2, 0, 1, 2};
  Matrix perfect;
  for (int c : y) {
    std::vector<double> r(3, 0.0);
    r[static_cast<std::size_t>(c)] = 1.0;
    perfect.push_back(r);
  }
  const auto cls = sorted_classes(y);
  CHECK(cls == std::vector<int>{0, 1, 2});
  CHECK(roc_auc_ovr_macro(y, perfect, cls) == 1.0);
}

TEST_CASE("nearest centroid") {
  const Matrix train{{0, 0}, {0, 0}, {10, 10}, {10, 10}};
  const std::vector<int> y{0, 0, 1, 1};
  const auto m = NearestCentroid::fit(train, y);
  const auto p = m.predict({{1, 1}, {5, 5}, {9, 8}});
  CHECK(p.labels == std::vector<int>{0, 0, 1});
  CHECK(p.distances[0][0] == doctest::Approx(std::sqrt(2.0)));
  for (const auto& row : p.scores) CHECK(row[0] + row[1] == doctest::Approx(1.0));
  CHECK(p.scores[0][0] > p.scores[0][1]);

  std::vector<int> labels;
  const auto x = clusters(10, 0.5, 1, labels);
  CHECK(NearestCentroid::fit(x, labels).predict(x).labels == labels);
}

TEST_CASE("cross validation") {
  std::vector<int> labels;
  const auto x = clusters(20, 1.0, 4, labels);
  const auto r = cross_validate(x, labels, 5, 0);
  CHECK(r.per_fold.size() == 5);
  CHECK(r.mean.balanced_accuracy > 0.9);
  CHECK(r.mean.roc_auc > 0.95);
  double mean = 0.0, var = 0.0;
  for (const auto& f : r.per_fold) mean += f.balanced_accuracy / 5.0;
  for (const auto& f : r.per_fold) var += (f.balanced_accuracy - mean) * (f.balanced_accuracy - mean) / 5.0;
  CHECK(r.mean.balanced_accuracy == doctest::Approx(mean));
  CHECK(r.std.balanced_accuracy == doctest::Approx(std::sqrt(var)));

  const auto again = cross_validate(x, labels, 5, 0);
  CHECK(again.folds.fold_of_row == r.folds.fold_of_row);
  CHECK(again.mean.roc_auc == r.mean.roc_auc);

  double null_mean = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(seed + 100));
    null_mean += cross_validate(x, shuffled, 5, seed).mean.balanced_accuracy / 20.0;
  }
  CHECK(std::abs(null_mean - 1.0 / 3.0) < 0.15);
}

TEST_CASE("scaler is fit on train rows only") {
  std::vector<int> labels;
  auto x = clusters(10, 1.0, 6, labels);
  const auto folds = stratified_kfold(labels, 5, 0);
  Matrix train, test;
  for (std::size_t r : folds.train_rows(0)) train.push_back(x[r]);
  for (std::size_t r : folds.test_rows(0)) test.push_back(x[r]);
  const auto p = fit_scaler(train);
  const auto t = transform(p, test);
  double col_mean = 0.0;
  for (const auto& row : t) col_mean += row[0] / static_cast<double>(t.size());
  CHECK(std::abs(col_mean) > 1e-6);
}

TEST_CASE("external scores reproduce the built-in metrics") {
  std::vector<int> labels;
  const auto x = clusters(10, 1.0, 2, labels);
  const auto folds = stratified_kfold(labels, 5, 9);
  std::map<std::size_t, std::vector<double>> score_of;
  for (int k = 0; k < 5; ++k) {
    Matrix train, test;
    std::vector<int> ytr;
    for (std::size_t r : folds.train_rows(k)) {
      train.push_back(x[r]);
      ytr.push_back(labels[r]);
    }
    const auto sc = fit_scaler(train);
    const auto model = NearestCentroid::fit(transform(sc, train), ytr);
    const auto rows = folds.test_rows(k);
    for (const auto& r : rows) test.push_back(x[r]);
    const auto pred = model.predict(transform(sc, test));
    for (std::size_t i = 0; i < rows.size(); ++i) score_of[rows[i]] = pred.scores[i];
  }
  const auto ext = cross_validate_external(labels, [&](std::size_t row, int) -> std::optional<std::vector<double>> {
    return score_of.at(row);
  }, 5, 9);
  const auto ref = cross_validate(x, labels, 5, 9);
  CHECK(ext.mean.balanced_accuracy == doctest::Approx(ref.mean.balanced_accuracy));
  CHECK(ext.mean.roc_auc == doctest::Approx(ref.mean.roc_auc));
  CHECK_THROWS_AS(cross_validate_external(labels, [](std::size_t, int) -> std::optional<std::vector<double>> {
    return std::nullopt;
  }, 5, 9), Error);
}

}  // TEST_SUITE
