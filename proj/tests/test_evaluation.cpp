#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "denise/errors.hpp"
#include "denise/evaluation.hpp"

using namespace denise;

namespace {

double round5(double x) { return std::round(x * 1e5) / 1e5; }

ConfusionMatrix matrix(std::vector<std::vector<std::size_t>> counts) {
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < counts.size(); ++i) cm.classes.push_back(std::to_string(i));
  cm.counts = std::move(counts);
  return cm;
}

ConfusionMatrix random_matrix(std::mt19937_64& rng, std::size_t k) {
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(k));
  for (auto& row : counts)
    for (auto& c : row) c = rng() % 40;
  counts[0][0] += 1;
  return matrix(counts);
}

std::vector<std::string> labels_of(std::initializer_list<int> xs) {
  std::vector<std::string> out;
  for (int x : xs) out.push_back(std::to_string(x));
  return out;
}

// Document i belongs to class "c<i%3>" and carries its own class id as the
// only feature, so a lookup trainer separates the classes perfectly.
struct Separable {
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  explicit Separable(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("doc" + std::to_string(1000 + i));
      labels.push_back("c" + std::to_string(i % 3));
    }
  }
  Trainer trainer() const {
    return [this](std::span<const std::size_t>) -> Predictor {
      return [this](std::size_t i) { return labels[i]; };
    };
  }
};

}  // namespace

TEST_CASE("confusion examples") {
  const auto classes = labels_of({0, 1});
  const auto cm = confusion(labels_of({0, 0, 1}), labels_of({0, 1, 1}), classes);
  CHECK(cm.counts == std::vector<std::vector<std::size_t>>{{1, 1}, {0, 1}});
  CHECK(cm.support(0) == 2);
  CHECK(cm.predicted(1) == 2);

  const auto diag = confusion(labels_of({0, 1, 1}), labels_of({0, 1, 1}), classes);
  CHECK(diag.counts == std::vector<std::vector<std::size_t>>{{1, 0}, {0, 2}});

  const std::vector<std::string> none;
  const auto empty = confusion(none, none, classes);
  CHECK(empty.total() == 0);

  CHECK_THROWS_AS(confusion(labels_of({0, 2}), labels_of({0, 1}), classes), UnknownLabel);
  CHECK_THROWS_AS(confusion(labels_of({0}), labels_of({0, 1}), classes), InvalidArgument);
  CHECK_THROWS_AS(report(empty), EmptyMatrix);
}

TEST_CASE("report on reconstructed matrices") {
  const auto t6 = report(matrix({{43, 44}, {4, 34}}));
  CHECK(std::abs(round5(t6.per_class[0].precision) - 0.91489) < 1e-9);
  CHECK(std::abs(round5(t6.per_class[0].recall) - 0.49425) < 1e-9);
  CHECK(std::abs(round5(t6.per_class[0].f1) - 0.64179) < 1e-9);
  CHECK(std::abs(round5(t6.per_class[1].precision) - 0.43590) < 1e-9);
  CHECK(std::abs(round5(t6.per_class[1].recall) - 0.89474) < 1e-9);
  CHECK(std::abs(round5(t6.per_class[1].f1) - 0.58621) < 1e-9);
  CHECK(std::abs(round5(t6.micro.f1) - 0.61600) < 1e-9);
  CHECK(std::abs(round5(t6.weighted.f1) - 0.62489) < 1e-9);

  const auto t7 = report(matrix({{36, 30}, {7, 27}}));
  CHECK(std::abs(round5(t7.per_class[0].precision) - 0.83721) < 1e-9);
  // 36/66 = 0.545454..., the reference value is 0.54546
  CHECK(std::abs(round5(t7.per_class[0].recall) - 0.54546) <= 1e-5 + 1e-12);
  CHECK(std::abs(round5(t7.per_class[0].f1) - 0.66055) < 1e-9);
  CHECK(std::abs(round5(t7.micro.precision) - 0.63000) < 1e-9);

  const auto nouns = report(matrix({{42, 13}, {1, 31}}));
  CHECK(std::abs(round5(nouns.per_class[0].precision) - 0.97674) < 1e-9);
  CHECK(std::abs(round5(nouns.per_class[0].recall) - 0.76364) < 1e-9);
  CHECK(std::abs(round5(nouns.per_class[0].f1) - 0.85714) < 1e-9);
  CHECK(std::abs(round5(nouns.accuracy) - 0.83908) < 1e-9);

  const auto perfect = report(matrix({{5, 0, 0}, {0, 3, 0}, {0, 0, 9}}));
  for (const auto& m : perfect.per_class) {
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
  }
  CHECK(perfect.macro.f1 == 1.0);
  CHECK(perfect.weighted.f1 == 1.0);
}

TEST_CASE("zero-division convention") {
  const auto r = report(matrix({{4, 0}, {3, 0}}));
  CHECK(r.per_class[1].precision == 0.0);
  CHECK(r.per_class[1].recall == 0.0);
  CHECK(r.per_class[1].f1 == 0.0);
}

TEST_CASE("render_report layout") {
  const std::string text = render_report(report(matrix({{43, 44}, {4, 34}})));
  CHECK(text.find("f1-score  precision    recall  support") != std::string::npos);
  CHECK(text.find("0.64179    0.91489   0.49425     87.0") != std::string::npos);
  CHECK(text.find("micro avg") != std::string::npos);
  CHECK(text.find("0.61600    0.61600   0.61600    125.0") != std::string::npos);
  CHECK(text.find("weighted avg") != std::string::npos);
  CHECK(text.find("macro avg") != std::string::npos);
}

TEST_CASE("metric identities on random matrices") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto cm = random_matrix(rng, 2 + rng() % 4);
    const auto r = report(cm);
    const double acc = double(cm.trace()) / double(cm.total());
    CHECK(r.micro.precision == acc);
    CHECK(r.micro.recall == acc);
    CHECK(r.micro.f1 == acc);
    CHECK(r.accuracy == acc);
    CHECK(r.weighted.recall == acc);
    const auto& m = r.per_class[rng() % r.per_class.size()];
    const double expected = m.precision + m.recall > 0
                                ? 2 * m.precision * m.recall / (m.precision + m.recall)
                                : 0.0;
    CHECK(std::abs(m.f1 - expected) < 1e-12);
  }
}

TEST_CASE("report is equivariant under class reordering") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + rng() % 4;
    std::vector<std::string> classes;
    for (std::size_t c = 0; c < k; ++c) classes.push_back("k" + std::to_string(c));
    std::vector<std::string> y_true, y_pred;
    const std::size_t n = 1 + rng() % 80;
    for (std::size_t i = 0; i < n; ++i) {
      y_true.push_back(classes[rng() % k]);
      y_pred.push_back(classes[rng() % k]);
    }
    std::vector<std::string> permuted = classes;
    std::shuffle(permuted.begin(), permuted.end(), rng);
    const auto a = report(confusion(y_true, y_pred, classes));
    const auto b = report(confusion(y_true, y_pred, permuted));
    for (std::size_t c = 0; c < k; ++c) {
      const auto j = std::find(permuted.begin(), permuted.end(), classes[c]) - permuted.begin();
      CHECK(a.per_class[c].precision == b.per_class[j].precision);
      CHECK(a.per_class[c].recall == b.per_class[j].recall);
      CHECK(a.per_class[c].f1 == b.per_class[j].f1);
      CHECK(a.per_class[c].support == b.per_class[j].support);
    }
    CHECK(a.micro.f1 == b.micro.f1);
    CHECK(a.macro.f1 == doctest::Approx(b.macro.f1).epsilon(1e-12));
    CHECK(a.weighted.f1 == doctest::Approx(b.weighted.f1).epsilon(1e-12));
  }
}

TEST_CASE("stratified folds") {
  const std::vector<std::string> ids = {"d5", "d1", "d3", "d2", "d4", "d0"};
  const std::vector<std::string> labels = {"b", "a", "a", "b", "a", "b"};
  // a: d1 d3 d4 -> folds 0 1 0; b: d0 d2 d5 -> continues with 1 0 1
  const auto folds = stratified_folds(ids, labels, 2);
  CHECK(folds == std::vector<std::size_t>{1, 0, 1, 0, 0, 1});
  CHECK(stratified_folds(ids, labels, 2) == folds);
  CHECK(stratified_folds(ids, labels, 3, 42) == stratified_folds(ids, labels, 3, 42));
  CHECK_THROWS_AS(stratified_folds(ids, labels, 7), TooFewSamples);
  CHECK_THROWS_AS(stratified_folds(ids, labels, 1), TooFewSamples);

  const Separable data(30);
  const auto f5 = stratified_folds(data.ids, data.labels, 5);
  for (std::size_t fold = 0; fold < 5; ++fold) {
    std::map<std::string, int> per_class;
    for (std::size_t i = 0; i < f5.size(); ++i)
      if (f5[i] == fold) ++per_class[data.labels[i]];
    for (const auto& [label, count] : per_class) CHECK(count == 2);
  }
}

TEST_CASE("cross_validate") {
  const Separable data(30);
  const CvResult cv = cross_validate(data.ids, data.labels, 5, data.trainer());
  CHECK(cv.fold_scores.size() == 5);
  CHECK(cv.mean == 1.0);
  CHECK(cv.predictions == data.labels);

  std::vector<std::string> ids, labels;
  for (int i = 0; i < 40; ++i) {
    ids.push_back("x" + std::to_string(100 + i));
    labels.push_back(i % 2 ? "pos" : "neg");
  }
  const Trainer constant = [](std::span<const std::size_t>) -> Predictor {
    return [](std::size_t) { return std::string("pos"); };
  };
  const CvResult half = cross_validate(ids, labels, 4, constant);
  CHECK(std::abs(half.mean - 0.5) <= 0.1);

  // Training indices never include the fold being scored.
  const Trainer strict = [&](std::span<const std::size_t> train) -> Predictor {
    std::set<std::size_t> seen(train.begin(), train.end());
    return [seen, &labels](std::size_t i) {
      CHECK_FALSE(seen.contains(i));
      return labels[i];
    };
  };
  CHECK(cross_validate(ids, labels, 4, strict).mean == 1.0);
  CHECK_THROWS_AS(cross_validate(ids, labels, 41, constant), TooFewSamples);
}

TEST_CASE("train_test_split_eval") {
  const Separable data(30);
  const SplitResult split = train_test_split_eval(data.ids, data.labels, 0.2, data.trainer());
  CHECK(split.train_accuracy == 1.0);
  CHECK(split.test_accuracy == 1.0);
  CHECK(split.test_indices.size() == 6);
  CHECK(split.train_indices.size() == 24);

  std::vector<std::string> ids, labels;
  for (int i = 0; i < 10; ++i) {
    ids.push_back("d" + std::to_string(i));
    labels.push_back(i % 2 ? "a" : "b");
  }
  CHECK_THROWS_AS(train_test_split_eval(ids, labels, 0.999, data.trainer()), TooFewSamples);
  CHECK_THROWS_AS(train_test_split_eval(ids, labels, 0.0, data.trainer()), InvalidArgument);
  CHECK_THROWS_AS(train_test_split_eval(ids, labels, 1.0, data.trainer()), InvalidArgument);
}

TEST_CASE("per_pos_report") {
  std::vector<TaggedPrediction> records;
  auto add = [&](const std::string& tag, const std::string& t, const std::string& p, int n) {
    for (int i = 0; i < n; ++i) records.push_back({tag, t, p});
  };
  add("NOUN", "cs", "cs", 42);
  add("NOUN", "cs", "other", 13);
  add("NOUN", "other", "cs", 1);
  add("NOUN", "other", "other", 31);

  const PosReports single = per_pos_report(records);
  REQUIRE(single.by_tag.size() == 1);
  const auto& nouns = single.by_tag.at("NOUN");
  CHECK(std::abs(round5(nouns.per_class[0].precision) - 0.97674) < 1e-9);
  CHECK(std::abs(round5(nouns.per_class[0].recall) - 0.76364) < 1e-9);
  CHECK(std::abs(round5(nouns.accuracy) - 0.83908) < 1e-9);
  REQUIRE(single.combined.has_value());
  CHECK(single.combined->per_class[0].f1 == nouns.per_class[0].f1);
  CHECK(single.combined->accuracy == nouns.accuracy);

  add("VERB", "cs", "cs", 3);
  const PosReports two = per_pos_report(records);
  CHECK(two.by_tag.size() == 2);
  CHECK_FALSE(two.by_tag.contains("ADJ"));
  CHECK(two.by_tag.at("VERB").classes == two.by_tag.at("NOUN").classes);
  CHECK(two.combined->per_class[0].support == 58);

  CHECK_FALSE(per_pos_report({}).combined.has_value());
}
