#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace denise {

// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t total() const;
  std::size_t trace() const;
  std::size_t support(std::size_t cls) const;  // row sum
  std::size_t predicted(std::size_t cls) const;  // column sum
};

ConfusionMatrix confusion(std::span<const std::string> y_true,
                          std::span<const std::string> y_pred,
                          std::span<const std::string> classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

// Zero-division convention: a metric whose denominator is 0 is 0.
struct ClassificationReport {
  std::vector<std::string> classes;
  std::vector<ClassMetrics> per_class;
  ClassMetrics micro;
  ClassMetrics macro;
  ClassMetrics weighted;
  double accuracy = 0.0;
};

ClassificationReport report(const ConfusionMatrix& cm);

double f1_score(double precision, double recall);

// Fixed-width table with 5-decimal metrics:
//                 f1-score  precision    recall  support
//   0              0.64179    0.91489   0.49425     87.0
std::string render_report(const ClassificationReport& report);

struct CvResult {
  std::vector<double> fold_scores;
  double mean = 0.0;
  // Out-of-fold predictions, indexed like the input.
  std::vector<std::string> predictions;
};

// Called with training indices; returns a predictor for arbitrary indices.
using Predictor = std::function<std::string(std::size_t)>;
using Trainer = std::function<Predictor(std::span<const std::size_t> train_indices)>;

// Deterministic stratified fold assignment: classes in lexicographic order,
// documents of each class stably sorted by id, then dealt round-robin over
// the folds with a counter that continues across classes. With a seed, each
// class is shuffled (mt19937_64) before dealing.
std::vector<std::size_t> stratified_folds(std::span<const std::string> ids,
                                          std::span<const std::string> labels, std::size_t k,
                                          std::optional<std::uint64_t> seed = std::nullopt);

CvResult cross_validate(std::span<const std::string> ids, std::span<const std::string> labels,
                        std::size_t k, const Trainer& trainer,
                        std::optional<std::uint64_t> seed = std::nullopt);

struct SplitResult {
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Per class (id-sorted), the last round(n_c * test_fraction) documents form
// the test set. Every class must keep at least one training document and the
// test set must be non-empty.
SplitResult train_test_split_eval(std::span<const std::string> ids,
                                  std::span<const std::string> labels, double test_fraction,
                                  const Trainer& trainer);

struct TaggedPrediction {
  std::string tag;
  std::string true_label;
  std::string predicted_label;
};

struct PosReports {
  std::map<std::string, ClassificationReport> by_tag;  // only non-empty partitions
  std::optional<ClassificationReport> combined;
};

// One report per tag present plus a combined one, all over the same class list
// (sorted union of labels seen).
PosReports per_pos_report(std::span<const TaggedPrediction> records);

}  // namespace denise
