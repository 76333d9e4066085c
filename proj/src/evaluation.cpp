#include "denise/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "denise/errors.hpp"
#include "denise/textprep.hpp"

namespace denise {

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

std::size_t ConfusionMatrix::support(std::size_t cls) const {
  return std::accumulate(counts[cls].begin(), counts[cls].end(), std::size_t{0});
}

std::size_t ConfusionMatrix::predicted(std::size_t cls) const {
  std::size_t sum = 0;
  for (const auto& row : counts) sum += row[cls];
  return sum;
}

ConfusionMatrix confusion(std::span<const std::string> y_true,
                          std::span<const std::string> y_pred,
                          std::span<const std::string> classes) {
  if (y_true.size() != y_pred.size()) {
    throw InvalidArgument("true and predicted label sequences differ in length");
  }
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  const std::size_t k = classes.size();
  cm.counts.assign(k, std::vector<std::size_t>(k, 0));
  auto index_of = [&](const std::string& label) {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw UnknownLabel("label '" + label + "' is not a known class");
    return static_cast<std::size_t>(it - classes.begin());
  };
  for (std::size_t t = 0; t < y_true.size(); ++t) {
    ++cm.counts[index_of(y_true[t])][index_of(y_pred[t])];
  }
  return cm;
}

double f1_score(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

ClassificationReport report(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0) throw EmptyMatrix("cannot report on an empty confusion matrix");
  const std::size_t k = cm.classes.size();
  const auto n = static_cast<double>(total);

  ClassificationReport r;
  r.classes = cm.classes;
  r.per_class.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto tp = static_cast<double>(cm.counts[c][c]);
    const std::size_t predicted = cm.predicted(c);
    const std::size_t support = cm.support(c);
    ClassMetrics& m = r.per_class[c];
    m.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = support > 0 ? tp / static_cast<double>(support) : 0.0;
    m.f1 = f1_score(m.precision, m.recall);
    m.support = support;
  }

  // Single-label: micro precision, recall and f1 all equal accuracy.
  r.accuracy = static_cast<double>(cm.trace()) / n;
  r.micro = {r.accuracy, r.accuracy, r.accuracy, total};

  r.macro.support = total;
  r.weighted.support = total;
  for (const ClassMetrics& m : r.per_class) {
    r.macro.precision += m.precision;
    r.macro.recall += m.recall;
    r.macro.f1 += m.f1;
    const auto s = static_cast<double>(m.support);
    r.weighted.precision += s * m.precision;
    r.weighted.f1 += s * m.f1;
  }
  r.macro.precision /= static_cast<double>(k);
  r.macro.recall /= static_cast<double>(k);
  r.macro.f1 /= static_cast<double>(k);
  r.weighted.precision /= n;
  r.weighted.f1 /= n;
  // sum_c support_c * tp_c / support_c = trace.
  r.weighted.recall = r.accuracy;
  return r;
}

std::string render_report(const ClassificationReport& r) {
  // Labels are padded by code points so accented class names stay aligned.
  std::size_t width = 14;
  for (const std::string& c : r.classes) width = std::max(width, utf8_length(c));
  auto label = [&](const std::string& name) {
    return name + std::string(width - std::min(width, utf8_length(name)), ' ');
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, " %9s %10s %9s %8s\n", "f1-score", "precision", "recall",
                "support");
  out += label("") + line;
  auto row = [&](const std::string& name, const ClassMetrics& m) {
    std::snprintf(line, sizeof line, " %9.5f %10.5f %9.5f %8.1f\n", m.f1, m.precision, m.recall,
                  static_cast<double>(m.support));
    out += label(name) + line;
  };
  for (std::size_t c = 0; c < r.classes.size(); ++c) row(r.classes[c], r.per_class[c]);
  row("micro avg", r.micro);
  row("macro avg", r.macro);
  row("weighted avg", r.weighted);
  return out;
}

namespace {

// Indices grouped by class (classes sorted), each group stably sorted by id.
std::vector<std::vector<std::size_t>> class_groups(std::span<const std::string> ids,
                                                   std::span<const std::string> labels) {
  if (ids.size() != labels.size()) throw InvalidArgument("ids and labels differ in length");
  std::set<std::string> classes(labels.begin(), labels.end());
  std::vector<std::vector<std::size_t>> groups;
  for (const std::string& cls : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    std::stable_sort(members.begin(), members.end(),
                     [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
    groups.push_back(std::move(members));
  }
  return groups;
}

double accuracy_on(std::span<const std::size_t> indices, std::span<const std::string> labels,
                   const Predictor& predictor, std::vector<std::string>* predictions) {
  if (indices.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i : indices) {
    std::string predicted = predictor(i);
    if (predicted == labels[i]) ++correct;
    if (predictions) (*predictions)[i] = std::move(predicted);
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

}  // namespace

std::vector<std::size_t> stratified_folds(std::span<const std::string> ids,
                                          std::span<const std::string> labels, std::size_t k,
                                          std::optional<std::uint64_t> seed) {
  if (k < 2) throw TooFewSamples("cross-validation needs k >= 2");
  if (labels.size() < k) {
    throw TooFewSamples("cannot split " + std::to_string(labels.size()) + " samples into " +
                        std::to_string(k) + " folds");
  }
  auto groups = class_groups(ids, labels);
  if (seed) {
    std::mt19937_64 engine(*seed);
    for (auto& group : groups) std::shuffle(group.begin(), group.end(), engine);
  }
  std::vector<std::size_t> fold(labels.size());
  std::size_t counter = 0;
  for (const auto& group : groups) {
    for (std::size_t i : group) fold[i] = counter++ % k;
  }
  return fold;
}

CvResult cross_validate(std::span<const std::string> ids, std::span<const std::string> labels,
                        std::size_t k, const Trainer& trainer,
                        std::optional<std::uint64_t> seed) {
  const auto fold = stratified_folds(ids, labels, k, seed);
  CvResult result;
  result.predictions.resize(labels.size());
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < labels.size(); ++i) (fold[i] == f ? test : train).push_back(i);
    const Predictor predictor = trainer(train);
    result.fold_scores.push_back(accuracy_on(test, labels, predictor, &result.predictions));
  }
  result.mean = std::accumulate(result.fold_scores.begin(), result.fold_scores.end(), 0.0) /
                static_cast<double>(k);
  return result;
}

SplitResult train_test_split_eval(std::span<const std::string> ids,
                                  std::span<const std::string> labels, double test_fraction,
                                  const Trainer& trainer) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must lie in (0, 1)");
  }
  SplitResult result;
  for (const auto& group : class_groups(ids, labels)) {
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(group.size()) * test_fraction));
    if (n_test >= group.size()) {
      throw TooFewSamples("test_fraction leaves a class without training documents");
    }
    const std::size_t n_train = group.size() - n_test;
    result.train_indices.insert(result.train_indices.end(), group.begin(),
                                group.begin() + static_cast<std::ptrdiff_t>(n_train));
    result.test_indices.insert(result.test_indices.end(),
                               group.begin() + static_cast<std::ptrdiff_t>(n_train), group.end());
  }
  if (result.test_indices.empty()) throw TooFewSamples("test_fraction yields an empty test set");
  const Predictor predictor = trainer(result.train_indices);
  result.train_accuracy = accuracy_on(result.train_indices, labels, predictor, nullptr);
  result.test_accuracy = accuracy_on(result.test_indices, labels, predictor, nullptr);
  return result;
}

PosReports per_pos_report(std::span<const TaggedPrediction> records) {
  std::set<std::string> label_set;
  std::set<std::string> tags;
  for (const auto& r : records) {
    label_set.insert(r.true_label);
    label_set.insert(r.predicted_label);
    tags.insert(r.tag);
  }
  const std::vector<std::string> classes(label_set.begin(), label_set.end());

  PosReports out;
  auto build = [&](const std::string* tag) -> std::optional<ClassificationReport> {
    std::vector<std::string> y_true, y_pred;
    for (const auto& r : records) {
      if (tag && r.tag != *tag) continue;
      y_true.push_back(r.true_label);
      y_pred.push_back(r.predicted_label);
    }
    if (y_true.empty()) return std::nullopt;
    return report(confusion(y_true, y_pred, classes));
  };
  for (const std::string& tag : tags) {
    if (auto r = build(&tag)) out.by_tag.emplace(tag, std::move(*r));
  }
  out.combined = build(nullptr);
  return out;
}

}  // namespace denise
