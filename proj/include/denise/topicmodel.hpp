#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "denise/textprep.hpp"
#include "denise/types.hpp"

namespace denise {

// Sparse feature vector. Indices strictly increasing, no stored zeros.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool is_zero() const { return entries.empty(); }
  double norm() const;
  bool operator==(const SparseVector&) const = default;
};

// Smoothed TF-IDF: idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1; tf is the raw
// count; vectors are L2-normalized. Vocabulary indices follow byte order of
// the terms.
class TfIdfModel {
 public:
  TfIdfModel() = default;

  static TfIdfModel fit(std::span<const TokenStream> corpus);
  // Rebuilds a model from persisted parts; recomputes idf and validates.
  static TfIdfModel from_parts(std::vector<std::string> terms,
                               std::vector<std::uint64_t> document_frequency,
                               std::uint64_t n_docs);

  SparseVector transform(const TokenStream& stream) const;

  std::size_t size() const { return terms_.size(); }
  std::uint64_t n_docs() const { return n_docs_; }
  std::optional<std::uint32_t> index_of(std::string_view term) const;
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<std::uint64_t>& document_frequency() const { return df_; }
  const std::vector<double>& idf() const { return idf_; }

  static double idf_value(std::uint64_t n_docs, std::uint64_t df);

  bool operator==(const TfIdfModel& other) const {
    return n_docs_ == other.n_docs_ && terms_ == other.terms_ && df_ == other.df_ &&
           idf_ == other.idf_;
  }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::uint64_t> df_;
  std::vector<double> idf_;
  std::uint64_t n_docs_ = 0;
};

struct LogRegHyperparams {
  double C = 1.0;  // inverse regularization strength (L2)
  double tol = 1e-4;  // stop when max |gradient| < tol
  double intercept_scaling = 1.0;
  int max_iter = 1000;

  bool operator==(const LogRegHyperparams&) const = default;
};

// Multinomial logistic regression. weights is classes x n_features,
// row-major; intercepts already include intercept_scaling.
struct LogRegModel {
  std::vector<std::string> classes;
  std::size_t n_features = 0;
  std::vector<double> weights;
  std::vector<double> intercepts;
  LogRegHyperparams hyperparams;
  bool converged = false;
  int iterations = 0;

  std::size_t n_classes() const { return classes.size(); }
  std::vector<double> decision(const SparseVector& x) const;
  std::vector<double> predict_proba(const SparseVector& x) const;
  std::size_t predict_index(const SparseVector& x) const;
  const std::string& predict(const SparseVector& x) const;

  bool operator==(const LogRegModel&) const = default;
};

// Regularized multinomial cross-entropy
//   J(W, b) = -sum_i log softmax(W x_i + b s)_{y_i} + ||W||^2 / (2C)
// with parameters laid out as [W row-major | b]. Exposed for gradient checks.
class LogRegObjective {
 public:
  LogRegObjective(std::span<const SparseVector> x, std::vector<std::size_t> y,
                  std::size_t n_classes, std::size_t n_features, double C,
                  double intercept_scaling);

  std::size_t n_params() const { return k_ * (v_ + 1); }
  // Returns J and writes dJ into gradient (size n_params) when non-empty.
  double evaluate(std::span<const double> params, std::span<double> gradient) const;

 private:
  std::span<const SparseVector> x_;
  std::vector<std::size_t> y_;
  std::size_t k_;
  std::size_t v_;
  double C_;
  double scaling_;
};

// Deterministic full-batch gradient descent with Armijo backtracking from the
// all-zero point. Classes are sorted lexicographically.
LogRegModel fit_logreg(std::span<const SparseVector> x, std::span<const std::string> y,
                       std::size_t n_features, const LogRegHyperparams& hyperparams = {});

std::vector<double> softmax(std::span<const double> scores);

struct TopicModel {
  Language language = Language::kSpanish;
  TfIdfModel tfidf;
  LogRegModel logreg;

  bool operator==(const TopicModel&) const = default;
};

struct TopicPrediction {
  std::string label;
  std::vector<double> probabilities;  // in logreg.classes order
  bool low_confidence = false;        // no in-vocabulary evidence
};

// Fits TF-IDF on the prepared documents, then the classifier.
TopicModel train_topic_model(std::span<const TokenStream> documents,
                             std::span<const std::string> labels, Language language,
                             const LogRegHyperparams& hyperparams = {});

// Joins texts with spaces and runs textprep -> transform -> predict. Serves
// both input texts and semantic fields.
TopicPrediction analyze_topic(std::span<const std::string> texts, Language language,
                              const TopicModel& model, const StopwordTable& stopwords);

// Binary projection onto a target class: 1 if label == target, else 0.
int project_label(std::string_view label, std::string_view target_class);
// "informática" / "not informática"; identity when target_class is empty.
std::string projected_name(std::string_view label, std::string_view target_class);

}  // namespace denise
