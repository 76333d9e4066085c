#include "denise/topicmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "denise/errors.hpp"

namespace denise {

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [index, weight] : entries) sum += weight * weight;
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// TF-IDF

double TfIdfModel::idf_value(std::uint64_t n_docs, std::uint64_t df) {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df))) + 1.0;
}

TfIdfModel TfIdfModel::fit(std::span<const TokenStream> corpus) {
  if (corpus.empty()) throw EmptyCorpus("cannot fit TF-IDF on an empty corpus");
  std::map<std::string, std::uint64_t> df;
  for (const TokenStream& doc : corpus) {
    std::set<std::string_view> seen;
    for (const Token& token : doc.tokens) seen.insert(token.normalized);
    for (std::string_view term : seen) ++df[std::string(term)];
  }
  std::vector<std::string> terms;
  std::vector<std::uint64_t> counts;
  terms.reserve(df.size());
  counts.reserve(df.size());
  for (auto& [term, count] : df) {
    terms.push_back(term);
    counts.push_back(count);
  }
  return from_parts(std::move(terms), std::move(counts), corpus.size());
}

TfIdfModel TfIdfModel::from_parts(std::vector<std::string> terms,
                                  std::vector<std::uint64_t> document_frequency,
                                  std::uint64_t n_docs) {
  if (terms.size() != document_frequency.size()) {
    throw SchemaError("vocabulary and document frequency lengths differ");
  }
  if (n_docs == 0) throw EmptyCorpus("TF-IDF model with zero documents");
  if (terms.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw SchemaError("vocabulary too large");
  }
  TfIdfModel model;
  model.n_docs_ = n_docs;
  model.idf_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i > 0 && !(terms[i - 1] < terms[i])) {
      throw SchemaError("vocabulary must be strictly sorted and unique");
    }
    if (document_frequency[i] == 0 || document_frequency[i] > n_docs) {
      throw SchemaError("document frequency out of range for term '" + terms[i] + "'");
    }
    model.index_.emplace(terms[i], static_cast<std::uint32_t>(i));
    model.idf_.push_back(idf_value(n_docs, document_frequency[i]));
  }
  model.terms_ = std::move(terms);
  model.df_ = std::move(document_frequency);
  return model;
}

std::optional<std::uint32_t> TfIdfModel::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfIdfModel::transform(const TokenStream& stream) const {
  std::map<std::uint32_t, double> counts;
  for (const Token& token : stream.tokens) {
    if (auto index = index_of(token.normalized)) counts[*index] += 1.0;
  }
  SparseVector out;
  out.dim = size();
  out.entries.reserve(counts.size());
  for (const auto& [index, count] : counts) out.entries.emplace_back(index, count * idf_[index]);
  const double norm = out.norm();
  if (norm > 0.0) {
    for (auto& entry : out.entries) entry.second /= norm;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logistic regression

std::vector<double> softmax(std::span<const double> scores) {
  std::vector<double> out(scores.begin(), scores.end());
  if (out.empty()) return out;
  const double max = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> LogRegModel::decision(const SparseVector& x) const {
  std::vector<double> scores(intercepts);
  for (std::size_t k = 0; k < classes.size(); ++k) {
    const double* row = weights.data() + k * n_features;
    double dot = 0.0;
    for (const auto& [index, value] : x.entries) {
      if (index < n_features) dot += row[index] * value;
    }
    scores[k] += dot;
  }
  return scores;
}

std::vector<double> LogRegModel::predict_proba(const SparseVector& x) const {
  return softmax(decision(x));
}

std::size_t LogRegModel::predict_index(const SparseVector& x) const {
  const auto scores = decision(x);
  // max_element returns the first maximum: ties go to class order.
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

const std::string& LogRegModel::predict(const SparseVector& x) const {
  return classes.at(predict_index(x));
}

LogRegObjective::LogRegObjective(std::span<const SparseVector> x, std::vector<std::size_t> y,
                                 std::size_t n_classes, std::size_t n_features, double C,
                                 double intercept_scaling)
    : x_(x), y_(std::move(y)), k_(n_classes), v_(n_features), C_(C),
      scaling_(intercept_scaling) {
  if (x_.size() != y_.size()) throw InvalidArgument("feature and label counts differ");
  if (!(C_ > 0.0)) throw InvalidArgument("C must be positive");
}

double LogRegObjective::evaluate(std::span<const double> params,
                                 std::span<double> gradient) const {
  const bool want_gradient = !gradient.empty();
  if (want_gradient) std::fill(gradient.begin(), gradient.end(), 0.0);
  const double* w = params.data();
  const double* b = params.data() + k_ * v_;

  double loss = 0.0;
  std::vector<double> z(k_);
  for (std::size_t i = 0; i < x_.size(); ++i) {
    for (std::size_t k = 0; k < k_; ++k) {
      double dot = b[k] * scaling_;
      const double* row = w + k * v_;
      for (const auto& [index, value] : x_[i].entries) dot += row[index] * value;
      z[k] = dot;
    }
    const double max = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < k_; ++k) sum += std::exp(z[k] - max);
    const double log_norm = max + std::log(sum);
    loss += log_norm - z[y_[i]];
    if (!want_gradient) continue;
    for (std::size_t k = 0; k < k_; ++k) {
      const double residual = std::exp(z[k] - log_norm) - (k == y_[i] ? 1.0 : 0.0);
      double* grow = gradient.data() + k * v_;
      for (const auto& [index, value] : x_[i].entries) grow[index] += residual * value;
      gradient[k_ * v_ + k] += residual * scaling_;
    }
  }

  double penalty = 0.0;
  for (std::size_t j = 0; j < k_ * v_; ++j) {
    penalty += w[j] * w[j];
    if (want_gradient) gradient[j] += w[j] / C_;
  }
  return loss + penalty / (2.0 * C_);
}

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LogRegModel fit_logreg(std::span<const SparseVector> x, std::span<const std::string> y,
                       std::size_t n_features, const LogRegHyperparams& hyperparams) {
  if (x.size() != y.size()) throw InvalidArgument("feature and label counts differ");
  if (x.size() < 2) throw TooFewSamples("logistic regression needs at least 2 samples");
  if (hyperparams.max_iter < 0 || !(hyperparams.tol > 0.0)) {
    throw InvalidArgument("max_iter must be >= 0 and tol > 0");
  }
  for (const SparseVector& v : x) {
    for (const auto& entry : v.entries) {
      if (entry.first >= n_features) throw InvalidArgument("feature index out of range");
    }
  }

  LogRegModel model;
  model.hyperparams = hyperparams;
  model.n_features = n_features;
  model.classes = std::vector<std::string>(y.begin(), y.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                      model.classes.end());
  if (model.classes.size() < 2) {
    throw DegenerateLabels("training labels contain a single class ('" + model.classes.front() +
                           "')");
  }
  std::vector<std::size_t> targets;
  targets.reserve(y.size());
  for (const std::string& label : y) {
    targets.push_back(static_cast<std::size_t>(
        std::lower_bound(model.classes.begin(), model.classes.end(), label) -
        model.classes.begin()));
  }

  const std::size_t k = model.classes.size();
  const LogRegObjective objective(x, std::move(targets), k, n_features, hyperparams.C,
                                  hyperparams.intercept_scaling);
  const std::size_t n = objective.n_params();

  std::vector<double> params(n, 0.0), gradient(n), trial(n), trial_gradient(n);
  double value = objective.evaluate(params, gradient);
  double step = 0.0;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-30;

  int iteration = 0;
  bool converged = max_abs(gradient) < hyperparams.tol;
  while (!converged && iteration < hyperparams.max_iter) {
    const double gnorm2 = dot(gradient, gradient);
    if (iteration == 0) step = 1.0 / std::max(1.0, std::sqrt(gnorm2));
    double trial_value = 0.0;
    while (true) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = params[j] - step * gradient[j];
      trial_value = objective.evaluate(trial, trial_gradient);
      if (trial_value <= value - kArmijo * step * gnorm2) break;
      step *= 0.5;
      if (step < kMinStep) break;
    }
    if (step < kMinStep) break;  // no descent possible at working precision

    // Barzilai-Borwein estimate seeds the next backtracking search.
    double ss = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = trial[j] - params[j];
      const double d = trial_gradient[j] - gradient[j];
      ss += s * s;
      sy += s * d;
    }
    params.swap(trial);
    gradient.swap(trial_gradient);
    value = trial_value;
    ++iteration;
    step = sy > 0.0 ? ss / sy : step * 2.0;
    converged = max_abs(gradient) < hyperparams.tol;
  }

  model.weights.assign(params.begin(), params.begin() + static_cast<std::ptrdiff_t>(k * n_features));
  model.intercepts.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    model.intercepts[c] = params[k * n_features + c] * hyperparams.intercept_scaling;
  }
  model.converged = converged;
  model.iterations = iteration;
  return model;
}

// ---------------------------------------------------------------------------
// Topic model

TopicModel train_topic_model(std::span<const TokenStream> documents,
                             std::span<const std::string> labels, Language language,
                             const LogRegHyperparams& hyperparams) {
  if (documents.size() != labels.size()) {
    throw InvalidArgument("document and label counts differ");
  }
  TopicModel model;
  model.language = language;
  model.tfidf = TfIdfModel::fit(documents);
  std::vector<SparseVector> x;
  x.reserve(documents.size());
  for (const TokenStream& doc : documents) x.push_back(model.tfidf.transform(doc));
  model.logreg = fit_logreg(x, labels, model.tfidf.size(), hyperparams);
  return model;
}

TopicPrediction analyze_topic(std::span<const std::string> texts, Language language,
                              const TopicModel& model, const StopwordTable& stopwords) {
  if (model.language != language) {
    throw ModelMissing("topic model is for '" + std::string(language_code(model.language)) +
                       "', not '" + std::string(language_code(language)) + "'");
  }
  std::string joined;
  for (const std::string& text : texts) {
    if (!joined.empty()) joined += ' ';
    joined += text;
  }
  const TokenStream stream = prepare_text(joined, language, stopwords);
  const SparseVector x = model.tfidf.transform(stream);
  TopicPrediction prediction;
  prediction.probabilities = model.logreg.predict_proba(x);
  prediction.label = model.logreg.predict(x);
  prediction.low_confidence = x.is_zero();
  return prediction;
}

int project_label(std::string_view label, std::string_view target_class) {
  return label == target_class ? 1 : 0;
}

std::string projected_name(std::string_view label, std::string_view target_class) {
  if (target_class.empty()) return std::string(label);
  if (label == target_class) return std::string(target_class);
  return "not " + std::string(target_class);
}

}  // namespace denise
