#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "denise/errors.hpp"
#include "denise/evaluation.hpp"
#include "denise/pipeline.hpp"
#include "denise/report.hpp"
#include "denise/storage.hpp"
#include "denise/textprep.hpp"
#include "denise/topicmodel.hpp"

namespace denise::cli {
namespace {

namespace fs = std::filesystem;

struct TrainArgs {
  std::string corpus;
  std::string output;
  std::string lang = "auto";
  double C = 1.0;
  double tol = 1e-4;
  double intercept_scaling = 1.0;
  int max_iter = 1000;
  std::size_t cv_folds = 5;
};

struct ModelArgs {
  std::vector<std::string> bundles;
  std::string vectors;
  std::string ngrams;
  std::string backend = "plain";
  std::string resources;
  std::string lang = "auto";
  std::string topic;
  std::size_t kw = kDefaultKeywordCount;
  std::size_t topn = kDefaultTopn;
  std::size_t window = 2;
  std::string target_class{kDefaultTargetClass};
  std::string format = "json";
};

struct DetectArgs {
  std::string input;
  std::string conllu;
  std::string id;
};

struct BatchArgs {
  std::string input;
  std::size_t min_chars = kDefaultMinConcordanceChars;
  std::size_t jobs = 1;
  std::string model_name;
};

struct EvalArgs {
  std::string input;
  std::string format = "text";
};

// Raised for unsupported --lang values so they map to exit code 2.
std::optional<Language> parse_lang_flag(const std::string& value) {
  if (value == "auto") return std::nullopt;
  if (auto lang = parse_language(value)) return lang;
  throw UnsupportedLanguage("language not supported: '" + value + "'");
}

void add_model_options(CLI::App& cmd, ModelArgs& a) {
  cmd.add_option("--bundle", a.bundles, "Topic model bundle (repeat for several languages)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--vectors", a.vectors, "Word vectors in word2vec text format")
      ->required()
      ->check(CLI::ExistingFile);
  cmd.add_option("--ngrams", a.ngrams, "Character n-gram vectors (subword backend)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--backend", a.backend, "Embedding backend")
      ->check(CLI::IsMember({"plain", "sense", "subword"}))
      ->capture_default_str();
  cmd.add_option("--resources", a.resources,
                 "Stopword/lexicon override directory (default: $" +
                     std::string(kResourceDirEnv) + ")")
      ->check(CLI::ExistingDirectory);
  cmd.add_option("--lang", a.lang, "auto, es, ca or fr")->capture_default_str();
  cmd.add_option("--topic", a.topic, "Text topic to use instead of the topic model");
  cmd.add_option("--kw", a.kw, "Number of keywords")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--topn", a.topn, "Semantic field size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--window", a.window, "Co-occurrence window")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  cmd.add_option("--target-class", a.target_class,
                 "Specialty class for the topic comparison (empty: compare raw labels)")
      ->capture_default_str();
  cmd.add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
}

PipelineConfig make_config(const ModelArgs& a) {
  PipelineConfig config;
  config.lang = parse_lang_flag(a.lang);
  if (!a.topic.empty()) config.topic = a.topic;
  config.kw = a.kw;
  config.topn = a.topn;
  config.keywords.window = a.window;
  config.target_class = a.target_class;
  return config;
}

PipelineModels load_models(const ModelArgs& a) {
  const Backend backend = *parse_backend(a.backend);
  if (!a.ngrams.empty() && backend != Backend::kSubword) {
    throw InvalidArgument("--ngrams requires --backend subword");
  }
  if (a.ngrams.empty() && backend == Backend::kSubword) {
    throw InvalidArgument("--backend subword requires --ngrams");
  }
  PipelineModels models;
  models.resources = a.resources.empty() ? LanguageResources::from_environment()
                                         : LanguageResources::from_directory(a.resources);
  for (const std::string& path : a.bundles) {
    ModelBundle bundle = load_bundle(path);
    const Language lang = bundle.model.language;
    if (!models.topic_models.emplace(lang, std::move(bundle.model)).second) {
      throw InvalidArgument("two bundles for language '" + std::string(language_code(lang)) + "'");
    }
  }
  models.store = EmbeddingStore::load(a.vectors, backend, a.ngrams);
  return models;
}

int train_topics(const TrainArgs& a, std::ostream& out) {
  const LabeledCorpus corpus = read_labeled_corpus(a.corpus);
  const LanguageResources resources = LanguageResources::from_environment();
  const StopwordTable& stopwords = resources.stopwords;

  Language language = Language::kSpanish;
  if (auto lang = parse_lang_flag(a.lang)) {
    language = *lang;
  } else {
    std::string all;
    for (const auto& doc : corpus.documents) all += doc.document.text + "\n";
    const LanguageGuess guess = detect_language(all, stopwords);
    if (!guess.supported) throw UnsupportedLanguage("language not supported");
    language = *guess.language;
  }

  std::vector<TokenStream> streams;
  std::vector<std::string> labels, ids;
  for (const auto& doc : corpus.documents) {
    streams.push_back(prepare_text(doc.document.text, language, stopwords, doc.document.id));
    labels.push_back(doc.label);
    ids.push_back(doc.document.id);
  }
  LogRegHyperparams hp;
  hp.C = a.C;
  hp.tol = a.tol;
  hp.intercept_scaling = a.intercept_scaling;
  hp.max_iter = a.max_iter;

  ModelBundle bundle;
  bundle.model = train_topic_model(streams, labels, language, hp);
  bundle.created = utc_timestamp();
  bundle.metadata = {{"corpus", fs::path(a.corpus).filename().string()},
                     {"documents", std::to_string(streams.size())}};
  save_bundle(bundle, a.output);

  const LogRegModel& lr = bundle.model.logreg;
  out << "language: " << language_code(language) << "\n";
  out << "documents: " << streams.size() << ", vocabulary: " << bundle.model.tfidf.size()
      << ", classes: " << lr.classes.size() << "\n";
  out << "optimizer: " << (lr.converged ? "converged" : "did not converge") << " after "
      << lr.iterations << " iterations\n";

  if (a.cv_folds > 0) {
    const Trainer trainer = [&](std::span<const std::size_t> train) -> Predictor {
      std::vector<TokenStream> x;
      std::vector<std::string> y;
      for (std::size_t i : train) {
        x.push_back(streams[i]);
        y.push_back(labels[i]);
      }
      auto model = std::make_shared<TopicModel>(train_topic_model(x, y, language, hp));
      return [model, &streams](std::size_t i) {
        return model->logreg.predict(model->tfidf.transform(streams[i]));
      };
    };
    const CvResult cv = cross_validate(ids, labels, a.cv_folds, trainer);
    out << "cross-validation (" << a.cv_folds << " folds):\n";
    char line[64];
    for (std::size_t f = 0; f < cv.fold_scores.size(); ++f) {
      std::snprintf(line, sizeof line, "  fold %zu: %.5f\n", f + 1, cv.fold_scores[f]);
      out << line;
    }
    std::snprintf(line, sizeof line, "  mean: %.5f\n", cv.mean);
    out << line;
    const ConfusionMatrix cm = confusion(labels, cv.predictions, lr.classes);
    out << "confusion matrix (rows: true, columns: predicted):\n" << confusion_text(cm);
    out << render_report(report(cm));
  }
  out << "bundle written to " << a.output << "\n";
  return kExitOk;
}

int detect(const ModelArgs& m, const DetectArgs& a, std::ostream& out, std::istream& in) {
  const PipelineConfig config = make_config(m);
  RawDocument doc;
  if (a.input.empty() || a.input == "-") {
    doc.text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    doc.id = a.id.empty() ? "stdin" : a.id;
  } else {
    doc.text = read_file(a.input);
    doc.id = a.id.empty() ? fs::path(a.input).filename().string() : a.id;
  }
  std::optional<std::string> conllu;
  if (!a.conllu.empty()) conllu = read_file(a.conllu);

  const PipelineModels models = load_models(m);
  const PipelineReport report = sn_classification(
      doc, config, models,
      conllu ? std::optional<std::string_view>(*conllu) : std::nullopt);
  if (m.format == "json") {
    out << report_json(report);
  } else if (m.format == "csv") {
    out << report_csv(std::span(&report, 1));
  } else {
    out << report_text(report);
  }
  return kExitOk;
}

int batch(const ModelArgs& m, const BatchArgs& a, std::ostream& out) {
  PipelineConfig config = make_config(m);
  config.min_concordance_chars = a.min_chars;
  const auto rows = read_term_concordance_csv(a.input);
  const PipelineModels models = load_models(m);
  const BatchResult result = batch_classify(rows, config, models, a.jobs);
  if (m.format == "json") {
    out << batch_json(result);
  } else if (m.format == "csv") {
    out << batch_csv(result);
  } else {
    for (const BatchRow& row : result.rows) {
      out << "row " << row.row << "\t" << row.term << "\t" << row_status_name(row.status);
      if (row.report) {
        const KeywordRecord& term = row.report->keywords.front();
        out << "\t" << keyword_status_name(term.status);
        if (term.candidate) out << "\tcandidate";
      }
      out << "\n";
    }
    const std::string name = a.model_name.empty() ? m.backend : a.model_name;
    out << coverage_table(result.summary, name);
    out << "skipped (too short): " << result.summary.too_short
        << ", unsupported language: " << result.summary.unsupported
        << ", term candidates: " << result.summary.term_candidates << "\n";
  }
  return kExitOk;
}

int eval(const EvalArgs& a, std::ostream& out) {
  const auto records = parse_predictions_csv(read_file(a.input));
  const PosReports reports = per_pos_report(records);
  const bool tagged = !(reports.by_tag.size() == 1 && reports.by_tag.begin()->first.empty());
  if (a.format == "json") {
    out << "{\n\"combined\": " << classification_json(*reports.combined);
    if (tagged) {
      for (const auto& [tag, r] : reports.by_tag) {
        out << ",\n\"" << tag << "\": " << classification_json(r);
      }
    }
    out << "}\n";
    return kExitOk;
  }
  if (tagged) {
    for (const auto& [tag, r] : reports.by_tag) {
      out << (tag.empty() ? "(untagged)" : tag) << "\n" << render_report(r) << "\n";
    }
    out << "all\n";
  }
  out << render_report(*reports.combined);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"Semantic-neologism candidate detection"};
  app.name("denise");
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train-topics", "Fit a TF-IDF + logistic regression topic model");
  train_cmd->add_option("--corpus", train_args.corpus, "CSV `label,text` or <label>/<doc>.txt tree")
      ->required()
      ->check(CLI::ExistingPath);
  train_cmd->add_option("--output", train_args.output, "Bundle path to write")->required();
  train_cmd->add_option("--lang", train_args.lang, "auto, es, ca or fr")->capture_default_str();
  train_cmd->add_option("--C", train_args.C, "Inverse L2 regularization strength")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--tol", train_args.tol, "Gradient tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--intercept-scaling", train_args.intercept_scaling, "Intercept feature value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--max-iter", train_args.max_iter, "Iteration cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_option("--cv-folds", train_args.cv_folds, "Cross-validation folds (0 disables)")
      ->capture_default_str();

  ModelArgs detect_models;
  DetectArgs detect_args;
  auto* detect_cmd = app.add_subcommand("detect", "Find semantic-neologism candidates in a text");
  detect_cmd->add_option("input", detect_args.input, "Text file (default: stdin)");
  detect_cmd->add_option("--conllu", detect_args.conllu, "CoNLL-U tags for the text")
      ->check(CLI::ExistingFile);
  detect_cmd->add_option("--id", detect_args.id, "Document id in the report");
  add_model_options(*detect_cmd, detect_models);

  ModelArgs batch_models;
  BatchArgs batch_args;
  batch_models.format = "text";
  auto* batch_cmd = app.add_subcommand("batch", "Evaluate a `term,concordance` CSV");
  batch_cmd->add_option("input", batch_args.input, "Term-concordance CSV")->required();
  batch_cmd->add_option("--min-chars", batch_args.min_chars, "Skip shorter concordances")
      ->capture_default_str();
  batch_cmd->add_option("--jobs", batch_args.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  batch_cmd->add_option("--model-name", batch_args.model_name, "Row label of the coverage table");
  add_model_options(*batch_cmd, batch_models);

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Classification report for `true,pred[,tag]` CSV");
  eval_cmd->add_option("input", eval_args.input, "Predictions CSV")->required();
  eval_cmd->add_option("--format", eval_args.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*train_cmd) return train_topics(train_args, out);
    if (*detect_cmd) return detect(detect_models, detect_args, out, in);
    if (*batch_cmd) return batch(batch_models, batch_args, out);
    if (*eval_cmd) return eval(eval_args, out);
  } catch (const UnsupportedLanguage& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitUnsupportedLanguage;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace denise::cli
