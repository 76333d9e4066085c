#include "denise/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "denise/errors.hpp"
#include "denise/postag.hpp"
#include "denise/textprep.hpp"

namespace denise {

void PipelineConfig::validate() const {
  if (kw < 1) throw InvalidArgument("kw must be >= 1");
  if (topn < 1) throw InvalidArgument("topn must be >= 1");
  if (keywords.window < 2) throw InvalidArgument("window must be >= 2");
}

const TopicModel& PipelineModels::topic_model(Language language) const {
  const auto it = topic_models.find(language);
  if (it == topic_models.end()) {
    throw ModelMissing("no topic model for language '" + std::string(language_code(language)) +
                       "'");
  }
  return it->second;
}

bool PipelineModels::is_known_word(Language language, std::string_view word) const {
  if (resources.stopwords.has(language) && resources.stopwords.contains(language, word)) {
    return true;
  }
  if (const auto it = resources.lexicons.find(language);
      it != resources.lexicons.end() && it->second.contains(word)) {
    return true;
  }
  if (const auto it = topic_models.find(language); it != topic_models.end()) {
    return it->second.tfidf.index_of(word).has_value();
  }
  return false;
}

std::string_view keyword_status_name(KeywordStatus status) {
  switch (status) {
    case KeywordStatus::kResolved: return "resolved";
    case KeywordStatus::kNotFound: return "not_found";
    case KeywordStatus::kNoSubwordCoverage: return "no_subword_coverage";
    case KeywordStatus::kEmptyField: return "empty_field";
  }
  return "unknown";
}

std::string_view row_status_name(RowStatus status) {
  switch (status) {
    case RowStatus::kProcessed: return "processed";
    case RowStatus::kTooShort: return "too_short";
    case RowStatus::kUnsupportedLanguage: return "unsupported_language";
  }
  return "unknown";
}

double CoverageSummary::percentage() const {
  return expected == 0 ? 0.0
                       : 100.0 * static_cast<double>(recovered) / static_cast<double>(expected);
}

std::string normalize_term(std::string_view term) {
  const TokenStream stream = tokenize(normalize(term), Language::kSpanish);
  std::string joined;
  for (const Token& token : stream.tokens) {
    if (!joined.empty()) joined += '_';
    joined += token.normalized;
  }
  return joined;
}

namespace {

Language resolve_language(const RawDocument& doc, const PipelineConfig& config,
                          const PipelineModels& models, bool& detected) {
  detected = false;
  if (config.lang) return *config.lang;
  if (doc.declared_language) return *doc.declared_language;
  const LanguageGuess guess = detect_language(doc.text, models.resources.stopwords);
  if (!guess.supported || !guess.language) throw UnsupportedLanguage("language not supported");
  detected = true;
  return *guess.language;
}

void fill_semantic_field(KeywordRecord& record, const PipelineReport& report,
                         const PipelineConfig& config, const PipelineModels& models,
                         const TopicModel& model) {
  const EmbeddingStore& store = models.store;
  const auto resolved = resolve_key(store, record.keyword, record.tag);
  if (!resolved) {
    record.status = KeywordStatus::kNotFound;
    return;
  }
  SemanticField sf;
  if (resolved->synthetic) {
    std::vector<float> composed;
    try {
      composed = compose_oov(store, record.keyword);
    } catch (const NoSubwordCoverage&) {
      record.status = KeywordStatus::kNoSubwordCoverage;
      return;
    }
    sf = most_similar(store, composed, config.topn);
  } else {
    sf = most_similar(store, resolved->key, config.topn);
  }
  sf.keyword = record.keyword;
  sf.query_key = resolved->key;
  record.query_key = resolved->key;
  record.synthetic_key = resolved->synthetic;
  if (sf.neighbors.empty()) {
    record.status = KeywordStatus::kEmptyField;
    return;
  }

  const StopwordTable& stopwords = models.resources.stopwords;
  const TopicPrediction prediction = analyze_topic(sf.surfaces(), report.language, model, stopwords);
  record.status = KeywordStatus::kResolved;
  record.sf_topic_raw = prediction.label;
  record.sf_topic = projected_name(prediction.label, config.target_class);
  record.candidate = record.sf_topic != report.text_topic;
  record.diagnostics = diagnose_sf(sf, report.language, model, stopwords,
                                   [&](std::string_view word) {
                                     return models.is_known_word(report.language, word);
                                   });
  record.sf = std::move(sf);
}

PipelineReport run(const RawDocument& doc, const PipelineConfig& config,
                   const PipelineModels& models, std::optional<std::string_view> conllu,
                   std::optional<std::string_view> term) {
  config.validate();
  PipelineReport report;
  report.doc_id = doc.id;
  report.language = resolve_language(doc, config, models, report.language_detected);
  const TopicModel& model = models.topic_model(report.language);
  const StopwordTable& stopwords = models.resources.stopwords;
  const PosLexicon& lexicon = models.resources.lexicon(report.language);

  if (config.topic || doc.declared_topic) {
    report.text_topic_raw = config.topic ? *config.topic : *doc.declared_topic;
    report.topic_declared = true;
  } else {
    const std::string text(doc.text);
    report.text_topic_raw = analyze_topic(std::span(&text, 1), report.language, model, stopwords).label;
  }
  report.text_topic = projected_name(report.text_topic_raw, config.target_class);

  TokenStream stream = tokenize(normalize(doc.text), report.language, doc.id);
  stream = conllu ? load_conllu_tags(std::move(stream), *conllu) : tag(std::move(stream), lexicon);
  const std::vector<Keyword> keywords = extract_keywords(stream, stopwords, config.kw, config.keywords);

  std::string injected;
  if (term) {
    injected = normalize_term(*term);
    if (injected.empty()) throw InvalidArgument("term normalizes to nothing");
    KeywordRecord record;
    record.keyword = injected;
    record.injected = true;
    record.tag = lexicon.lookup(injected);
    const auto hit = std::find_if(keywords.begin(), keywords.end(),
                                  [&](const Keyword& k) { return k.token == injected; });
    if (hit != keywords.end()) {
      record.tag = hit->tag;
      record.score = hit->score;
    }
    report.keywords.push_back(std::move(record));
  }
  for (const Keyword& keyword : keywords) {
    if (term && keyword.token == injected) continue;
    KeywordRecord record;
    record.keyword = keyword.token;
    record.tag = keyword.tag;
    record.score = keyword.score;
    report.keywords.push_back(std::move(record));
  }

  for (std::size_t i = 0; i < report.keywords.size(); ++i) {
    KeywordRecord& record = report.keywords[i];
    try {
      fill_semantic_field(record, report, config, models, model);
    } catch (Error& e) {
      e.add_context("keyword '" + record.keyword + "'");
      throw;
    }
    if (record.candidate) {
      report.candidates.push_back({record.keyword, record.tag, report.text_topic,
                                   record.sf_topic, i, *record.diagnostics});
    }
  }
  return report;
}

}  // namespace

PipelineReport sn_classification(const RawDocument& doc, const PipelineConfig& config,
                                 const PipelineModels& models,
                                 std::optional<std::string_view> conllu) {
  return run(doc, config, models, conllu, std::nullopt);
}

PipelineReport classify_term(const RawDocument& doc, std::string_view term,
                             const PipelineConfig& config, const PipelineModels& models) {
  return run(doc, config, models, std::nullopt, term);
}

BatchResult batch_classify(std::span<const TermConcordance> rows, const PipelineConfig& config,
                           const PipelineModels& models, std::size_t jobs) {
  config.validate();
  BatchResult result;
  result.rows.resize(rows.size());
  std::vector<std::exception_ptr> errors(rows.size());

  auto process = [&](std::size_t i) {
    BatchRow& out = result.rows[i];
    out.row = i + 1;
    out.term = rows[i].term;
    if (utf8_length(rows[i].concordance) < config.min_concordance_chars) {
      out.status = RowStatus::kTooShort;
      return;
    }
    RawDocument doc;
    doc.id = "row-" + std::to_string(out.row);
    doc.text = rows[i].concordance;
    try {
      out.report = classify_term(doc, rows[i].term, config, models);
      out.term_resolved = out.report->keywords.front().resolved();
    } catch (const UnsupportedLanguage&) {
      out.status = RowStatus::kUnsupportedLanguage;
    } catch (Error& e) {
      e.add_context("row " + std::to_string(out.row));
      errors[i] = std::current_exception();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(rows.size(), 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) process(i);
      });
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }

  CoverageSummary& s = result.summary;
  s.rows = rows.size();
  for (const BatchRow& row : result.rows) {
    if (row.status == RowStatus::kTooShort) {
      ++s.too_short;
      continue;
    }
    ++s.expected;
    if (row.status == RowStatus::kUnsupportedLanguage) {
      ++s.unsupported;
      continue;
    }
    if (row.term_resolved) ++s.recovered;
    if (row.report->keywords.front().candidate) ++s.term_candidates;
    s.candidates += row.report->candidates.size();
  }
  return result;
}

}  // namespace denise
