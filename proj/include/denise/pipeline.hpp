#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "denise/embeddings.hpp"
#include "denise/keywords.hpp"
#include "denise/resources.hpp"
#include "denise/storage.hpp"
#include "denise/topicmodel.hpp"
#include "denise/types.hpp"

namespace denise {

inline constexpr std::string_view kDefaultTargetClass = "informática";
inline constexpr std::size_t kDefaultKeywordCount = 10;
inline constexpr std::size_t kDefaultMinConcordanceChars = 130;

struct PipelineConfig {
  std::optional<Language> lang;      // nullopt: declared language, else detection
  std::optional<std::string> topic;  // nullopt: declared topic, else the topic model
  std::size_t kw = kDefaultKeywordCount;
  std::size_t topn = kDefaultTopn;
  std::size_t min_concordance_chars = kDefaultMinConcordanceChars;  // code points
  // Topics are compared after projection onto this class; empty compares raw labels.
  std::string target_class{kDefaultTargetClass};
  KeywordOptions keywords;

  void validate() const;
};

// Shared, read-only during a run.
struct PipelineModels {
  LanguageResources resources;
  std::map<Language, TopicModel> topic_models;
  EmbeddingStore store;

  // Throws ModelMissing.
  const TopicModel& topic_model(Language language) const;
  // Lexicon entries, stopwords and topic vocabulary of the language.
  bool is_known_word(Language language, std::string_view word) const;
};

enum class KeywordStatus { kResolved, kNotFound, kNoSubwordCoverage, kEmptyField };
std::string_view keyword_status_name(KeywordStatus status);

struct KeywordRecord {
  std::string keyword;
  PosTag tag = PosTag::kOther;
  std::optional<double> score;  // TextRank score; empty for an injected term
  bool injected = false;
  KeywordStatus status = KeywordStatus::kNotFound;
  std::string query_key;  // empty unless resolved
  bool synthetic_key = false;
  std::optional<SemanticField> sf;
  std::string sf_topic_raw;  // empty unless resolved
  std::string sf_topic;      // projected
  bool candidate = false;
  std::optional<SfDiagnostics> diagnostics;

  bool resolved() const { return status == KeywordStatus::kResolved; }
};

struct SNCandidate {
  std::string keyword;
  PosTag keyword_tag = PosTag::kOther;
  std::string text_topic;
  std::string sf_topic;
  std::size_t record = 0;  // index into PipelineReport::keywords
  SfDiagnostics diagnostics;
};

struct PipelineReport {
  std::string doc_id;
  Language language = Language::kSpanish;
  bool language_detected = false;
  std::string text_topic_raw;
  std::string text_topic;  // projected
  bool topic_declared = false;
  std::vector<KeywordRecord> keywords;
  std::vector<SNCandidate> candidates;
};

// Language gate, topic assignment, keyword extraction, semantic fields and the
// topic-agreement filter for one document. conllu, when given, supplies the
// POS tags instead of the lexicon tagger. Component errors are rethrown with
// the keyword as context.
PipelineReport sn_classification(const RawDocument& doc, const PipelineConfig& config,
                                 const PipelineModels& models,
                                 std::optional<std::string_view> conllu = std::nullopt);

// sn_classification with `term` forced into the keyword records ahead of the
// TextRank output (batch mode).
PipelineReport classify_term(const RawDocument& doc, std::string_view term,
                             const PipelineConfig& config, const PipelineModels& models);

enum class RowStatus { kProcessed, kTooShort, kUnsupportedLanguage };
std::string_view row_status_name(RowStatus status);

struct BatchRow {
  std::size_t row = 0;  // CSV record number (header is 0)
  std::string term;
  RowStatus status = RowStatus::kProcessed;
  bool term_resolved = false;
  std::optional<PipelineReport> report;
};

struct CoverageSummary {
  std::size_t rows = 0;
  std::size_t too_short = 0;
  std::size_t unsupported = 0;
  std::size_t expected = 0;   // rows passing the length filter
  std::size_t recovered = 0;  // of those, terms with a semantic field
  std::size_t term_candidates = 0;
  std::size_t candidates = 0;  // over all keyword records

  double percentage() const;
};

struct BatchResult {
  std::vector<BatchRow> rows;
  CoverageSummary summary;
};

// Rows run on `jobs` threads; output keeps input order.
BatchResult batch_classify(std::span<const TermConcordance> rows, const PipelineConfig& config,
                           const PipelineModels& models, std::size_t jobs = 1);

// Multiword database terms become one underscore-joined token.
std::string normalize_term(std::string_view term);

}  // namespace denise
