#include <doctest.h>

#include <set>

#include "denise/errors.hpp"
#include "denise/pipeline.hpp"
#include "denise/report.hpp"
#include "fixtures.hpp"

using namespace denise;
using namespace denise::testing;

namespace {

const PipelineModels& models() {
  static const PipelineModels m = toy_models();
  return m;
}

RawDocument doc_of(std::string text, std::string id = "doc") {
  RawDocument d;
  d.id = std::move(id);
  d.text = std::move(text);
  return d;
}

std::set<std::string> candidate_set(const PipelineReport& r) {
  std::set<std::string> out;
  for (const auto& c : r.candidates) out.insert(c.keyword);
  return out;
}

std::size_t resolved_count(const PipelineReport& r) {
  std::size_t n = 0;
  for (const auto& k : r.keywords) n += k.resolved();
  return n;
}

}  // namespace

TEST_CASE("computing text flags the borrowed terms") {
  const PipelineReport r = sn_classification(doc_of(cs_text()), PipelineConfig{}, models());
  CHECK(r.language == Language::kSpanish);
  CHECK(r.language_detected);
  CHECK(r.text_topic == kCs);
  CHECK_FALSE(r.topic_declared);
  CHECK(candidate_set(r) == std::set<std::string>{"gusano", "nube", "virus"});

  for (const auto& c : r.candidates) {
    CHECK(c.text_topic == kCs);
    CHECK(c.sf_topic == "not informática");
    CHECK(r.keywords[c.record].keyword == c.keyword);
  }
  for (const auto& k : r.keywords) {
    if (k.keyword == "teclado" || k.keyword == "pantalla") {
      CHECK(k.resolved());
      CHECK_FALSE(k.candidate);
      CHECK(k.sf_topic_raw == kCs);
    }
  }
}

TEST_CASE("candidate flag is exactly topic inequality") {
  PipelineConfig raw;
  raw.target_class.clear();
  for (const PipelineConfig& config : {PipelineConfig{}, raw}) {
    const PipelineReport r = sn_classification(doc_of(cs_text()), config, models());
    std::size_t flagged = 0;
    for (const auto& k : r.keywords) {
      if (!k.resolved()) {
        CHECK_FALSE(k.candidate);
        continue;
      }
      CHECK(k.candidate == (k.sf_topic != r.text_topic));
      flagged += k.candidate;
    }
    CHECK(flagged == r.candidates.size());
  }
}

TEST_CASE("declared topic agreeing with every field gives no candidates") {
  PipelineModels m;
  m.resources = models().resources;
  m.topic_models = models().topic_models;
  auto entries = toy_vector_entries();
  entries.resize(150);  // the computing cluster only
  m.store = EmbeddingStore::from_entries(Backend::kPlain, entries.front().second.size(), entries);
  std::set<std::string> stored;
  for (const auto& [k, v] : entries) stored.insert(k);

  PipelineConfig config;
  config.topic = kCs;
  const std::string text =
      "El teclado y la pantalla del ordenador. El servidor guarda el teclado y la pantalla.";
  const PipelineReport r = sn_classification(doc_of(text), config, m);
  CHECK(r.topic_declared);
  CHECK(r.candidates.empty());
  CHECK(resolved_count(r) > 0);
}

TEST_CASE("declared document metadata is honored") {
  RawDocument d = doc_of(cs_text());
  d.declared_language = Language::kSpanish;
  d.declared_topic = kNature;
  const PipelineReport r = sn_classification(d, PipelineConfig{}, models());
  CHECK_FALSE(r.language_detected);
  CHECK(r.topic_declared);
  CHECK(r.text_topic_raw == kNature);
  CHECK(r.text_topic == "not informática");
}

TEST_CASE("unsupported language aborts") {
  const std::string english =
      "The quick brown fox jumps over the lazy dog while the children of the town watch it.";
  CHECK_THROWS_AS(sn_classification(doc_of(english), PipelineConfig{}, models()),
                  UnsupportedLanguage);
  PipelineConfig catalan;
  catalan.lang = Language::kCatalan;
  CHECK_THROWS_AS(sn_classification(doc_of(cs_text()), catalan, models()), ModelMissing);
}

TEST_CASE("topn and keyword count are monotone") {
  std::size_t previous = 0;
  for (std::size_t topn : {1, 5, 20, 140, 500}) {
    PipelineConfig config;
    config.topn = topn;
    const std::size_t n = resolved_count(sn_classification(doc_of(cs_text()), config, models()));
    CHECK(n >= previous);
    previous = n;
  }
  PipelineConfig three;
  three.kw = 3;
  CHECK(sn_classification(doc_of(cs_text()), three, models()).keywords.size() == 3);
  PipelineConfig bad;
  bad.kw = 0;
  CHECK_THROWS_AS(sn_classification(doc_of(cs_text()), bad, models()), InvalidArgument);
}

TEST_CASE("reports are deterministic") {
  const auto a = report_json(sn_classification(doc_of(cs_text()), PipelineConfig{}, models()));
  const auto b = report_json(sn_classification(doc_of(cs_text()), PipelineConfig{}, models()));
  CHECK(a == b);
  CHECK(a.find("\"candidates\"") != std::string::npos);
}

TEST_CASE("injected term is always recorded") {
  const PipelineReport hit = classify_term(doc_of(cs_text()), "virus", PipelineConfig{}, models());
  REQUIRE_FALSE(hit.keywords.empty());
  CHECK(hit.keywords[0].keyword == "virus");
  CHECK(hit.keywords[0].injected);
  std::size_t virus = 0;
  for (const auto& k : hit.keywords) virus += k.keyword == "virus";
  CHECK(virus == 1);

  const PipelineReport miss =
      classify_term(doc_of(cs_text()), "cortafuegos", PipelineConfig{}, models());
  CHECK(miss.keywords[0].keyword == "cortafuegos");
  CHECK(miss.keywords[0].status == KeywordStatus::kNotFound);
  CHECK_FALSE(miss.keywords[0].score.has_value());

  CHECK(normalize_term("Caballo de Troya") == "caballo_de_troya");
}

TEST_CASE("subword backend composes unknown keywords") {
  const PipelineModels sub = toy_models(Backend::kSubword);
  const PipelineReport r = classify_term(doc_of(cs_text()), "teclados", PipelineConfig{}, sub);
  const KeywordRecord& k = r.keywords[0];
  CHECK(k.synthetic_key);
  CHECK((k.resolved() || k.status == KeywordStatus::kNoSubwordCoverage));
}

TEST_CASE("batch coverage") {
  const BatchResult batch = batch_classify(batch_rows(), PipelineConfig{}, models());
  CHECK(batch.summary.rows == 125);
  CHECK(batch.summary.expected == 125);
  CHECK(batch.summary.recovered == 100);
  CHECK(format_percentage(batch.summary.percentage()) == "80%");
  const std::string table = coverage_table(batch.summary, "Word2Vec");
  CHECK(table.find("Expected") != std::string::npos);
  CHECK(table.find("125") != std::string::npos);
  for (std::size_t i = 0; i < batch.rows.size(); ++i) {
    CHECK(batch.rows[i].row == i + 1);
    CHECK(batch.rows[i].term_resolved == (i < 100));
  }

  const BatchResult parallel = batch_classify(batch_rows(), PipelineConfig{}, models(), 4);
  CHECK(batch_json(parallel) == batch_json(batch));
}

TEST_CASE("batch length filter") {
  auto rows = batch_rows();
  rows.resize(3);
  rows[1].concordance = std::string(50, 'a');
  const BatchResult r = batch_classify(rows, PipelineConfig{}, models());
  CHECK(r.rows[1].status == RowStatus::kTooShort);
  CHECK_FALSE(r.rows[1].report.has_value());
  CHECK(r.summary.too_short == 1);
  CHECK(r.summary.expected == 2);

  std::size_t previous = 0;
  for (std::size_t min : {400, 200, 130, 60, 10}) {
    PipelineConfig config;
    config.min_concordance_chars = min;
    const auto s = batch_classify(batch_rows(), config, models()).summary;
    const std::size_t processed = s.rows - s.too_short;
    CHECK(processed >= previous);
    previous = processed;
  }

  const BatchResult empty = batch_classify({}, PipelineConfig{}, models());
  CHECK(empty.rows.empty());
  CHECK(empty.summary.expected == 0);
  CHECK(empty.summary.recovered == 0);
  CHECK(empty.summary.percentage() == 0.0);
}

TEST_CASE("batch rows in an unsupported language are counted") {
  std::vector<TermConcordance> rows = {
      {"virus", "The virus spreads over the network of the company and the users of the "
                "town cannot open their files while the team of the office works on it all day"}};
  const BatchResult r = batch_classify(rows, PipelineConfig{}, models());
  CHECK(r.rows[0].status == RowStatus::kUnsupportedLanguage);
  CHECK(r.summary.unsupported == 1);
}
