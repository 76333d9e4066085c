#include "denise/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "denise/csv.hpp"
#include "denise/textprep.hpp"

namespace denise {

using nlohmann::json;

namespace {

json optional_string(const std::string& value) {
  return value.empty() ? json(nullptr) : json(value);
}

json diagnostics_json(const SfDiagnostics& d) {
  return {{"flags", d.flags()},
          {"neighbor_count", d.neighbor_count},
          {"variant_count", d.variant_count},
          {"foreign_count", d.foreign_count},
          {"probability_gap", d.probability_gap}};
}

json record_json(const KeywordRecord& r) {
  json out = {{"keyword", r.keyword},
              {"tag", pos_name(r.tag)},
              {"score", r.score ? json(*r.score) : json(nullptr)},
              {"injected", r.injected},
              {"status", keyword_status_name(r.status)},
              {"query_key", optional_string(r.query_key)},
              {"synthetic_key", r.synthetic_key},
              {"sf_topic", optional_string(r.sf_topic)},
              {"sf_topic_raw", optional_string(r.sf_topic_raw)},
              {"candidate", r.candidate}};
  if (r.sf) {
    json neighbors = json::array();
    for (const Neighbor& n : r.sf->neighbors) {
      neighbors.push_back({{"key", n.key}, {"similarity", n.similarity}});
    }
    out["semantic_field"] = {{"topn_requested", r.sf->topn_requested},
                             {"neighbors", std::move(neighbors)}};
  } else {
    out["semantic_field"] = nullptr;
  }
  out["diagnostics"] = r.diagnostics ? diagnostics_json(*r.diagnostics) : json(nullptr);
  return out;
}

json pipeline_json(const PipelineReport& report) {
  json keywords = json::array();
  for (const KeywordRecord& r : report.keywords) keywords.push_back(record_json(r));
  json candidates = json::array();
  for (const SNCandidate& c : report.candidates) {
    candidates.push_back({{"keyword", c.keyword},
                          {"tag", pos_name(c.keyword_tag)},
                          {"text_topic", c.text_topic},
                          {"sf_topic", c.sf_topic},
                          {"flags", c.diagnostics.flags()}});
  }
  return {{"doc_id", report.doc_id},
          {"language", language_code(report.language)},
          {"language_detected", report.language_detected},
          {"text_topic", report.text_topic},
          {"text_topic_raw", report.text_topic_raw},
          {"topic_declared", report.topic_declared},
          {"keywords", std::move(keywords)},
          {"candidates", std::move(candidates)}};
}

std::string join_flags(const std::optional<SfDiagnostics>& d) {
  std::string out;
  if (!d) return out;
  for (const std::string& flag : d->flags()) {
    if (!out.empty()) out += ';';
    out += flag;
  }
  return out;
}

void append_csv_rows(std::string& out, const PipelineReport& report) {
  for (const KeywordRecord& r : report.keywords) {
    out += format_csv_row({r.keyword, std::string(pos_name(r.tag)), report.text_topic, r.sf_topic,
                           r.candidate ? "true" : "false", join_flags(r.diagnostics)});
  }
}

constexpr const char* kCsvHeader = "keyword,tag,text_topic,sf_topic,candidate,flags\r\n";

json summary_json(const CoverageSummary& s) {
  return {{"rows", s.rows},
          {"too_short", s.too_short},
          {"unsupported_language", s.unsupported},
          {"expected", s.expected},
          {"recovered", s.recovered},
          {"percentage", format_percentage(s.percentage())},
          {"term_candidates", s.term_candidates},
          {"candidates", s.candidates}};
}

json metrics_json(const ClassMetrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
}

}  // namespace

std::string report_json(const PipelineReport& report) {
  return pipeline_json(report).dump(2) + "\n";
}

std::string report_csv(std::span<const PipelineReport> reports) {
  std::string out = kCsvHeader;
  for (const PipelineReport& report : reports) append_csv_rows(out, report);
  return out;
}

std::string report_text(const PipelineReport& report) {
  std::string out;
  out += "document: " + report.doc_id + "\n";
  out += "language: " + std::string(language_code(report.language)) +
         (report.language_detected ? " (detected)" : "") + "\n";
  out += "text topic: " + report.text_topic + " (" + report.text_topic_raw + ")\n";
  out += "keywords:\n";
  for (const KeywordRecord& r : report.keywords) {
    out += "  " + r.keyword + " [" + std::string(pos_name(r.tag)) + "] ";
    if (r.resolved()) {
      out += "sf_topic=" + r.sf_topic + (r.candidate ? " CANDIDATE" : "");
      const std::string flags = join_flags(r.diagnostics);
      if (!flags.empty()) out += " flags=" + flags;
    } else {
      out += std::string(keyword_status_name(r.status));
    }
    out += "\n";
  }
  out += "candidates:";
  if (report.candidates.empty()) out += " none";
  for (const SNCandidate& c : report.candidates) out += " " + c.keyword;
  out += "\n";
  return out;
}

std::string batch_json(const BatchResult& batch) {
  json rows = json::array();
  for (const BatchRow& row : batch.rows) {
    rows.push_back({{"row", row.row},
                    {"term", row.term},
                    {"status", row_status_name(row.status)},
                    {"term_resolved", row.term_resolved},
                    {"report", row.report ? pipeline_json(*row.report) : json(nullptr)}});
  }
  json out = {{"rows", std::move(rows)}, {"summary", summary_json(batch.summary)}};
  return out.dump(2) + "\n";
}

std::string batch_csv(const BatchResult& batch) {
  std::string out = kCsvHeader;
  for (const BatchRow& row : batch.rows) {
    if (row.report) append_csv_rows(out, *row.report);
  }
  return out;
}

std::string format_percentage(double percent) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.1f", percent);
  std::string out = buffer;
  if (out.size() > 2 && out.compare(out.size() - 2, 2, ".0") == 0) out.resize(out.size() - 2);
  return out + "%";
}

std::string coverage_table(const CoverageSummary& summary, std::string_view model_name) {
  const int width = static_cast<int>(std::max<std::size_t>(model_name.size(), 5)) + 2;
  char line[256];
  std::string out;
  std::snprintf(line, sizeof line, "%-*s%10s%11s%12s\n", width, "Model", "Expected", "Recovered",
                "Percentage");
  out += line;
  std::snprintf(line, sizeof line, "%-*s%10zu%11zu%12s\n", width, std::string(model_name).c_str(),
                summary.expected, summary.recovered,
                format_percentage(summary.percentage()).c_str());
  out += line;
  return out;
}

std::string classification_json(const ClassificationReport& report) {
  json classes = json::object();
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    classes[report.classes[c]] = metrics_json(report.per_class[c]);
  }
  json out = {{"classes", std::move(classes)},
              {"micro avg", metrics_json(report.micro)},
              {"macro avg", metrics_json(report.macro)},
              {"weighted avg", metrics_json(report.weighted)},
              {"accuracy", report.accuracy}};
  return out.dump(2) + "\n";
}

std::string confusion_text(const ConfusionMatrix& cm) {
  std::size_t width = 6;
  for (const std::string& c : cm.classes) width = std::max(width, utf8_length(c) + 1);
  std::string out(width, ' ');
  for (const std::string& c : cm.classes) out += std::string(width - utf8_length(c), ' ') + c;
  out += "\n";
  for (std::size_t r = 0; r < cm.classes.size(); ++r) {
    out += cm.classes[r] + std::string(width - utf8_length(cm.classes[r]), ' ');
    for (std::size_t value : cm.counts[r]) {
      const std::string cell = std::to_string(value);
      out += std::string(width - std::min(width, cell.size()), ' ') + cell;
    }
    out += "\n";
  }
  return out;
}

}  // namespace denise
