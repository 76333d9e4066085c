#include "denise/storage.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "denise/csv.hpp"
#include "denise/errors.hpp"

namespace denise {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

namespace {

bool is_field_space(char c) { return c == ' ' || c == '\t'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_field_space(line[i])) ++i;
    if (i == line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && !is_field_space(line[i])) ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::size_t parse_count(std::string_view field, std::string_view what, std::size_t line) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    throw FormatError("header " + std::string(what) + " '" + std::string(field) +
                          "' is not a non-negative integer",
                      line);
  }
  return value;
}

float parse_component(std::string_view field, std::size_t line) {
  float value = 0.0F;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(value)) {
    throw FormatError("component '" + std::string(field) + "' is not a finite number", line);
  }
  return value;
}

}  // namespace

VectorTable parse_word2vec_text(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw FormatError("missing `<count> <dim>` header", 1);

  const auto header = split_fields(lines[0]);
  if (header.size() != 2) throw FormatError("header must be `<count> <dim>`", 1);
  const std::size_t count = parse_count(header[0], "count", 1);
  const std::size_t dim = parse_count(header[1], "dim", 1);
  if (dim == 0) throw FormatError("dimension must be positive", 1);

  VectorTable table;
  table.dim = dim;
  table.keys.reserve(count);
  table.values.reserve(count * dim);
  std::set<std::string_view> seen;
  std::size_t line_no = 1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    line_no = i + 1;
    const auto fields = split_fields(lines[i]);
    if (fields.empty()) {
      // Only trailing blank lines are tolerated.
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        if (!split_fields(lines[j]).empty()) throw FormatError("blank line inside data", line_no);
      }
      break;
    }
    if (table.keys.size() == count) {
      throw FormatError("more entries than the declared count " + std::to_string(count),
                        line_no);
    }
    if (fields.size() != dim + 1) {
      throw FormatError("expected " + std::to_string(dim) + " components, found " +
                            std::to_string(fields.size() - 1),
                        line_no);
    }
    const std::string_view key = fields[0];
    if (!is_valid_utf8(key)) throw FormatError("key is not valid UTF-8", line_no);
    if (!seen.insert(key).second) {
      throw FormatError("duplicate key '" + std::string(key) + "'", line_no);
    }
    table.keys.emplace_back(key);
    for (std::size_t d = 1; d <= dim; ++d) {
      table.values.push_back(parse_component(fields[d], line_no));
    }
  }
  if (table.keys.size() != count) {
    throw FormatError("header declares " + std::to_string(count) + " entries, found " +
                          std::to_string(table.keys.size()),
                      line_no);
  }
  return table;
}

std::string write_word2vec_text(const VectorTable& table) {
  std::string out = std::to_string(table.keys.size()) + ' ' + std::to_string(table.dim) + '\n';
  char buffer[64];
  for (std::size_t i = 0; i < table.keys.size(); ++i) {
    out += table.keys[i];
    for (std::size_t d = 0; d < table.dim; ++d) {
      const auto [end, ec] =
          std::to_chars(buffer, buffer + sizeof buffer, table.values[i * table.dim + d]);
      out += ' ';
      out.append(buffer, end);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> LabeledCorpus::labels() const {
  std::set<std::string> unique;
  for (const auto& doc : documents) unique.insert(doc.label);
  return {unique.begin(), unique.end()};
}

namespace {

std::vector<CsvRow> parse_with_header(std::string_view content,
                                      std::span<const std::string_view> expected) {
  auto rows = parse_csv(content);
  if (rows.empty()) throw CsvFormatError("missing header", 0);
  const CsvRow& header = rows[0];
  if (header.size() != expected.size() ||
      !std::equal(header.begin(), header.end(), expected.begin())) {
    std::string want;
    for (auto name : expected) want += (want.empty() ? "" : ",") + std::string(name);
    throw CsvFormatError("header must be `" + want + "`", 0);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != expected.size()) {
      throw CsvFormatError("expected " + std::to_string(expected.size()) + " fields, found " +
                               std::to_string(rows[r].size()),
                           r);
    }
  }
  return rows;
}

}  // namespace

LabeledCorpus parse_labeled_csv(std::string_view content) {
  static constexpr std::string_view kHeader[] = {"label", "text"};
  const auto rows = parse_with_header(content, kHeader);
  LabeledCorpus corpus;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r][0].empty()) throw CsvFormatError("empty label", r);
    RawDocument doc;
    doc.id = "row-" + std::to_string(r);
    doc.text = rows[r][1];
    corpus.documents.push_back({rows[r][0], std::move(doc)});
  }
  if (corpus.documents.empty()) throw EmptyCorpus("corpus has no documents");
  return corpus;
}

LabeledCorpus read_labeled_csv(const std::filesystem::path& path) {
  try {
    return parse_labeled_csv(read_file(path));
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

std::string write_labeled_csv(const LabeledCorpus& corpus) {
  std::string out = "label,text\r\n";
  for (const auto& doc : corpus.documents) {
    out += format_csv_row({doc.label, doc.document.text});
  }
  return out;
}

LabeledCorpus read_labeled_directory(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw IoError(root.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& label_dir : fs::directory_iterator(root)) {
    if (!label_dir.is_directory()) continue;
    for (const auto& entry : fs::directory_iterator(label_dir.path())) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
  }
  std::sort(files.begin(), files.end());
  LabeledCorpus corpus;
  for (const auto& file : files) {
    std::string label = file.parent_path().filename().string();
    RawDocument doc;
    doc.id = label + "/" + file.stem().string();
    doc.text = read_file(file);
    if (!is_valid_utf8(doc.text)) throw FormatError(file.string() + " is not valid UTF-8", 1);
    corpus.documents.push_back({std::move(label), std::move(doc)});
  }
  if (corpus.documents.empty()) throw EmptyCorpus("no <label>/<doc>.txt files under " + root.string());
  return corpus;
}

LabeledCorpus read_labeled_corpus(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return read_labeled_directory(path);
  return read_labeled_csv(path);
}

std::vector<TermConcordance> parse_term_concordance_csv(std::string_view content) {
  static constexpr std::string_view kHeader[] = {"term", "concordance"};
  const auto rows = parse_with_header(content, kHeader);
  std::vector<TermConcordance> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r][0].empty()) throw CsvFormatError("empty term", r);
    out.push_back({rows[r][0], rows[r][1]});
  }
  return out;
}

std::vector<TermConcordance> read_term_concordance_csv(const std::filesystem::path& path) {
  try {
    return parse_term_concordance_csv(read_file(path));
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

std::string write_term_concordance_csv(std::span<const TermConcordance> rows) {
  std::string out = "term,concordance\r\n";
  for (const auto& row : rows) out += format_csv_row({row.term, row.concordance});
  return out;
}

std::vector<TaggedPrediction> parse_predictions_csv(std::string_view content) {
  auto rows = parse_csv(content);
  if (rows.empty()) throw CsvFormatError("missing header", 0);
  const CsvRow& header = rows[0];
  const bool tagged = header == CsvRow{"true", "pred", "tag"};
  if (!tagged && header != CsvRow{"true", "pred"}) {
    throw CsvFormatError("header must be `true,pred` or `true,pred,tag`", 0);
  }
  std::vector<TaggedPrediction> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw CsvFormatError("expected " + std::to_string(header.size()) + " fields, found " +
                               std::to_string(rows[r].size()),
                           r);
    }
    out.push_back({tagged ? rows[r][2] : std::string(), rows[r][0], rows[r][1]});
  }
  if (out.empty()) throw CsvFormatError("no predictions", 0);
  return out;
}

std::string bundle_checksum(std::string_view canonical_json) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : canonical_json) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "fnv1a64:%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

namespace {

json bundle_body(const ModelBundle& bundle) {
  const TopicModel& m = bundle.model;
  const LogRegHyperparams& hp = m.logreg.hyperparams;
  json body = {
      {"format", kBundleFormat},
      {"version", bundle.version},
      {"language", language_code(m.language)},
      {"created", bundle.created},
      {"metadata", bundle.metadata},
      {"n_docs", m.tfidf.n_docs()},
      {"vocabulary", m.tfidf.terms()},
      {"document_frequency", m.tfidf.document_frequency()},
      {"idf", m.tfidf.idf()},
      {"classes", m.logreg.classes},
      {"n_features", m.logreg.n_features},
      {"weights", m.logreg.weights},
      {"intercepts", m.logreg.intercepts},
      {"hyperparameters",
       {{"penalty", "l2"},
        {"C", hp.C},
        {"tol", hp.tol},
        {"intercept_scaling", hp.intercept_scaling},
        {"max_iter", hp.max_iter}}},
      {"training", {{"converged", m.logreg.converged}, {"iterations", m.logreg.iterations}}},
  };
  return body;
}

template <typename T>
T field(const json& object, const char* name) {
  const auto it = object.find(name);
  if (it == object.end()) throw SchemaError(std::string("missing field '") + name + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("field '") + name + "' has the wrong type");
  }
}

void require_finite(const std::vector<double>& values, const char* name) {
  for (double v : values) {
    if (!std::isfinite(v)) throw SchemaError(std::string("non-finite value in '") + name + "'");
  }
}

}  // namespace

std::string serialize_bundle(const ModelBundle& bundle) {
  json body = bundle_body(bundle);
  body["checksum"] = bundle_checksum(body.dump());
  return body.dump(1) + "\n";
}

ModelBundle deserialize_bundle(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("bundle must be a JSON object");
  if (field<std::string>(doc, "format") != kBundleFormat) {
    throw SchemaError("not a " + std::string(kBundleFormat) + " document");
  }
  const auto version_it = doc.find("version");
  if (version_it == doc.end() || !version_it->is_number_integer()) {
    throw SchemaError("missing integer 'version'");
  }
  const auto version = version_it->get<std::int64_t>();
  if (version != kBundleVersion) {
    throw VersionMismatch("bundle version " + std::to_string(version) + ", expected " +
                          std::to_string(kBundleVersion));
  }
  const auto checksum = field<std::string>(doc, "checksum");
  json body = doc;
  body.erase("checksum");
  if (bundle_checksum(body.dump()) != checksum) throw SchemaError("checksum mismatch");

  ModelBundle bundle;
  bundle.version = static_cast<int>(version);
  bundle.created = field<std::string>(doc, "created");
  bundle.metadata = field<std::map<std::string, std::string>>(doc, "metadata");

  TopicModel& m = bundle.model;
  const auto language = parse_language(field<std::string>(doc, "language"));
  if (!language) throw SchemaError("unknown language code");
  m.language = *language;

  auto vocabulary = field<std::vector<std::string>>(doc, "vocabulary");
  auto df = field<std::vector<std::uint64_t>>(doc, "document_frequency");
  const auto n_docs = field<std::uint64_t>(doc, "n_docs");
  m.tfidf = TfIdfModel::from_parts(std::move(vocabulary), std::move(df), n_docs);
  if (field<std::vector<double>>(doc, "idf") != m.tfidf.idf()) {
    throw SchemaError("idf does not match document frequencies");
  }

  LogRegModel& lr = m.logreg;
  lr.classes = field<std::vector<std::string>>(doc, "classes");
  lr.n_features = field<std::size_t>(doc, "n_features");
  lr.weights = field<std::vector<double>>(doc, "weights");
  lr.intercepts = field<std::vector<double>>(doc, "intercepts");
  if (lr.classes.size() < 2) throw SchemaError("need at least two classes");
  if (!std::is_sorted(lr.classes.begin(), lr.classes.end()) ||
      std::adjacent_find(lr.classes.begin(), lr.classes.end()) != lr.classes.end()) {
    throw SchemaError("classes must be sorted and unique");
  }
  if (lr.n_features != m.tfidf.size()) throw SchemaError("n_features differs from vocabulary size");
  if (lr.weights.size() != lr.classes.size() * lr.n_features) {
    throw SchemaError("weights length " + std::to_string(lr.weights.size()) + ", expected " +
                      std::to_string(lr.classes.size() * lr.n_features));
  }
  if (lr.intercepts.size() != lr.classes.size()) throw SchemaError("intercepts length mismatch");
  require_finite(lr.weights, "weights");
  require_finite(lr.intercepts, "intercepts");

  const auto hp = field<json>(doc, "hyperparameters");
  if (field<std::string>(hp, "penalty") != "l2") throw SchemaError("unsupported penalty");
  lr.hyperparams.C = field<double>(hp, "C");
  lr.hyperparams.tol = field<double>(hp, "tol");
  lr.hyperparams.intercept_scaling = field<double>(hp, "intercept_scaling");
  lr.hyperparams.max_iter = field<int>(hp, "max_iter");
  const auto training = field<json>(doc, "training");
  lr.converged = field<bool>(training, "converged");
  lr.iterations = field<int>(training, "iterations");

  if (bundle_body(bundle) != body) throw SchemaError("unexpected or malformed fields");
  return bundle;
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  write_file(path, serialize_bundle(bundle));
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  try {
    return deserialize_bundle(read_file(path));
  } catch (Error& e) {
    e.add_context(path.string());
    throw;
  }
}

}  // namespace denise
