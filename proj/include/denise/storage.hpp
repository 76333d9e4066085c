#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "denise/evaluation.hpp"
#include "denise/topicmodel.hpp"
#include "denise/types.hpp"

namespace denise {

// Throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// word2vec text format: a `<count> <dim>` header, then `<key> <v1> ... <vdim>`
// per line. Fields are separated by spaces or tabs; trailing whitespace and
// CRLF line ends are accepted. Throws FormatError with the 1-based line.
struct VectorTable {
  std::size_t dim = 0;
  std::vector<std::string> keys;
  std::vector<float> values;  // keys.size() x dim, row-major

  bool operator==(const VectorTable&) const = default;
};

VectorTable parse_word2vec_text(std::string_view content);
// Shortest round-trip decimal for every component.
std::string write_word2vec_text(const VectorTable& table);

struct LabeledDocument {
  std::string label;
  RawDocument document;

  bool operator==(const LabeledDocument&) const = default;
};

struct LabeledCorpus {
  std::vector<LabeledDocument> documents;

  std::vector<std::string> labels() const;  // sorted, unique
  bool operator==(const LabeledCorpus&) const = default;
};

// CSV with header `label,text`; document ids are `row-<n>` with n the record
// number (header is record 0).
LabeledCorpus parse_labeled_csv(std::string_view content);
LabeledCorpus read_labeled_csv(const std::filesystem::path& path);
std::string write_labeled_csv(const LabeledCorpus& corpus);
// <label>/<doc>.txt, ids `<label>/<doc>`, in path order.
LabeledCorpus read_labeled_directory(const std::filesystem::path& root);
// Directory or CSV file.
LabeledCorpus read_labeled_corpus(const std::filesystem::path& path);

struct TermConcordance {
  std::string term;
  std::string concordance;

  bool operator==(const TermConcordance&) const = default;
};

// CSV with header `term,concordance`.
std::vector<TermConcordance> parse_term_concordance_csv(std::string_view content);
std::vector<TermConcordance> read_term_concordance_csv(const std::filesystem::path& path);
std::string write_term_concordance_csv(std::span<const TermConcordance> rows);

// CSV with header `true,pred` or `true,pred,tag`; tag is empty when absent.
std::vector<TaggedPrediction> parse_predictions_csv(std::string_view content);

inline constexpr int kBundleVersion = 1;
inline constexpr std::string_view kBundleFormat = "denise-topic-model";

struct ModelBundle {
  int version = kBundleVersion;
  TopicModel model;
  std::string created;  // ISO-8601 UTC
  std::map<std::string, std::string> metadata;

  bool operator==(const ModelBundle&) const = default;
};

// JSON document carrying an FNV-1a 64 checksum of its canonical form, so
// corrupted files are rejected instead of loading a different model.
std::string serialize_bundle(const ModelBundle& bundle);
// Throws SchemaError or VersionMismatch.
ModelBundle deserialize_bundle(std::string_view json);
void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);
std::string bundle_checksum(std::string_view canonical_json);
std::string utc_timestamp();

}  // namespace denise
