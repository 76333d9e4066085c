#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "denise/topicmodel.hpp"
#include "denise/types.hpp"

namespace denise {

// plain: one vector per word (Word2Vec-style keys).
// sense: one vector per `token|TAG` pair (Sense2Vec-style keys).
// subword: word vectors plus character n-gram vectors used to compose
//          vectors for out-of-vocabulary tokens (FastText-style).
enum class Backend { kPlain, kSense, kSubword };

std::string_view backend_name(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

inline constexpr std::size_t kMinNgram = 3;
inline constexpr std::size_t kMaxNgram = 6;
inline constexpr char kSenseSeparator = '|';

// Immutable key -> vector map. A unit-normalized copy of every vector is kept
// for similarity; zero vectors load fine but never appear as neighbors.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  // Parses word2vec text content (see storage.hpp). The n-gram table is
  // required for, and only accepted by, the subword backend.
  static EmbeddingStore parse(std::string_view vectors, Backend backend,
                              std::string_view ngrams = {});
  static EmbeddingStore load(const std::filesystem::path& vectors, Backend backend,
                             const std::filesystem::path& ngrams = {});
  static EmbeddingStore from_entries(
      Backend backend, std::size_t dim,
      std::vector<std::pair<std::string, std::vector<float>>> entries,
      std::vector<std::pair<std::string, std::vector<float>>> ngram_entries = {});

  Backend backend() const { return backend_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }
  std::size_t ngram_count() const { return ngram_keys_.size(); }

  std::optional<std::size_t> find(std::string_view key) const;
  const std::string& key(std::size_t index) const { return keys_[index]; }
  std::span<const float> vector(std::size_t index) const;
  std::span<const float> unit_vector(std::size_t index) const;
  bool degenerate(std::size_t index) const { return degenerate_[index] != 0; }
  std::optional<std::span<const float>> ngram(std::string_view gram) const;

  // Cosine similarity of two entries computed on the normalized copies,
  // clamped to [-1, 1].
  double similarity(std::size_t a, std::size_t b) const;

  // Word vectors back in word2vec text format.
  std::string dump() const;

 private:
  void add(std::string key, std::span<const float> values, std::size_t line);

  Backend backend_ = Backend::kPlain;
  std::size_t dim_ = 0;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> raw_;
  std::vector<float> unit_;
  std::vector<unsigned char> degenerate_;
  std::vector<std::string> ngram_keys_;
  std::unordered_map<std::string, std::size_t> ngram_index_;
  std::vector<float> ngram_values_;
};

struct ResolvedKey {
  std::string key;
  // Subword backend only: the token is absent and must be composed.
  bool synthetic = false;
};

inline constexpr std::string_view kSyntheticKeyPrefix = "<oov>";

// plain: the token itself. sense: token|tag, then token|NOUN, token|VERB,
// token|ADJ. subword: the token when stored, otherwise a synthetic key.
// nullopt when nothing matches.
std::optional<ResolvedKey> resolve_key(const EmbeddingStore& store, std::string_view token,
                                       std::optional<PosTag> tag = std::nullopt);

// Character n-grams (n in [min_n, max_n], code-point based) of `<token>`, in
// order of length then position. Duplicates are kept.
std::vector<std::string> char_ngrams(std::string_view token, std::size_t min_n = kMinNgram,
                                     std::size_t max_n = kMaxNgram);

// Mean of the stored n-gram vectors of token. Throws NoSubwordCoverage when
// none is stored.
std::vector<float> compose_oov(const EmbeddingStore& store, std::string_view token);

struct Neighbor {
  std::string key;
  double similarity = 0.0;
};

struct SemanticField {
  std::string keyword;
  std::string query_key;
  std::vector<Neighbor> neighbors;  // similarity descending, ties by key
  std::size_t topn_requested = 0;

  // Neighbor keys with sense suffixes removed.
  std::vector<std::string> surfaces() const;
};

inline constexpr std::size_t kDefaultTopn = 140;

// Exact cosine scan over all entries, query key excluded.
SemanticField most_similar(const EmbeddingStore& store, std::string_view key,
                           std::size_t topn = kDefaultTopn);
SemanticField most_similar(const EmbeddingStore& store, std::span<const float> query,
                           std::size_t topn = kDefaultTopn, std::string_view exclude_key = {});

// Strips a trailing `|TAG` from sense keys.
std::string_view key_surface(std::string_view key);

// Thresholds used by diagnose_sf.
inline constexpr double kVariantShare = 0.5;
inline constexpr std::size_t kVariantEditDistance = 2;
inline constexpr double kForeignShare = 0.5;
inline constexpr double kAmbiguityGap = 0.2;

struct SfDiagnostics {
  bool non_informative = false;
  bool ambiguous = false;
  bool l2_in_l1 = false;

  std::size_t neighbor_count = 0;
  std::size_t variant_count = 0;   // orthographic variants of the keyword
  std::size_t foreign_count = 0;   // neighbors unknown to the working language
  double probability_gap = 1.0;    // top-1 minus top-2 class probability

  std::vector<std::string> flags() const;
};

// Membership test for words of the working language.
using KnownWordPredicate = std::function<bool(std::string_view)>;

// Code-point Levenshtein distance.
std::size_t edit_distance(std::string_view a, std::string_view b);
bool is_orthographic_variant(std::string_view neighbor_key, std::string_view keyword);

// non_informative: >= 50% of neighbors are variants of the keyword
// (edit distance <= 2 after stripping punctuation, or containing it).
// l2_in_l1: >= 50% of neighbors are not known words of the language.
// ambiguous: the topic model's top-2 probability gap over the field is < 0.2.
SfDiagnostics diagnose_sf(const SemanticField& sf, Language language, const TopicModel& model,
                          const StopwordTable& stopwords, const KnownWordPredicate& is_known);

}  // namespace denise
