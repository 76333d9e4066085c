#include "denise/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "denise/errors.hpp"
#include "denise/storage.hpp"
#include "denise/textprep.hpp"

namespace denise {

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kPlain: return "plain";
    case Backend::kSense: return "sense";
    case Backend::kSubword: return "subword";
  }
  return "plain";
}

std::optional<Backend> parse_backend(std::string_view name) {
  for (Backend b : {Backend::kPlain, Backend::kSense, Backend::kSubword}) {
    if (backend_name(b) == name) return b;
  }
  return std::nullopt;
}

std::string_view key_surface(std::string_view key) {
  const auto bar = key.rfind(kSenseSeparator);
  if (bar == std::string_view::npos || bar == 0) return key;
  if (!parse_pos(key.substr(bar + 1))) return key;
  return key.substr(0, bar);
}

namespace {

bool valid_sense_key(std::string_view key) {
  const auto bar = key.rfind(kSenseSeparator);
  return bar != std::string_view::npos && bar > 0 && parse_pos(key.substr(bar + 1)).has_value();
}

std::vector<std::pair<std::string, std::vector<float>>> split_table(const VectorTable& table) {
  std::vector<std::pair<std::string, std::vector<float>>> out;
  out.reserve(table.keys.size());
  for (std::size_t i = 0; i < table.keys.size(); ++i) {
    const float* row = table.values.data() + i * table.dim;
    out.emplace_back(table.keys[i], std::vector<float>(row, row + table.dim));
  }
  return out;
}

}  // namespace

void EmbeddingStore::add(std::string key, std::span<const float> values, std::size_t line) {
  if (values.size() != dim_) {
    throw FormatError("vector for '" + key + "' has " + std::to_string(values.size()) +
                          " components, expected " + std::to_string(dim_),
                      line);
  }
  if (key.empty() || key.find_first_of(" \t\r\n") != std::string::npos) {
    throw FormatError("keys must be non-empty and contain no whitespace", line);
  }
  if (backend_ == Backend::kSense && !valid_sense_key(key)) {
    throw FormatError("sense key '" + key + "' must look like token|TAG", line);
  }
  if (!index_.emplace(key, keys_.size()).second) {
    throw FormatError("duplicate key '" + key + "'", line);
  }
  keys_.push_back(std::move(key));
  raw_.insert(raw_.end(), values.begin(), values.end());

  double sum = 0.0;
  for (float v : values) {
    if (!std::isfinite(v)) throw FormatError("non-finite vector component", line);
    sum += static_cast<double>(v) * static_cast<double>(v);
  }
  const double norm = std::sqrt(sum);
  degenerate_.push_back(norm > 0.0 ? 0 : 1);
  for (float v : values) {
    unit_.push_back(norm > 0.0 ? static_cast<float>(static_cast<double>(v) / norm) : 0.0f);
  }
}

EmbeddingStore EmbeddingStore::from_entries(
    Backend backend, std::size_t dim,
    std::vector<std::pair<std::string, std::vector<float>>> entries,
    std::vector<std::pair<std::string, std::vector<float>>> ngram_entries) {
  if (dim == 0) throw FormatError("vector dimension must be positive", 0);
  if (backend != Backend::kSubword && !ngram_entries.empty()) {
    throw InvalidArgument("n-gram vectors are only used by the subword backend");
  }
  EmbeddingStore store;
  store.backend_ = backend;
  store.dim_ = dim;
  store.keys_.reserve(entries.size());
  store.raw_.reserve(entries.size() * dim);
  store.unit_.reserve(entries.size() * dim);
  std::size_t line = 1;
  for (auto& [key, values] : entries) store.add(std::move(key), values, ++line);

  line = 1;
  for (auto& [gram, values] : ngram_entries) {
    ++line;
    if (values.size() != dim) {
      throw FormatError("n-gram '" + gram + "' has wrong dimension", line);
    }
    if (!store.ngram_index_.emplace(gram, store.ngram_keys_.size()).second) {
      throw FormatError("duplicate n-gram '" + gram + "'", line);
    }
    store.ngram_keys_.push_back(std::move(gram));
    store.ngram_values_.insert(store.ngram_values_.end(), values.begin(), values.end());
  }
  return store;
}

EmbeddingStore EmbeddingStore::parse(std::string_view vectors, Backend backend,
                                     std::string_view ngrams) {
  const VectorTable words = parse_word2vec_text(vectors);
  std::vector<std::pair<std::string, std::vector<float>>> gram_entries;
  if (!ngrams.empty()) {
    if (backend != Backend::kSubword) {
      throw InvalidArgument("n-gram vectors are only used by the subword backend");
    }
    const VectorTable grams = parse_word2vec_text(ngrams);
    if (grams.dim != words.dim) {
      throw FormatError("n-gram and word vectors differ in dimension", 1);
    }
    gram_entries = split_table(grams);
  }
  return from_entries(backend, words.dim, split_table(words), std::move(gram_entries));
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& vectors, Backend backend,
                                    const std::filesystem::path& ngrams) {
  const std::string content = read_file(vectors);
  const std::string gram_content = ngrams.empty() ? std::string() : read_file(ngrams);
  if (backend == Backend::kSubword && ngrams.empty()) {
    throw InvalidArgument("the subword backend needs an n-gram vector file");
  }
  return parse(content, backend, gram_content);
}

std::optional<std::size_t> EmbeddingStore::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingStore::vector(std::size_t index) const {
  return {raw_.data() + index * dim_, dim_};
}

std::span<const float> EmbeddingStore::unit_vector(std::size_t index) const {
  return {unit_.data() + index * dim_, dim_};
}

std::optional<std::span<const float>> EmbeddingStore::ngram(std::string_view gram) const {
  auto it = ngram_index_.find(std::string(gram));
  if (it == ngram_index_.end()) return std::nullopt;
  return std::span<const float>(ngram_values_.data() + it->second * dim_, dim_);
}

namespace {

double dot_unit(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

}  // namespace

double EmbeddingStore::similarity(std::size_t a, std::size_t b) const {
  return std::clamp(dot_unit(unit_vector(a), unit_vector(b)), -1.0, 1.0);
}

std::string EmbeddingStore::dump() const {
  VectorTable table;
  table.dim = dim_;
  table.keys = keys_;
  table.values = raw_;
  return write_word2vec_text(table);
}

std::optional<ResolvedKey> resolve_key(const EmbeddingStore& store, std::string_view token,
                                       std::optional<PosTag> tag) {
  switch (store.backend()) {
    case Backend::kPlain:
      if (store.find(token)) return ResolvedKey{std::string(token), false};
      return std::nullopt;
    case Backend::kSense: {
      std::vector<PosTag> order;
      if (tag) order.push_back(*tag);
      for (PosTag fallback : {PosTag::kNoun, PosTag::kVerb, PosTag::kAdj}) {
        if (std::find(order.begin(), order.end(), fallback) == order.end()) {
          order.push_back(fallback);
        }
      }
      for (PosTag t : order) {
        std::string key = std::string(token) + kSenseSeparator + std::string(pos_name(t));
        if (store.find(key)) return ResolvedKey{std::move(key), false};
      }
      return std::nullopt;
    }
    case Backend::kSubword:
      if (store.find(token)) return ResolvedKey{std::string(token), false};
      return ResolvedKey{std::string(kSyntheticKeyPrefix) + std::string(token), true};
  }
  return std::nullopt;
}

std::vector<std::string> char_ngrams(std::string_view token, std::size_t min_n,
                                     std::size_t max_n) {
  // Code-point boundaries of "<token>".
  const std::string marked = "<" + std::string(token) + ">";
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if ((static_cast<unsigned char>(marked[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  starts.push_back(marked.size());
  const std::size_t length = starts.size() - 1;

  std::vector<std::string> grams;
  for (std::size_t n = min_n; n <= max_n; ++n) {
    for (std::size_t i = 0; i + n <= length; ++i) {
      grams.push_back(marked.substr(starts[i], starts[i + n] - starts[i]));
    }
  }
  return grams;
}

std::vector<float> compose_oov(const EmbeddingStore& store, std::string_view token) {
  std::vector<double> sum(store.dim(), 0.0);
  std::size_t found = 0;
  for (const std::string& gram : char_ngrams(token)) {
    if (auto values = store.ngram(gram)) {
      for (std::size_t i = 0; i < store.dim(); ++i) sum[i] += (*values)[i];
      ++found;
    }
  }
  if (found == 0) {
    throw NoSubwordCoverage("no character n-gram of '" + std::string(token) + "' is stored");
  }
  std::vector<float> out(store.dim());
  for (std::size_t i = 0; i < store.dim(); ++i) {
    out[i] = static_cast<float>(sum[i] / static_cast<double>(found));
  }
  return out;
}

std::vector<std::string> SemanticField::surfaces() const {
  std::vector<std::string> out;
  out.reserve(neighbors.size());
  for (const Neighbor& n : neighbors) out.emplace_back(key_surface(n.key));
  return out;
}

namespace {

struct Candidate {
  double similarity;
  std::size_t index;
};

SemanticField scan(const EmbeddingStore& store, std::span<const float> unit_query,
                   std::size_t topn, std::optional<std::size_t> exclude) {
  if (topn < 1) throw InvalidArgument("topn must be >= 1");
  // "better" ordering: higher similarity, then smaller key.
  auto better = [&store](const Candidate& a, const Candidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return store.key(a.index) < store.key(b.index);
  };
  // Max-heap on "worse", so the top is the weakest kept candidate.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(better)> kept(better);
  for (std::size_t i = 0; i < store.size(); ++i) {
    if (store.degenerate(i) || (exclude && *exclude == i)) continue;
    const Candidate c{std::clamp(dot_unit(unit_query, store.unit_vector(i)), -1.0, 1.0), i};
    if (kept.size() < topn) {
      kept.push(c);
    } else if (better(c, kept.top())) {
      kept.pop();
      kept.push(c);
    }
  }
  std::vector<Candidate> ordered;
  ordered.reserve(kept.size());
  while (!kept.empty()) {
    ordered.push_back(kept.top());
    kept.pop();
  }
  std::reverse(ordered.begin(), ordered.end());

  SemanticField sf;
  sf.topn_requested = topn;
  sf.neighbors.reserve(ordered.size());
  for (const Candidate& c : ordered) {
    sf.neighbors.push_back({store.key(c.index), c.similarity});
  }
  return sf;
}

}  // namespace

SemanticField most_similar(const EmbeddingStore& store, std::string_view key, std::size_t topn) {
  const auto index = store.find(key);
  if (!index) throw NotFound("key '" + std::string(key) + "' is not in the embedding store");
  SemanticField sf;
  if (store.degenerate(*index)) {
    sf.topn_requested = topn;
  } else {
    sf = scan(store, store.unit_vector(*index), topn, index);
  }
  sf.keyword = std::string(key_surface(key));
  sf.query_key = std::string(key);
  return sf;
}

SemanticField most_similar(const EmbeddingStore& store, std::span<const float> query,
                           std::size_t topn, std::string_view exclude_key) {
  if (query.size() != store.dim()) throw InvalidArgument("query has the wrong dimension");
  double sum = 0.0;
  for (float v : query) sum += static_cast<double>(v) * static_cast<double>(v);
  const double norm = std::sqrt(sum);
  SemanticField sf;
  sf.topn_requested = topn;
  if (norm > 0.0) {
    std::vector<float> unit(query.size());
    for (std::size_t i = 0; i < query.size(); ++i) {
      unit[i] = static_cast<float>(static_cast<double>(query[i]) / norm);
    }
    std::optional<std::size_t> exclude;
    if (!exclude_key.empty()) exclude = store.find(exclude_key);
    sf = scan(store, unit, topn, exclude);
  }
  sf.query_key = std::string(exclude_key);
  sf.keyword = std::string(key_surface(exclude_key));
  return sf;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  auto code_points = [](std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t j = i + 1;
      while (j < s.size() && (static_cast<unsigned char>(s[j]) & 0xC0) == 0x80) ++j;
      out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  };
  const auto x = code_points(a);
  const auto y = code_points(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    prev.swap(cur);
  }
  return prev[y.size()];
}

namespace {

std::string squash(std::string_view text) {
  std::string out;
  for (char c : normalize(text)) {
    if (c != ' ' && c != '-' && c != '_') out += c;
  }
  return out;
}

// Known as a whole, or every space/underscore-separated part is known.
bool is_known_surface(std::string_view raw, const KnownWordPredicate& is_known) {
  const std::string surface = normalize(raw);
  if (surface.empty()) return false;
  if (is_known(surface)) return true;
  bool any = false;
  std::size_t start = 0;
  while (start <= surface.size()) {
    const auto end = surface.find_first_of(" _", start);
    const std::string_view part =
        std::string_view(surface).substr(start, end == std::string::npos ? std::string::npos
                                                                         : end - start);
    if (!part.empty()) {
      if (!is_known(part)) return false;
      any = true;
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return any;
}

}  // namespace

bool is_orthographic_variant(std::string_view neighbor_key, std::string_view keyword) {
  const std::string neighbor = squash(key_surface(neighbor_key));
  const std::string word = squash(keyword);
  if (word.empty() || neighbor.empty()) return false;
  if (neighbor.find(word) != std::string::npos) return true;
  return edit_distance(neighbor, word) <= kVariantEditDistance;
}

std::vector<std::string> SfDiagnostics::flags() const {
  std::vector<std::string> out;
  if (non_informative) out.emplace_back("non_informative");
  if (ambiguous) out.emplace_back("ambiguous");
  if (l2_in_l1) out.emplace_back("l2_in_l1");
  return out;
}

SfDiagnostics diagnose_sf(const SemanticField& sf, Language language, const TopicModel& model,
                          const StopwordTable& stopwords, const KnownWordPredicate& is_known) {
  SfDiagnostics d;
  d.neighbor_count = sf.neighbors.size();
  const std::string keyword = sf.keyword.empty() ? std::string(key_surface(sf.query_key))
                                                 : sf.keyword;
  for (const Neighbor& n : sf.neighbors) {
    if (is_orthographic_variant(n.key, keyword)) ++d.variant_count;
    if (!is_known_surface(key_surface(n.key), is_known)) ++d.foreign_count;
  }
  if (d.neighbor_count > 0) {
    const auto total = static_cast<double>(d.neighbor_count);
    d.non_informative = static_cast<double>(d.variant_count) / total >= kVariantShare;
    d.l2_in_l1 = static_cast<double>(d.foreign_count) / total >= kForeignShare;
  }

  const std::vector<std::string> surfaces = sf.surfaces();
  const TopicPrediction prediction = analyze_topic(surfaces, language, model, stopwords);
  std::vector<double> p = prediction.probabilities;
  std::sort(p.begin(), p.end(), std::greater<>());
  d.probability_gap = p.size() >= 2 ? p[0] - p[1] : 1.0;
  d.ambiguous = d.neighbor_count > 0 && d.probability_gap < kAmbiguityGap;
  return d;
}

}  // namespace denise
