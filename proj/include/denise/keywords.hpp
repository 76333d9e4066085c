#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "denise/resources.hpp"
#include "denise/types.hpp"

namespace denise {

// Undirected weighted co-occurrence graph. Each undirected edge is stored on
// both endpoints, so a node's out-weight is the sum of its incident weights.
class KeywordGraph {
 public:
  struct Neighbor {
    std::size_t node;
    double weight;
  };
  struct Edge {
    std::size_t u;
    std::size_t v;
    double weight;
  };

  // Returns the node index, adding the node if needed.
  std::size_t add_node(std::string_view token);
  // Adds weight to edge {u, v}. Self-loops and non-positive weights are rejected.
  void add_weight(std::size_t u, std::size_t v, double weight);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const;
  bool empty() const { return nodes_.empty(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  std::optional<std::size_t> find(std::string_view token) const;
  // Sorted by neighbor index.
  const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
  double out_weight(std::size_t node) const;
  double weight(std::size_t u, std::size_t v) const;
  // Each undirected edge once, with u < v, sorted.
  std::vector<Edge> edges() const;

  // `u<TAB>v<TAB>weight` per edge.
  std::string dump() const;

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// Nodes are the distinct NOUN/VERB/ADJ tokens; every pair of such tokens at
// most window-1 apart in the filtered sequence adds 1 to their edge.
KeywordGraph build_graph(const TokenStream& stream, std::size_t window = 2);

struct RankOptions {
  double damping = 0.85;
  double epsilon = 1e-6;
  int max_iterations = 100;
};

struct ScoredToken {
  std::string token;
  double score = 0.0;
};

struct RankedKeywords {
  std::vector<ScoredToken> ranking;  // score descending, ties by token
  double damping = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Weighted PageRank:
//   WS(i) = (1 - d) + d * sum_{j in In(i)} w_ji / (sum_{k in Out(j)} w_jk) * WS(j)
// from WS = 1 everywhere, synchronous updates, until the largest per-node
// change is below epsilon or max_iterations is reached.
RankedKeywords rank(const KeywordGraph& graph, const RankOptions& options = {});

// Scores in node order rather than sorted.
std::vector<double> rank_scores(const KeywordGraph& graph, const RankOptions& options,
                                int* iterations = nullptr, bool* converged = nullptr);

struct KeywordOptions {
  std::size_t window = 2;
  RankOptions rank;
};

struct Keyword {
  std::string token;
  PosTag tag = PosTag::kOther;
  double score = 0.0;
};

// Top-kw keywords of an already tagged stream. Stopwords are removed first;
// each keyword carries its majority tag among eligible occurrences.
std::vector<Keyword> extract_keywords(const TokenStream& tagged, const StopwordTable& stopwords,
                                      std::size_t kw, const KeywordOptions& options = {});

// normalize -> tokenize -> tag -> extract.
std::vector<Keyword> extract_keywords(std::string_view text, Language language, std::size_t kw,
                                      const LanguageResources& resources,
                                      const KeywordOptions& options = {});

}  // namespace denise
