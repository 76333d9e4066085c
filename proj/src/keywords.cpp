#include "denise/keywords.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "denise/errors.hpp"
#include "denise/postag.hpp"
#include "denise/textprep.hpp"

namespace denise {

std::size_t KeywordGraph::add_node(std::string_view token) {
  auto [it, inserted] = index_.try_emplace(std::string(token), nodes_.size());
  if (inserted) {
    nodes_.emplace_back(token);
    adjacency_.emplace_back();
  }
  return it->second;
}

void KeywordGraph::add_weight(std::size_t u, std::size_t v, double weight) {
  if (u >= nodes_.size() || v >= nodes_.size()) throw InvalidArgument("edge endpoint out of range");
  if (u == v) throw InvalidArgument("self-loops are not allowed");
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw InvalidArgument("edge weights must be positive and finite");
  }
  auto bump = [](std::vector<Neighbor>& list, std::size_t node, double w) {
    auto it = std::lower_bound(list.begin(), list.end(), node,
                               [](const Neighbor& n, std::size_t key) { return n.node < key; });
    if (it != list.end() && it->node == node) {
      it->weight += w;
    } else {
      list.insert(it, Neighbor{node, w});
    }
  };
  bump(adjacency_[u], v, weight);
  bump(adjacency_[v], u, weight);
}

std::size_t KeywordGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency_) total += list.size();
  return total / 2;
}

std::optional<std::size_t> KeywordGraph::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double KeywordGraph::out_weight(std::size_t node) const {
  double sum = 0.0;
  for (const Neighbor& n : adjacency_[node]) sum += n.weight;
  return sum;
}

double KeywordGraph::weight(std::size_t u, std::size_t v) const {
  for (const Neighbor& n : adjacency_[u]) {
    if (n.node == v) return n.weight;
  }
  return 0.0;
}

std::vector<KeywordGraph::Edge> KeywordGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    for (const Neighbor& n : adjacency_[u]) {
      if (u < n.node) out.push_back({u, n.node, n.weight});
    }
  }
  return out;
}

std::string KeywordGraph::dump() const {
  std::ostringstream out;
  out.precision(17);
  for (const Edge& e : edges()) {
    out << nodes_[e.u] << '\t' << nodes_[e.v] << '\t' << e.weight << '\n';
  }
  return out.str();
}

KeywordGraph build_graph(const TokenStream& stream, std::size_t window) {
  if (window < 2) throw InvalidArgument("co-occurrence window must be >= 2");
  KeywordGraph graph;
  std::vector<std::size_t> sequence;
  for (const Token& token : stream.tokens) {
    if (token.pos && is_content_tag(*token.pos)) {
      sequence.push_back(graph.add_node(token.normalized));
    }
  }
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    for (std::size_t j = i + 1; j < sequence.size() && j - i < window; ++j) {
      if (sequence[i] != sequence[j]) graph.add_weight(sequence[i], sequence[j], 1.0);
    }
  }
  return graph;
}

std::vector<double> rank_scores(const KeywordGraph& graph, const RankOptions& options,
                                int* iterations, bool* converged) {
  if (graph.empty()) throw EmptyGraph("cannot rank an empty graph");
  if (!(options.damping >= 0.0 && options.damping <= 1.0)) {
    throw InvalidArgument("damping must lie in [0, 1]");
  }
  const std::size_t n = graph.node_count();

  // Transition share of each in-link, w_ji / sum_k w_jk, stored per target i.
  struct InLink {
    std::size_t from;
    double share;
  };
  std::vector<double> out_weight(n);
  for (std::size_t j = 0; j < n; ++j) out_weight[j] = graph.out_weight(j);
  std::vector<std::vector<InLink>> in_links(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& neighbor : graph.neighbors(i)) {
      in_links[i].push_back({neighbor.node, neighbor.weight / out_weight[neighbor.node]});
    }
  }

  const double base = 1.0 - options.damping;
  std::vector<double> scores(n, 1.0), next(n);
  int iteration = 0;
  bool done = false;
  while (iteration < options.max_iterations) {
    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const InLink& link : in_links[i]) sum += link.share * scores[link.from];
      next[i] = base + options.damping * sum;
      max_change = std::max(max_change, std::abs(next[i] - scores[i]));
    }
    scores.swap(next);
    ++iteration;
    if (max_change < options.epsilon) {
      done = true;
      break;
    }
  }
  if (iterations) *iterations = iteration;
  if (converged) *converged = done;
  return scores;
}

RankedKeywords rank(const KeywordGraph& graph, const RankOptions& options) {
  RankedKeywords result;
  result.damping = options.damping;
  const auto scores = rank_scores(graph, options, &result.iterations, &result.converged);
  result.ranking.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    result.ranking.push_back({graph.nodes()[i], scores[i]});
  }
  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const ScoredToken& a, const ScoredToken& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.token < b.token;
            });
  return result;
}

std::vector<Keyword> extract_keywords(const TokenStream& tagged, const StopwordTable& stopwords,
                                      std::size_t kw, const KeywordOptions& options) {
  if (kw < 1) throw InvalidArgument("kw must be >= 1");
  const TokenStream content = remove_stopwords(tagged, stopwords);
  const KeywordGraph graph = build_graph(content, options.window);
  if (graph.empty()) return {};

  // Majority tag per node; ties resolved by the tag enum order.
  std::vector<std::array<std::size_t, 5>> tag_counts(graph.node_count());
  for (const Token& token : content.tokens) {
    if (!token.pos || !is_content_tag(*token.pos)) continue;
    if (auto node = graph.find(token.normalized)) {
      ++tag_counts[*node][static_cast<std::size_t>(*token.pos)];
    }
  }

  const RankedKeywords ranked = rank(graph, options.rank);
  std::vector<Keyword> out;
  for (const ScoredToken& scored : ranked.ranking) {
    if (out.size() == kw) break;
    const auto& counts = tag_counts[*graph.find(scored.token)];
    const auto best = std::max_element(counts.begin(), counts.end()) - counts.begin();
    out.push_back({scored.token, static_cast<PosTag>(best), scored.score});
  }
  return out;
}

std::vector<Keyword> extract_keywords(std::string_view text, Language language, std::size_t kw,
                                      const LanguageResources& resources,
                                      const KeywordOptions& options) {
  TokenStream stream = tag(tokenize(normalize(text), language), resources.lexicon(language));
  return extract_keywords(stream, resources.stopwords, kw, options);
}

}  // namespace denise
