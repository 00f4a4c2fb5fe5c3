#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "termnet/corpus.hpp"

namespace termnet {

enum class GraphFormat { dot, graphml, records };

/// Accepts "dot", "graphml" or "records"; throws on anything else.
GraphFormat parse_graph_format(const std::string& name);

/// Weighted undirected term co-occurrence graph. No self-loops, at most one
/// edge per unordered pair. Nodes may carry a free-form category tag.
/// Node and neighbor iteration is lexicographic, so every traversal and
/// export is deterministic.
class TermGraph {
 public:
  void add_node(const std::string& term);
  void add_edge(const std::string& a, const std::string& b, double weight);
  void set_category(const std::string& term, const std::string& category);

  bool has_node(const std::string& term) const { return adj_.count(term) > 0; }
  bool has_edge(const std::string& a, const std::string& b) const;
  double weight(const std::string& a, const std::string& b) const;
  const std::string* category(const std::string& term) const;

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::vector<std::string> nodes() const;

  /// Neighbor -> weight map for a node; throws on an unknown term.
  const std::map<std::string, double>& neighbors(const std::string& term) const;

  /// Edges as (a, b, weight) with a < b, lexicographically ordered.
  std::vector<std::tuple<std::string, std::string, double>> edges() const;

 private:
  std::map<std::string, std::map<std::string, double>> adj_;
  std::map<std::string, std::string> categories_;
  std::size_t edge_count_ = 0;
};

/// Builds the co-occurrence graph from a count table: the two directed
/// bigram counts of each unordered pair are summed, pairs below min_count
/// are dropped, PMI is computed on the combined count and edges below
/// min_pmi are dropped. Nodes are exactly the surviving endpoints.
TermGraph build_graph(const NgramTable& table, double min_pmi,
                      std::int64_t min_count);

/// Induced sub-graph on every node within `radius` hops of `term`.
TermGraph subgraph(const TermGraph& g, const std::string& term, int radius);

std::string export_graph(const TermGraph& g, GraphFormat format);

/// Parses the records format (one JSON object per line, nodes then edges).
TermGraph import_records(std::istream& in);
TermGraph load_graph_records(const std::string& path);

/// Term -> category annotations, tab-separated, one pair per line.
std::map<std::string, std::string> load_categories(const std::string& path);

}  // namespace termnet
