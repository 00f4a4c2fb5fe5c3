#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "termnet/graph.hpp"

namespace termnet {

/// Hard community assignment. Ids are contiguous integers from 0, numbered
/// by first appearance over the lexicographic node order.
struct Partition {
  std::map<std::string, int> assignment;
  double modularity = 0.0;
  int community_count() const;
};

/// Modularity trace across local-move/aggregation passes, for diagnostics.
struct LouvainTrace {
  std::vector<double> pass_modularity;
};

/// Per-node community membership probabilities (each node's distribution
/// sums to 1). A node is reported as a member of every community whose
/// probability reaches tau.
struct CommunityAssignment {
  std::map<std::string, std::map<int, double>> memberships;
  double tau = 1.0;
  std::vector<int> member_of(const std::string& node) const;
};

/// Eigenvector centrality scores, L2-normalized per connected component.
struct CentralityMap {
  std::map<std::string, double> scores;
};

struct OntologyEntry {
  std::string head;                  // max-centrality member
  std::vector<std::string> members;  // descending centrality
};

struct Ontology {
  std::vector<OntologyEntry> entries;  // one per community, by community id
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& msg, int iters)
      : std::runtime_error(msg), iterations(iters) {}
  int iterations;
};

/// Modularity Q of an assignment over g (negative weights clamped to 0).
double modularity(const TermGraph& g, const std::map<std::string, int>& assignment);

/// Two-phase Louvain: seeded local moves until no gain, then community
/// aggregation, repeated until modularity stops improving. Deterministic for
/// a fixed seed. Throws "degenerate graph" on an empty graph or on a
/// multi-node graph whose clamped weights sum to zero.
Partition louvain(const TermGraph& g, std::uint64_t seed,
                  LouvainTrace* trace = nullptr);

/// Membership probability of node v in community c = fraction of v's
/// positive edge weight that goes to nodes assigned to c. Isolated nodes get
/// probability 1 in their own community.
CommunityAssignment soft_memberships(const TermGraph& g, const Partition& p,
                                     double tau);

/// Power iteration per connected component from the uniform positive vector,
/// L2-normalized, until the successive-iterate infinity-norm difference
/// drops below tol. Weights are clamped to >= 0. With self_loop_damping a
/// unit self-loop is added to every node (same eigenvector, breaks the
/// period-2 oscillation of bipartite components). Non-convergence raises
/// ConvergenceError carrying the iteration count.
CentralityMap eigenvector_centrality(const TermGraph& g, double tol,
                                     int max_iter,
                                     bool self_loop_damping = false);

/// (2 * edges among neighbors) / (deg * (deg - 1)); 0 when deg < 2.
/// Topology only, weights ignored.
double clustering_coefficient(const TermGraph& g, const std::string& node);

/// Groups nodes by their argmax membership community; each group is sorted
/// by descending centrality (ties lexicographic) and headed by its
/// max-centrality term.
Ontology extract_ontology(const TermGraph& g, const CommunityAssignment& ca,
                          const CentralityMap& cm);

// Line-delimited artifact formats used by the CLI.
std::string communities_to_records(const Partition& p,
                                   const CommunityAssignment& ca);
std::pair<Partition, CommunityAssignment> communities_from_records(std::istream& in);
std::string centrality_to_records(const CentralityMap& cm);
CentralityMap centrality_from_records(std::istream& in);
std::string ontology_to_records(const Ontology& o);

}  // namespace termnet
