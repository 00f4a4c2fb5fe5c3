#include "termnet/community.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "termnet/rng.hpp"

namespace termnet {

namespace {

using nlohmann::json;

// Indexed working graph for Louvain. Aggregated levels carry self-loops;
// a self-loop of weight w contributes 2w to its node's degree.
struct WorkGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_loop;
  std::vector<double> degree;
  double total_weight = 0.0;  // edges counted once, plus self-loops

  void finalize() {
    degree.assign(static_cast<std::size_t>(n), 0.0);
    total_weight = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = 2.0 * self_loop[static_cast<std::size_t>(i)];
      for (const auto& [j, w] : adj[static_cast<std::size_t>(i)]) {
        d += w;
        if (j > i) total_weight += w;
      }
      degree[static_cast<std::size_t>(i)] = d;
      total_weight += self_loop[static_cast<std::size_t>(i)];
    }
  }
};

WorkGraph index_graph(const TermGraph& g, const std::vector<std::string>& order) {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < order.size(); ++i)
    index[order[i]] = static_cast<int>(i);

  WorkGraph wg;
  wg.n = static_cast<int>(order.size());
  wg.adj.resize(order.size());
  wg.self_loop.assign(order.size(), 0.0);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& [nbr, w] : g.neighbors(order[i]))
      wg.adj[i].emplace_back(index.at(nbr), std::max(w, 0.0));
  wg.finalize();
  return wg;
}

double work_modularity(const WorkGraph& wg, const std::vector<int>& comm,
                       int n_comm) {
  const double m = wg.total_weight;
  std::vector<double> tot(static_cast<std::size_t>(n_comm), 0.0);
  std::vector<double> in(static_cast<std::size_t>(n_comm), 0.0);
  for (int i = 0; i < wg.n; ++i) {
    const auto c = static_cast<std::size_t>(comm[static_cast<std::size_t>(i)]);
    tot[c] += wg.degree[static_cast<std::size_t>(i)];
    in[c] += wg.self_loop[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : wg.adj[static_cast<std::size_t>(i)])
      if (j > i && comm[static_cast<std::size_t>(j)] == comm[static_cast<std::size_t>(i)])
        in[c] += w;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < tot.size(); ++c) {
    const double frac = tot[c] / (2.0 * m);
    q += in[c] / m - frac * frac;
  }
  return q;
}

// Renumbers communities to contiguous ids by first appearance in node order.
int renumber(std::vector<int>& comm) {
  std::map<int, int> remap;
  for (int& c : comm) {
    auto [it, inserted] = remap.emplace(c, static_cast<int>(remap.size()));
    c = it->second;
  }
  return static_cast<int>(remap.size());
}

// One local-move phase; returns true if any node changed community.
bool local_move_phase(const WorkGraph& wg, std::vector<int>& comm, DetRng& rng) {
  constexpr double kGainEps = 1e-12;
  const double inv_2m = 1.0 / (2.0 * wg.total_weight);

  std::vector<double> tot(static_cast<std::size_t>(wg.n), 0.0);
  for (int i = 0; i < wg.n; ++i)
    tot[static_cast<std::size_t>(comm[static_cast<std::size_t>(i)])] +=
        wg.degree[static_cast<std::size_t>(i)];

  std::vector<int> visit(static_cast<std::size_t>(wg.n));
  std::iota(visit.begin(), visit.end(), 0);

  bool any_move = false;
  bool moved = true;
  int sweeps = 0;
  while (moved && sweeps < 1000) {
    moved = false;
    ++sweeps;
    rng.shuffle(visit);
    for (int i : visit) {
      const auto iu = static_cast<std::size_t>(i);
      const int old_c = comm[iu];
      const double k_i = wg.degree[iu];
      tot[static_cast<std::size_t>(old_c)] -= k_i;

      std::map<int, double> w_to;
      w_to[old_c] += 0.0;
      for (const auto& [j, w] : wg.adj[iu])
        w_to[comm[static_cast<std::size_t>(j)]] += w;

      int best_c = old_c;
      double best_gain = w_to[old_c] - tot[static_cast<std::size_t>(old_c)] * k_i * inv_2m;
      for (const auto& [c, w] : w_to) {
        const double gain = w - tot[static_cast<std::size_t>(c)] * k_i * inv_2m;
        if (gain > best_gain + kGainEps) {
          best_gain = gain;
          best_c = c;
        }
      }

      comm[iu] = best_c;
      tot[static_cast<std::size_t>(best_c)] += k_i;
      if (best_c != old_c) {
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

WorkGraph aggregate(const WorkGraph& wg, const std::vector<int>& comm, int n_comm) {
  WorkGraph out;
  out.n = n_comm;
  out.adj.resize(static_cast<std::size_t>(n_comm));
  out.self_loop.assign(static_cast<std::size_t>(n_comm), 0.0);

  std::map<std::pair<int, int>, double> cross;
  for (int i = 0; i < wg.n; ++i) {
    const int ci = comm[static_cast<std::size_t>(i)];
    out.self_loop[static_cast<std::size_t>(ci)] += wg.self_loop[static_cast<std::size_t>(i)];
    for (const auto& [j, w] : wg.adj[static_cast<std::size_t>(i)]) {
      if (j <= i) continue;
      const int cj = comm[static_cast<std::size_t>(j)];
      if (ci == cj) {
        out.self_loop[static_cast<std::size_t>(ci)] += w;
      } else {
        cross[{std::min(ci, cj), std::max(ci, cj)}] += w;
      }
    }
  }
  for (const auto& [key, w] : cross) {
    out.adj[static_cast<std::size_t>(key.first)].emplace_back(key.second, w);
    out.adj[static_cast<std::size_t>(key.second)].emplace_back(key.first, w);
  }
  out.finalize();
  return out;
}

}  // namespace

int Partition::community_count() const {
  int max_id = -1;
  for (const auto& [_, c] : assignment) max_id = std::max(max_id, c);
  return max_id + 1;
}

std::vector<int> CommunityAssignment::member_of(const std::string& node) const {
  std::vector<int> out;
  auto it = memberships.find(node);
  if (it == memberships.end()) return out;
  for (const auto& [c, p] : it->second)
    if (p >= tau) out.push_back(c);
  return out;
}

double modularity(const TermGraph& g, const std::map<std::string, int>& assignment) {
  const std::vector<std::string> order = g.nodes();
  WorkGraph wg = index_graph(g, order);
  std::vector<int> comm;
  comm.reserve(order.size());
  int n_comm = 0;
  for (const auto& node : order) {
    const int c = assignment.at(node);
    comm.push_back(c);
    n_comm = std::max(n_comm, c + 1);
  }
  if (wg.total_weight <= 0.0) throw std::runtime_error("degenerate graph");
  return work_modularity(wg, comm, n_comm);
}

Partition louvain(const TermGraph& g, std::uint64_t seed, LouvainTrace* trace) {
  const std::vector<std::string> order = g.nodes();
  if (order.empty()) throw std::runtime_error("degenerate graph");

  Partition p;
  if (order.size() == 1) {
    p.assignment[order[0]] = 0;
    p.modularity = 0.0;
    if (trace) trace->pass_modularity.push_back(0.0);
    return p;
  }

  WorkGraph wg = index_graph(g, order);
  if (wg.total_weight <= 0.0) throw std::runtime_error("degenerate graph");

  // node_to_comm tracks the assignment of the original nodes across levels.
  std::vector<int> node_to_comm(order.size());
  std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

  std::vector<int> comm(order.size());
  std::iota(comm.begin(), comm.end(), 0);
  double q_prev = work_modularity(wg, comm, wg.n);
  if (trace) trace->pass_modularity.push_back(q_prev);

  constexpr double kMinImprovement = 1e-12;
  for (std::uint64_t level = 0;; ++level) {
    DetRng rng(DetRng::stream_seed(seed, level));
    comm.assign(static_cast<std::size_t>(wg.n), 0);
    std::iota(comm.begin(), comm.end(), 0);

    const bool improved = local_move_phase(wg, comm, rng);
    const int n_comm = renumber(comm);
    for (int& c : node_to_comm) c = comm[static_cast<std::size_t>(c)];

    const double q = work_modularity(wg, comm, n_comm);
    if (trace) trace->pass_modularity.push_back(q);

    if (!improved || q <= q_prev + kMinImprovement || n_comm == wg.n) break;
    q_prev = q;
    wg = aggregate(wg, comm, n_comm);
  }

  renumber(node_to_comm);
  for (std::size_t i = 0; i < order.size(); ++i)
    p.assignment[order[i]] = node_to_comm[i];

  WorkGraph base = index_graph(g, order);
  p.modularity = work_modularity(base, node_to_comm,
                                 1 + *std::max_element(node_to_comm.begin(),
                                                       node_to_comm.end()));
  return p;
}

CommunityAssignment soft_memberships(const TermGraph& g, const Partition& p,
                                     double tau) {
  if (!(tau > 0.0) || tau > 1.0)
    throw std::invalid_argument("tau must be in (0, 1]");

  CommunityAssignment ca;
  ca.tau = tau;
  for (const auto& node : g.nodes()) {
    auto it = p.assignment.find(node);
    if (it == p.assignment.end())
      throw std::invalid_argument("partition does not cover node '" + node + "'");

    std::map<int, double> weight_to;
    double total = 0.0;
    for (const auto& [nbr, w] : g.neighbors(node)) {
      const double wp = std::max(w, 0.0);
      weight_to[p.assignment.at(nbr)] += wp;
      total += wp;
    }
    std::map<int, double> probs;
    if (total <= 0.0) {
      probs[it->second] = 1.0;
    } else {
      for (const auto& [c, w] : weight_to)
        if (w > 0.0) probs[c] = w / total;
    }
    ca.memberships[node] = std::move(probs);
  }
  return ca;
}

CentralityMap eigenvector_centrality(const TermGraph& g, double tol,
                                     int max_iter, bool self_loop_damping) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  const std::vector<std::string> order = g.nodes();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < order.size(); ++i)
    index[order[i]] = static_cast<int>(i);

  // Connected components over the graph topology.
  std::vector<int> comp(order.size(), -1);
  int n_comp = 0;
  for (std::size_t s = 0; s < order.size(); ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [nbr, _] : g.neighbors(order[v])) {
        const auto u = static_cast<std::size_t>(index.at(nbr));
        if (comp[u] == -1) {
          comp[u] = n_comp;
          stack.push_back(u);
        }
      }
    }
    ++n_comp;
  }

  CentralityMap cm;
  for (int c = 0; c < n_comp; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < order.size(); ++i)
      if (comp[i] == c) members.push_back(i);

    if (members.size() == 1) {
      cm.scores[order[members[0]]] = 1.0;
      continue;
    }

    std::map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < members.size(); ++k) local[members[k]] = k;

    const std::size_t nc = members.size();
    std::vector<std::vector<std::pair<std::size_t, double>>> nbrs(nc);
    for (std::size_t k = 0; k < nc; ++k)
      for (const auto& [nbr, w] : g.neighbors(order[members[k]]))
        nbrs[k].emplace_back(local.at(static_cast<std::size_t>(index.at(nbr))),
                             std::max(w, 0.0));

    std::vector<double> x(nc, 1.0 / std::sqrt(static_cast<double>(nc)));
    std::vector<double> y(nc, 0.0);

    int iter = 0;
    for (; iter < max_iter; ++iter) {
      for (std::size_t k = 0; k < nc; ++k) {
        double acc = self_loop_damping ? x[k] : 0.0;
        for (const auto& [j, w] : nbrs[k]) acc += w * x[j];
        y[k] = acc;
      }
      double norm = 0.0;
      for (double v : y) norm += v * v;
      norm = std::sqrt(norm);
      if (norm == 0.0)
        throw std::runtime_error("power iteration collapsed to the zero vector");
      double delta = 0.0;
      for (std::size_t k = 0; k < nc; ++k) {
        y[k] /= norm;
        delta = std::max(delta, std::abs(y[k] - x[k]));
      }
      x.swap(y);
      if (delta < tol) break;
    }
    if (iter >= max_iter)
      throw ConvergenceError(
          "eigenvector centrality did not converge after " +
              std::to_string(max_iter) +
              " iterations (bipartite-like oscillation; retry with self-loop damping)",
          max_iter);

    for (std::size_t k = 0; k < nc; ++k) cm.scores[order[members[k]]] = x[k];
  }
  return cm;
}

double clustering_coefficient(const TermGraph& g, const std::string& node) {
  const auto& nbrs = g.neighbors(node);  // throws on unknown node
  const std::size_t deg = nbrs.size();
  if (deg < 2) return 0.0;

  std::int64_t links = 0;
  for (auto it = nbrs.begin(); it != nbrs.end(); ++it) {
    auto jt = it;
    for (++jt; jt != nbrs.end(); ++jt)
      if (g.has_edge(it->first, jt->first)) ++links;
  }
  return 2.0 * static_cast<double>(links) /
         (static_cast<double>(deg) * static_cast<double>(deg - 1));
}

Ontology extract_ontology(const TermGraph& g, const CommunityAssignment& ca,
                          const CentralityMap& cm) {
  std::map<int, std::vector<std::string>> groups;
  for (const auto& node : g.nodes()) {
    auto mit = ca.memberships.find(node);
    if (mit == ca.memberships.end())
      throw std::invalid_argument("memberships do not cover node '" + node + "'");
    if (!cm.scores.count(node))
      throw std::invalid_argument("centrality does not cover node '" + node + "'");

    // argmax membership probability, ties to the lower community id
    int best_c = -1;
    double best_p = -1.0;
    for (const auto& [c, p] : mit->second) {
      if (p > best_p) {
        best_p = p;
        best_c = c;
      }
    }
    if (best_c < 0)
      throw std::invalid_argument("node '" + node + "' has no memberships");
    groups[best_c].push_back(node);
  }

  Ontology onto;
  for (auto& [c, members] : groups) {
    std::sort(members.begin(), members.end(),
              [&](const std::string& a, const std::string& b) {
                const double sa = cm.scores.at(a);
                const double sb = cm.scores.at(b);
                if (sa != sb) return sa > sb;
                return a < b;
              });
    onto.entries.push_back(OntologyEntry{members.front(), members});
  }
  return onto;
}

std::string communities_to_records(const Partition& p,
                                   const CommunityAssignment& ca) {
  std::ostringstream out;
  out << json{{"type", "meta"},
              {"modularity", p.modularity},
              {"tau", ca.tau},
              {"communities", p.community_count()}}
             .dump()
      << "\n";
  for (const auto& [node, c] : p.assignment) {
    json probs = json::array();
    auto mit = ca.memberships.find(node);
    if (mit != ca.memberships.end())
      for (const auto& [cid, prob] : mit->second)
        probs.push_back(json{{"community", cid}, {"p", prob}});
    json members = ca.member_of(node);
    out << json{{"type", "node"},
                {"term", node},
                {"community", c},
                {"memberships", probs},
                {"member_of", members}}
               .dump()
        << "\n";
  }
  return out.str();
}

std::pair<Partition, CommunityAssignment> communities_from_records(std::istream& in) {
  Partition p;
  CommunityAssignment ca;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": malformed record");
    const std::string type = rec.value("type", "");
    if (type == "meta") {
      p.modularity = rec.value("modularity", 0.0);
      ca.tau = rec.value("tau", 1.0);
    } else if (type == "node") {
      const std::string term = rec.at("term").get<std::string>();
      p.assignment[term] = rec.at("community").get<int>();
      std::map<int, double> probs;
      for (const auto& entry : rec.at("memberships"))
        probs[entry.at("community").get<int>()] = entry.at("p").get<double>();
      ca.memberships[term] = std::move(probs);
    } else {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": record type must be 'meta' or 'node'");
    }
  }
  return {std::move(p), std::move(ca)};
}

std::string centrality_to_records(const CentralityMap& cm) {
  std::ostringstream out;
  for (const auto& [node, score] : cm.scores)
    out << json{{"type", "node"}, {"term", node}, {"score", score}}.dump() << "\n";
  return out.str();
}

CentralityMap centrality_from_records(std::istream& in) {
  CentralityMap cm;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("term") ||
        !rec.contains("score"))
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": malformed record");
    cm.scores[rec.at("term").get<std::string>()] = rec.at("score").get<double>();
  }
  return cm;
}

std::string ontology_to_records(const Ontology& o) {
  std::ostringstream out;
  for (const auto& entry : o.entries)
    out << json{{"head", entry.head}, {"members", entry.members}}.dump() << "\n";
  return out.str();
}

}  // namespace termnet
