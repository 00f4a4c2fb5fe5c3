// Independent reference implementations used only by the test suites.
// Everything here recomputes results from first principles, deliberately
// avoiding the library's code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "termnet/corpus.hpp"
#include "termnet/graph.hpp"
#include "termnet/phenotype.hpp"
#include "termnet/rng.hpp"

namespace oracles {

// ---- PMI from raw token streams --------------------------------------------

struct ProbTable {
  std::unordered_map<std::string, long long> uni;
  std::map<std::pair<std::string, std::string>, long long> bi;
  long long total = 0;
};

inline ProbTable count_raw(const std::vector<std::vector<std::string>>& docs) {
  ProbTable t;
  for (const auto& doc : docs) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      ++t.uni[doc[i]];
      ++t.total;
      if (i + 1 < doc.size()) ++t.bi[{doc[i], doc[i + 1]}];
    }
  }
  return t;
}

inline double pmi_of(const ProbTable& t, const std::string& x, const std::string& y) {
  const double n = static_cast<double>(t.total);
  const double p_xy = static_cast<double>(t.bi.at({x, y})) / n;
  const double p_x = static_cast<double>(t.uni.at(x)) / n;
  const double p_y = static_cast<double>(t.uni.at(y)) / n;
  return std::log2(p_xy / (p_x * p_y));
}

// ---- MCC --------------------------------------------------------------------

inline bool mcc_defined(long long tp, long long tn, long long fp, long long fn) {
  return (tp + fp) > 0 && (tp + fn) > 0 && (tn + fp) > 0 && (tn + fn) > 0;
}

inline double mcc_of(long long tp, long long tn, long long fp, long long fn) {
  const long double num =
      static_cast<long double>(tp) * tn - static_cast<long double>(fp) * fn;
  const long double den = sqrtl(static_cast<long double>(tp + fp) * (tp + fn) *
                                (tn + fp) * (tn + fn));
  return static_cast<double>(num / den);
}

// ---- Exact permutation null ---------------------------------------------------

// Exact probability over all index permutations of a single document that
// the permuted sequence scores PMI(bigram) >= the observed PMI. Unigram
// counts are permutation-invariant, so scores are compared via the library's
// own quantities recomputed here from scratch.
inline double exact_perm_pvalue(const std::vector<std::string>& tokens,
                                const std::pair<std::string, std::string>& bg) {
  auto joint_count = [&](const std::vector<std::string>& seq) {
    long long j = 0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
      if (seq[i] == bg.first && seq[i + 1] == bg.second) ++j;
    return j;
  };
  const ProbTable t = count_raw({tokens});
  const double n = static_cast<double>(t.total);
  const double p_x = static_cast<double>(t.uni.at(bg.first)) / n;
  const double p_y = static_cast<double>(t.uni.at(bg.second)) / n;
  auto score = [&](long long joint) {
    if (joint == 0) return -std::numeric_limits<double>::infinity();
    return std::log2((static_cast<double>(joint) / n) / (p_x * p_y));
  };
  const double observed = score(joint_count(tokens));

  std::vector<std::size_t> idx(tokens.size());
  std::iota(idx.begin(), idx.end(), 0);
  long long hits = 0, total = 0;
  std::vector<std::string> seq(tokens.size());
  do {
    for (std::size_t i = 0; i < idx.size(); ++i) seq[i] = tokens[idx[i]];
    if (score(joint_count(seq)) >= observed) ++hits;
    ++total;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

// ---- Modularity and exhaustive partition search -------------------------------

struct FlatGraph {
  std::vector<std::string> names;
  std::vector<std::tuple<int, int, double>> edges;  // i < j, clamped >= 0
  std::vector<double> degree;
  double m = 0.0;

  explicit FlatGraph(const termnet::TermGraph& g) {
    names = g.nodes();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i)
      index[names[i]] = static_cast<int>(i);
    degree.assign(names.size(), 0.0);
    for (const auto& [a, b, w] : g.edges()) {
      const double cw = std::max(w, 0.0);
      edges.emplace_back(index.at(a), index.at(b), cw);
      degree[static_cast<std::size_t>(index.at(a))] += cw;
      degree[static_cast<std::size_t>(index.at(b))] += cw;
      m += cw;
    }
  }

  double modularity(const std::vector<int>& comm) const {
    double q = 0.0;
    for (const auto& [i, j, w] : edges)
      if (comm[static_cast<std::size_t>(i)] == comm[static_cast<std::size_t>(j)])
        q += w / m;
    std::map<int, double> tot;
    for (std::size_t i = 0; i < degree.size(); ++i) tot[comm[i]] += degree[i];
    for (const auto& [_, t] : tot) {
      const double frac = t / (2.0 * m);
      q -= frac * frac;
    }
    return q;
  }
};

// Enumerates every set partition of n items as a restricted growth string.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int max_used) {
    if (i == n) {
      fn(a);
      return;
    }
    for (int c = 0; c <= max_used + 1; ++c) {
      a[static_cast<std::size_t>(i)] = c;
      rec(i + 1, std::max(max_used, c));
    }
  };
  rec(1, 0);  // a[0] = 0 fixed
}

struct BestPartition {
  double q = -std::numeric_limits<double>::infinity();
  std::vector<int> comm;
};

inline BestPartition brute_force_modularity(const termnet::TermGraph& g) {
  const FlatGraph fg(g);
  const int n = static_cast<int>(fg.names.size());
  BestPartition best;
  for_each_partition(n, [&](const std::vector<int>& comm) {
    const double q = fg.modularity(comm);
    if (q > best.q) {
      best.q = q;
      best.comm = comm;
    }
  });
  return best;
}

// ---- Dense power iteration -----------------------------------------------------

// Per connected component, dense-matrix power iteration from the uniform
// vector. Singleton components score 1.
inline std::map<std::string, double> dense_eigenvector(const termnet::TermGraph& g,
                                                       double tol, int max_iter,
                                                       bool damped) {
  const std::vector<std::string> names = g.nodes();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < names.size(); ++i)
    index[names[i]] = static_cast<int>(i);
  const std::size_t n = names.size();

  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (const auto& [a, b, w] : g.edges()) {
    const double cw = std::max(w, 0.0);
    A[static_cast<std::size_t>(index.at(a))][static_cast<std::size_t>(index.at(b))] = cw;
    A[static_cast<std::size_t>(index.at(b))][static_cast<std::size_t>(index.at(a))] = cw;
  }

  // components by DFS over nonzero structure of the *topology*
  std::vector<int> comp(n, -1);
  int nc = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = nc;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const auto& [nbr, _] : g.neighbors(names[v])) {
        const auto u = static_cast<std::size_t>(index.at(nbr));
        if (comp[u] == -1) {
          comp[u] = nc;
          stack.push_back(u);
        }
      }
    }
    ++nc;
  }

  std::map<std::string, double> out;
  for (int c = 0; c < nc; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (comp[i] == c) members.push_back(i);
    if (members.size() == 1) {
      out[names[members[0]]] = 1.0;
      continue;
    }
    const std::size_t k = members.size();
    std::vector<double> x(k, 1.0 / std::sqrt(static_cast<double>(k)));
    std::vector<double> y(k, 0.0);
    for (int it = 0; it < max_iter; ++it) {
      for (std::size_t r = 0; r < k; ++r) {
        double acc = damped ? x[r] : 0.0;
        for (std::size_t s2 = 0; s2 < k; ++s2) acc += A[members[r]][members[s2]] * x[s2];
        y[r] = acc;
      }
      double norm = 0.0;
      for (double v : y) norm += v * v;
      norm = std::sqrt(norm);
      double delta = 0.0;
      for (std::size_t r = 0; r < k; ++r) {
        y[r] /= norm;
        delta = std::max(delta, std::abs(y[r] - x[r]));
      }
      x.swap(y);
      if (delta < tol) break;
    }
    for (std::size_t r = 0; r < k; ++r) out[names[members[r]]] = x[r];
  }
  return out;
}

// ---- Triangle-counting clustering coefficient -----------------------------------

inline double triangle_clustering(const termnet::TermGraph& g, const std::string& v) {
  const std::vector<std::string> names = g.nodes();
  std::vector<std::string> nbrs;
  for (const auto& u : names)
    if (u != v && g.has_edge(u, v)) nbrs.push_back(u);
  if (nbrs.size() < 2) return 0.0;
  long long triangles = 0;
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j)
      if (g.has_edge(nbrs[i], nbrs[j])) ++triangles;
  return 2.0 * static_cast<double>(triangles) /
         (static_cast<double>(nbrs.size()) * static_cast<double>(nbrs.size() - 1));
}

// ---- Naive Ward (recompute from scratch) -----------------------------------------

// At every step, Ward distances between all cluster pairs are recomputed
// directly from the member vectors: d^2(A,B) = 2|A||B|/(|A|+|B|) * ||muA-muB||^2.
inline std::vector<termnet::Merge> naive_ward(const termnet::EmbeddingMatrix& m) {
  struct Cluster {
    int id;
    std::vector<int> members;
  };
  const int n = static_cast<int>(m.items.size());
  std::vector<Cluster> active;
  for (int i = 0; i < n; ++i) active.push_back({i, {i}});

  auto centroid = [&](const std::vector<int>& members) {
    std::vector<double> mu(m.dim, 0.0);
    for (int idx : members)
      for (std::size_t k = 0; k < m.dim; ++k)
        mu[k] += m.vectors[static_cast<std::size_t>(idx)][k];
    for (double& v : mu) v /= static_cast<double>(members.size());
    return mu;
  };
  auto ward_d2 = [&](const Cluster& a, const Cluster& b) {
    const auto mu_a = centroid(a.members);
    const auto mu_b = centroid(b.members);
    double ss = 0.0;
    for (std::size_t k = 0; k < m.dim; ++k) {
      const double d = mu_a[k] - mu_b[k];
      ss += d * d;
    }
    const double na = static_cast<double>(a.members.size());
    const double nb = static_cast<double>(b.members.size());
    return 2.0 * na * nb / (na + nb) * ss;
  };

  std::vector<termnet::Merge> merges;
  for (int step = 0; step < n - 1; ++step) {
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a)
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = ward_d2(active[a], active[b]);
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    Cluster merged;
    merged.id = n + step;
    merged.members = active[best_a].members;
    merged.members.insert(merged.members.end(), active[best_b].members.begin(),
                          active[best_b].members.end());
    merges.push_back(termnet::Merge{active[best_a].id, active[best_b].id,
                                    std::sqrt(best),
                                    static_cast<int>(merged.members.size())});
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    active.push_back(std::move(merged));
  }
  return merges;
}

// ---- Random instances -------------------------------------------------------------

inline std::string node_name(int i) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "n%02d", i);
  return buf;
}

// Random graph on [2, max_nodes] nodes with at least one edge. Weights in
// [0.5, 2.0] when weighted, else 1.
inline termnet::TermGraph random_graph(termnet::DetRng& rng, int max_nodes,
                                       bool weighted = true) {
  const int n = 2 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_nodes - 1)));
  const double p = 0.2 + 0.4 * rng.uniform01();
  termnet::TermGraph g;
  for (int i = 0; i < n; ++i) g.add_node(node_name(i));
  int edges = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) {
        g.add_edge(node_name(i), node_name(j), weighted ? 0.5 + 1.5 * rng.uniform01() : 1.0);
        ++edges;
      }
  if (edges == 0) g.add_edge(node_name(0), node_name(1), 1.0);
  return g;
}

inline termnet::EmbeddingMatrix random_embeddings(termnet::DetRng& rng, int n, int d) {
  termnet::EmbeddingMatrix m;
  m.dim = static_cast<std::size_t>(d);
  for (int i = 0; i < n; ++i) {
    m.items.push_back("item" + std::to_string(i));
    std::vector<double> v;
    for (int k = 0; k < d; ++k) v.push_back(rng.uniform01() * 10.0 - 5.0);
    m.vectors.push_back(std::move(v));
  }
  return m;
}

inline std::vector<std::vector<std::string>> random_token_docs(termnet::DetRng& rng,
                                                               int max_docs,
                                                               int vocab,
                                                               int max_len) {
  const int n_docs = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_docs)));
  std::vector<std::vector<std::string>> docs;
  for (int d = 0; d < n_docs; ++d) {
    const int len = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_len + 1)));
    std::vector<std::string> doc;
    for (int k = 0; k < len; ++k) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "t%02d",
                    static_cast<int>(rng.bounded(static_cast<std::uint64_t>(vocab))));
      doc.push_back(buf);
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace oracles
