#include "termnet/phenotype.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "termnet/io.hpp"

namespace termnet {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(std::size_t line_no, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + msg);
}

double parse_field(const std::string& field, std::size_t line_no, std::size_t col) {
  double v = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    line_error(line_no, "column " + std::to_string(col) + ": not a number");
  if (!std::isfinite(v))
    line_error(line_no, "column " + std::to_string(col) + ": not finite");
  return v;
}

bool needs_newick_quotes(const std::string& s) {
  if (s.empty()) return true;
  for (char c : s) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9') || c == '_' || c == '.' ||
                       c == '-' || c == '|' || c == '/';
    if (!plain) return true;
  }
  return false;
}

std::string newick_label(const std::string& s) {
  if (!needs_newick_quotes(s)) return s;
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += "'";
  return out;
}

}  // namespace

TreeFormat parse_tree_format(const std::string& name) {
  if (name == "newick") return TreeFormat::newick;
  if (name == "records") return TreeFormat::records;
  throw std::invalid_argument("unknown tree format '" + name + "'");
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file '" + path + "'");

  EmbeddingMatrix m;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2) line_error(line_no, "expected a label and values");

    const std::string& label = fields[0];
    if (label.empty()) line_error(line_no, "empty label");
    if (!seen.insert(label).second)
      line_error(line_no, "duplicate label '" + label + "'");

    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i)
      vec.push_back(parse_field(fields[i], line_no, i + 1));

    if (m.dim == 0) {
      m.dim = vec.size();
    } else if (vec.size() != m.dim) {
      line_error(line_no, "dimension mismatch");
    }
    m.items.push_back(label);
    m.vectors.push_back(std::move(vec));
  }
  return m;
}

Dendrogram hac_ward(const EmbeddingMatrix& m) {
  const int n = static_cast<int>(m.items.size());
  if (n < 2) throw std::invalid_argument("clustering needs at least 2 items");
  for (const auto& v : m.vectors)
    if (v.size() != m.dim)
      throw std::invalid_argument("inconsistent embedding dimensions");

  // Slot-based distance matrix of squared Ward distances. Merged clusters
  // reuse the left constituent's slot.
  const std::size_t un = static_cast<std::size_t>(n);
  std::vector<double> d2(un * un, 0.0);
  auto at = [un](std::size_t i, std::size_t j) { return i * un + j; };
  for (std::size_t i = 0; i < un; ++i) {
    for (std::size_t j = i + 1; j < un; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.dim; ++k) {
        const double d = m.vectors[i][k] - m.vectors[j][k];
        s += d * d;
      }
      d2[at(i, j)] = s;
      d2[at(j, i)] = s;
    }
  }

  struct Active {
    int id;
    std::size_t slot;
    int size;
  };
  std::vector<Active> active;
  active.reserve(un);
  for (int i = 0; i < n; ++i)
    active.push_back({i, static_cast<std::size_t>(i), 1});

  Dendrogram dg;
  dg.leaves = m.items;
  dg.merges.reserve(un - 1);

  for (int step = 0; step < n - 1; ++step) {
    // Scanning pairs in ascending (id, id) order makes the tie rule
    // "smallest (left, right) pair" fall out of the strict comparison.
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = d2[at(active[a].slot, active[b].slot)];
        if (d < best) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }

    const Active left = active[best_a];
    const Active right = active[best_b];
    const int new_id = n + step;
    const int new_size = left.size + right.size;
    dg.merges.push_back(Merge{left.id, right.id, std::sqrt(best), new_size});

    // Lance-Williams update for Ward, on squared distances.
    for (const auto& other : active) {
      if (other.id == left.id || other.id == right.id) continue;
      const double dl = d2[at(other.slot, left.slot)];
      const double dr = d2[at(other.slot, right.slot)];
      const double nd =
          ((static_cast<double>(left.size + other.size)) * dl +
           (static_cast<double>(right.size + other.size)) * dr -
           static_cast<double>(other.size) * best) /
          static_cast<double>(new_size + other.size);
      d2[at(other.slot, left.slot)] = nd;
      d2[at(left.slot, other.slot)] = nd;
    }

    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_a));
    active.push_back({new_id, left.slot, new_size});
  }
  return dg;
}

std::vector<int> cut_dendrogram(const Dendrogram& dg, int k) {
  const int n = dg.num_leaves();
  if (k < 1 || k > n) throw std::invalid_argument("k must be in [1, n]");

  // Union-find over leaves; rep[c] maps every cluster id to a leaf root.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<int> rep(static_cast<std::size_t>(n) + dg.merges.size(), -1);
  std::iota(rep.begin(), rep.begin() + n, 0);

  std::function<int(int)> find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };

  const int applied = n - k;  // merges kept after dropping the k-1 highest
  for (int t = 0; t < applied; ++t) {
    const Merge& mg = dg.merges[static_cast<std::size_t>(t)];
    const int ra = find(rep[static_cast<std::size_t>(mg.left)]);
    const int rb = find(rep[static_cast<std::size_t>(mg.right)]);
    parent[static_cast<std::size_t>(rb)] = ra;
    rep[static_cast<std::size_t>(n + t)] = ra;
  }

  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::map<int, int> cluster_ids;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    auto [it, _] = cluster_ids.emplace(root, static_cast<int>(cluster_ids.size()));
    assignment[static_cast<std::size_t>(i)] = it->second;
  }
  return assignment;
}

std::string export_dendrogram(const Dendrogram& dg, TreeFormat format) {
  const int n = dg.num_leaves();
  if (format == TreeFormat::records) {
    std::ostringstream out;
    out << json{{"type", "leaves"}, {"items", dg.leaves}}.dump() << "\n";
    for (const auto& mg : dg.merges)
      out << json{{"type", "merge"},
                  {"left", mg.left},
                  {"right", mg.right},
                  {"height", mg.height},
                  {"size", mg.size}}
                 .dump()
          << "\n";
    return out.str();
  }

  // Newick. Branch length = parent height - child height (leaves at 0).
  auto height_of = [&](int id) {
    return id < n ? 0.0 : dg.merges[static_cast<std::size_t>(id - n)].height;
  };
  std::function<std::string(int)> render = [&](int id) -> std::string {
    if (id < n) return newick_label(dg.leaves[static_cast<std::size_t>(id)]);
    const Merge& mg = dg.merges[static_cast<std::size_t>(id - n)];
    const double h = mg.height;
    return "(" + render(mg.left) + ":" + fmt_double(h - height_of(mg.left)) +
           "," + render(mg.right) + ":" + fmt_double(h - height_of(mg.right)) +
           ")";
  };
  if (dg.merges.empty()) {
    // single leaf
    return newick_label(dg.leaves.at(0)) + ";\n";
  }
  return render(n + static_cast<int>(dg.merges.size()) - 1) + ";\n";
}

Dendrogram import_dendrogram_records(std::istream& in) {
  Dendrogram dg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      line_error(line_no, "malformed record");
    const std::string type = rec.value("type", "");
    if (type == "leaves") {
      dg.leaves = rec.at("items").get<std::vector<std::string>>();
    } else if (type == "merge") {
      dg.merges.push_back(Merge{rec.at("left").get<int>(),
                                rec.at("right").get<int>(),
                                rec.at("height").get<double>(),
                                rec.at("size").get<int>()});
    } else {
      line_error(line_no, "record type must be 'leaves' or 'merge'");
    }
  }
  return dg;
}

}  // namespace termnet
