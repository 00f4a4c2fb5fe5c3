#include "termnet/graph.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "termnet/io.hpp"

namespace termnet {

namespace {

using nlohmann::json;

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string to_dot(const TermGraph& g) {
  std::ostringstream out;
  out << "graph termnet {\n";
  for (const auto& n : g.nodes()) {
    out << "  \"" << dot_escape(n) << "\"";
    if (const std::string* cat = g.category(n))
      out << " [category=\"" << dot_escape(*cat) << "\"]";
    out << ";\n";
  }
  for (const auto& [a, b, w] : g.edges()) {
    out << "  \"" << dot_escape(a) << "\" -- \"" << dot_escape(b)
        << "\" [weight=" << fmt_double(w) << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_graphml(const TermGraph& g) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n"
      << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <graph id=\"termnet\" edgedefault=\"undirected\">\n";
  for (const auto& n : g.nodes()) {
    out << "    <node id=\"" << xml_escape(n) << "\"";
    if (const std::string* cat = g.category(n)) {
      out << ">\n      <data key=\"category\">" << xml_escape(*cat)
          << "</data>\n    </node>\n";
    } else {
      out << "/>\n";
    }
  }
  for (const auto& [a, b, w] : g.edges()) {
    out << "    <edge source=\"" << xml_escape(a) << "\" target=\""
        << xml_escape(b) << "\">\n      <data key=\"weight\">" << fmt_double(w)
        << "</data>\n    </edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_records(const TermGraph& g) {
  std::ostringstream out;
  for (const auto& n : g.nodes()) {
    json rec{{"type", "node"}, {"term", n}};
    if (const std::string* cat = g.category(n)) rec["category"] = *cat;
    out << rec.dump() << "\n";
  }
  for (const auto& [a, b, w] : g.edges()) {
    json rec{{"type", "edge"}, {"source", a}, {"target", b}, {"weight", w}};
    out << rec.dump() << "\n";
  }
  return out.str();
}

}  // namespace

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "dot") return GraphFormat::dot;
  if (name == "graphml") return GraphFormat::graphml;
  if (name == "records") return GraphFormat::records;
  throw std::invalid_argument("unknown graph format '" + name + "'");
}

void TermGraph::add_node(const std::string& term) { adj_[term]; }

void TermGraph::add_edge(const std::string& a, const std::string& b, double weight) {
  if (a == b) throw std::invalid_argument("self-loop on term '" + a + "'");
  if (has_edge(a, b)) throw std::invalid_argument("duplicate edge '" + a + "' -- '" + b + "'");
  adj_[a][b] = weight;
  adj_[b][a] = weight;
  ++edge_count_;
}

void TermGraph::set_category(const std::string& term, const std::string& category) {
  if (!has_node(term)) throw std::runtime_error("unknown term '" + term + "'");
  categories_[term] = category;
}

bool TermGraph::has_edge(const std::string& a, const std::string& b) const {
  auto it = adj_.find(a);
  return it != adj_.end() && it->second.count(b) > 0;
}

double TermGraph::weight(const std::string& a, const std::string& b) const {
  auto it = adj_.find(a);
  if (it != adj_.end()) {
    auto jt = it->second.find(b);
    if (jt != it->second.end()) return jt->second;
  }
  throw std::runtime_error("no edge '" + a + "' -- '" + b + "'");
}

const std::string* TermGraph::category(const std::string& term) const {
  auto it = categories_.find(term);
  return it == categories_.end() ? nullptr : &it->second;
}

std::vector<std::string> TermGraph::nodes() const {
  std::vector<std::string> out;
  out.reserve(adj_.size());
  for (const auto& [term, _] : adj_) out.push_back(term);
  return out;
}

const std::map<std::string, double>& TermGraph::neighbors(const std::string& term) const {
  auto it = adj_.find(term);
  if (it == adj_.end()) throw std::runtime_error("unknown term '" + term + "'");
  return it->second;
}

std::vector<std::tuple<std::string, std::string, double>> TermGraph::edges() const {
  std::vector<std::tuple<std::string, std::string, double>> out;
  out.reserve(edge_count_);
  for (const auto& [a, nbrs] : adj_)
    for (const auto& [b, w] : nbrs)
      if (a < b) out.emplace_back(a, b, w);
  return out;
}

TermGraph build_graph(const NgramTable& table, double min_pmi,
                      std::int64_t min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");

  TermGraph g;
  const double n = static_cast<double>(table.total_unigrams);
  for (const auto& [bigram, count] : table.bigram_counts) {
    const auto& [x, y] = bigram;
    if (x == y) continue;          // no self-loops
    if (x > y) continue;           // handled via the (min,max) orientation
    std::int64_t combined = count;
    auto rev = table.bigram_counts.find(Bigram{y, x});
    if (rev != table.bigram_counts.end()) combined += rev->second;
    if (combined < min_count) continue;
    const double p_xy = static_cast<double>(combined) / n;
    const double p_x = static_cast<double>(table.unigram_counts.at(x)) / n;
    const double p_y = static_cast<double>(table.unigram_counts.at(y)) / n;
    const double w = std::log2(p_xy / (p_x * p_y));
    if (w >= min_pmi) g.add_edge(x, y, w);
  }
  // Pairs seen only in (y,x) order with y > x:
  for (const auto& [bigram, count] : table.bigram_counts) {
    const auto& [y, x] = bigram;
    if (y <= x) continue;
    if (table.bigram_counts.count(Bigram{x, y})) continue;  // already handled
    if (count < min_count) continue;
    const double p_xy = static_cast<double>(count) / n;
    const double p_x = static_cast<double>(table.unigram_counts.at(x)) / n;
    const double p_y = static_cast<double>(table.unigram_counts.at(y)) / n;
    const double w = std::log2(p_xy / (p_x * p_y));
    if (w >= min_pmi) g.add_edge(x, y, w);
  }
  return g;
}

TermGraph subgraph(const TermGraph& g, const std::string& term, int radius) {
  if (!g.has_node(term)) throw std::runtime_error("unknown term '" + term + "'");
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");

  std::map<std::string, int> dist;
  dist[term] = 0;
  std::deque<std::string> frontier{term};
  while (!frontier.empty()) {
    std::string cur = std::move(frontier.front());
    frontier.pop_front();
    const int d = dist[cur];
    if (d == radius) continue;
    for (const auto& [nbr, _] : g.neighbors(cur)) {
      if (!dist.count(nbr)) {
        dist[nbr] = d + 1;
        frontier.push_back(nbr);
      }
    }
  }

  TermGraph sub;
  for (const auto& [node, _] : dist) {
    sub.add_node(node);
    if (const std::string* cat = g.category(node)) sub.set_category(node, *cat);
  }
  for (const auto& [node, _] : dist)
    for (const auto& [nbr, w] : g.neighbors(node))
      if (node < nbr && dist.count(nbr)) sub.add_edge(node, nbr, w);
  return sub;
}

std::string export_graph(const TermGraph& g, GraphFormat format) {
  switch (format) {
    case GraphFormat::dot: return to_dot(g);
    case GraphFormat::graphml: return to_graphml(g);
    case GraphFormat::records: return to_records(g);
  }
  throw std::invalid_argument("unknown graph format");
}

TermGraph import_records(std::istream& in) {
  TermGraph g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line, nullptr, false);
    auto fail = [&](const std::string& msg) -> void {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + msg);
    };
    if (rec.is_discarded() || !rec.is_object()) fail("malformed record");
    const std::string type = rec.value("type", "");
    if (type == "node") {
      if (!rec.contains("term") || !rec.at("term").is_string())
        fail("node record missing 'term'");
      g.add_node(rec.at("term").get<std::string>());
      if (rec.contains("category")) {
        if (!rec.at("category").is_string()) fail("'category' must be a string");
        g.set_category(rec.at("term").get<std::string>(),
                       rec.at("category").get<std::string>());
      }
    } else if (type == "edge") {
      if (!rec.contains("source") || !rec.contains("target") ||
          !rec.contains("weight") || !rec.at("weight").is_number())
        fail("edge record missing source/target/weight");
      g.add_edge(rec.at("source").get<std::string>(),
                 rec.at("target").get<std::string>(),
                 rec.at("weight").get<double>());
    } else {
      fail("record type must be 'node' or 'edge'");
    }
  }
  return g;
}

TermGraph load_graph_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return import_records(in);
}

std::map<std::string, std::string> load_categories(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open category file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected 'term<TAB>category'");
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

}  // namespace termnet
