#include "termnet/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "termnet/community.hpp"
#include "termnet/graph.hpp"
#include "termnet/io.hpp"

namespace termnet {

namespace {

template <class Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(name + ": " + e.what());
  }
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

std::string ranking_to_tsv(const MweRanking& ranking) {
  std::ostringstream out;
  out << "bigram\tpmi\tppmi\tcount\tdocfreq\n";
  for (const auto& e : ranking.entries) {
    out << e.bigram.first << ' ' << e.bigram.second << '\t' << fmt_double(e.pmi)
        << '\t' << fmt_double(e.ppmi) << '\t' << e.count << '\t' << e.docfreq
        << '\n';
  }
  return out.str();
}

std::string association_to_tsv(const AssociationMatrix& m) {
  std::ostringstream out;
  out << "expression\tlabel\tmcc\n";
  for (std::size_t c = 0; c < m.labels.size(); ++c) {
    // Per label, descending MCC; undefined cells sort (and print) as 0.
    std::vector<std::size_t> rows(m.expressions.size());
    for (std::size_t e = 0; e < rows.size(); ++e) rows[e] = e;
    auto value = [&](std::size_t e) { return m.cells[e][c].value_or(0.0); };
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      if (value(a) != value(b)) return value(a) > value(b);
      return m.expressions[a] < m.expressions[b];
    });
    for (std::size_t e : rows) {
      out << m.expressions[e].first << ' ' << m.expressions[e].second << '\t'
          << m.labels[c] << '\t' << fmt_double(value(e)) << '\n';
    }
  }
  return out.str();
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  auto emit = [&](const std::string& name, const std::string& content) {
    const std::string path = join_path(cfg.out_dir, name);
    write_file_atomic(path, content);
    result.artifacts.push_back(path);
  };

  const std::set<std::string> stopwords =
      cfg.stopwords_path.empty()
          ? default_stopwords()
          : stage("corpus", [&] { return load_stopwords(cfg.stopwords_path); });

  const Corpus corpus = stage("corpus", [&] {
    return load_corpus(cfg.corpus_path, cfg.text_field, cfg.label_field);
  });
  const std::vector<TokenizedDoc> docs = tokenize_corpus(corpus, stopwords);
  const NgramTable table = count_ngrams(docs);

  const MweRanking ranking = stage("extract", [&] {
    return rank_mwes(table, cfg.min_df, cfg.max_df, cfg.top_n);
  });
  emit("mwes.tsv", ranking_to_tsv(ranking));

  if (!cfg.label_field.empty()) {
    stage("assoc", [&] {
      std::set<std::string> labels;
      std::vector<std::set<std::string>> doc_labels;
      doc_labels.reserve(corpus.size());
      for (const auto& doc : corpus) {
        doc_labels.push_back(doc.labels);
        labels.insert(doc.labels.begin(), doc.labels.end());
      }
      std::vector<Bigram> expressions;
      for (const auto& e : ranking.entries) expressions.push_back(e.bigram);
      // No candidate expressions or no labels: an empty table, not an error.
      if (expressions.empty() || labels.empty()) {
        emit("assoc.tsv", "expression\tlabel\tmcc\n");
      } else {
        emit("assoc.tsv", association_to_tsv(
                              associate(docs, doc_labels, expressions, labels)));
      }
      return 0;
    });
  }

  TermGraph graph = stage("graph", [&] {
    TermGraph g = build_graph(table, cfg.min_pmi, cfg.min_count);
    if (!cfg.categories_path.empty())
      for (const auto& [term, cat] : load_categories(cfg.categories_path))
        if (g.has_node(term)) g.set_category(term, cat);
    return g;
  });
  emit("graph.json", export_graph(graph, GraphFormat::records));

  const auto [partition, memberships] = stage("communities", [&] {
    Partition p = louvain(graph, cfg.seed);
    CommunityAssignment ca = soft_memberships(graph, p, cfg.tau);
    return std::make_pair(std::move(p), std::move(ca));
  });
  emit("communities.json", communities_to_records(partition, memberships));

  const CentralityMap centrality = stage("centrality", [&] {
    return eigenvector_centrality(graph, cfg.tol, cfg.max_iter, cfg.damping);
  });
  emit("centrality.json", centrality_to_records(centrality));

  const Ontology ontology = stage("ontology", [&] {
    return extract_ontology(graph, memberships, centrality);
  });
  emit("ontology.json", ontology_to_records(ontology));

  return result;
}

}  // namespace termnet
