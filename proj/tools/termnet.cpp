#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termnet/community.hpp"
#include "termnet/corpus.hpp"
#include "termnet/graph.hpp"
#include "termnet/io.hpp"
#include "termnet/mwe.hpp"
#include "termnet/phenotype.hpp"
#include "termnet/pipeline.hpp"
#include "termnet/synthetic.hpp"

namespace {

using namespace termnet;

// Data goes to the named file (atomically) or to stdout when no path given.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

GraphFormat format_for(const std::string& explicit_format, const std::string& path,
                       GraphFormat fallback) {
  if (!explicit_format.empty()) return parse_graph_format(explicit_format);
  if (path.ends_with(".dot") || path.ends_with(".gv")) return GraphFormat::dot;
  if (path.ends_with(".graphml") || path.ends_with(".xml")) return GraphFormat::graphml;
  if (path.ends_with(".json") || path.ends_with(".jsonl")) return GraphFormat::records;
  return fallback;
}

struct CorpusOpts {
  std::string path;
  std::string text_field = "text";
  std::string label_field;
  std::string stopwords_path;

  void attach(CLI::App* cmd, bool with_labels) {
    cmd->add_option("--corpus", path, "Line-delimited JSON corpus file")
        ->required();
    cmd->add_option("--text-field", text_field, "Record field holding the text");
    if (with_labels)
      cmd->add_option("--label-field", label_field,
                      "Record field holding cluster labels");
    cmd->add_option("--stopwords", stopwords_path,
                    "Stop-word file (one word per line); bundled list if omitted");
  }

  std::set<std::string> stopwords() const {
    return stopwords_path.empty() ? default_stopwords()
                                  : load_stopwords(stopwords_path);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"termnet - corpus terminology mining: PMI multi-word expressions, "
               "label association, co-occurrence graphs, communities and "
               "phenotype dendrograms"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI config file");
  app.failure_message(CLI::FailureMessage::help);

  // ---- mwe ----------------------------------------------------------------
  auto* mwe_cmd = app.add_subcommand("mwe", "Multi-word expression tools");
  mwe_cmd->require_subcommand(1);

  struct {
    CorpusOpts corpus;
    double min_df = 1, max_df = 0;
    int top_n = 50;
    std::string out;
  } ext;
  auto* extract = mwe_cmd->add_subcommand(
      "extract", "Rank bigrams by PMI within document-frequency bounds");
  ext.corpus.attach(extract, false);
  extract->add_option("--min-df", ext.min_df,
                      "Min document frequency ((0,1) = fraction, >=1 absolute)");
  extract->add_option("--max-df", ext.max_df,
                      "Max document frequency (0 = unbounded)");
  extract->add_option("--top-n", ext.top_n, "Number of candidates to keep");
  extract->add_option("--out", ext.out, "Output TSV path (stdout if omitted)");
  extract->callback([&] {
    const Corpus corpus = load_corpus(ext.corpus.path, ext.corpus.text_field);
    const auto docs = tokenize_corpus(corpus, ext.corpus.stopwords());
    const auto ranking =
        rank_mwes(count_ngrams(docs), ext.min_df, ext.max_df, ext.top_n);
    emit(ext.out, ranking_to_tsv(ranking));
  });

  struct {
    CorpusOpts corpus;
    double min_df = 1, max_df = 0;
    int top_n = 50;
    std::string out;
  } asc;
  auto* assoc = mwe_cmd->add_subcommand(
      "assoc", "Associate top expressions with cluster labels via MCC");
  asc.corpus.attach(assoc, true);
  assoc->get_option("--label-field")->required();
  assoc->add_option("--min-df", asc.min_df, "Min document frequency");
  assoc->add_option("--max-df", asc.max_df, "Max document frequency (0 = unbounded)");
  assoc->add_option("--top-n", asc.top_n, "Number of expressions to associate");
  assoc->add_option("--out", asc.out, "Output TSV path (stdout if omitted)");
  assoc->callback([&] {
    const Corpus corpus =
        load_corpus(asc.corpus.path, asc.corpus.text_field, asc.corpus.label_field);
    const auto docs = tokenize_corpus(corpus, asc.corpus.stopwords());
    const auto ranking =
        rank_mwes(count_ngrams(docs), asc.min_df, asc.max_df, asc.top_n);

    std::set<std::string> labels;
    std::vector<std::set<std::string>> doc_labels;
    for (const auto& doc : corpus) {
      doc_labels.push_back(doc.labels);
      labels.insert(doc.labels.begin(), doc.labels.end());
    }
    std::vector<Bigram> expressions;
    for (const auto& e : ranking.entries) expressions.push_back(e.bigram);
    if (expressions.empty() || labels.empty()) {
      emit(asc.out, "expression\tlabel\tmcc\n");
      return;
    }
    const auto matrix = associate(docs, doc_labels, expressions, labels);
    for (const auto& unused : matrix.unused_labels)
      std::cerr << "warning: label '" << unused << "' appears in no document\n";
    emit(asc.out, association_to_tsv(matrix));
  });

  // ---- graph --------------------------------------------------------------
  auto* graph_cmd = app.add_subcommand("graph", "Co-occurrence graph tools");
  graph_cmd->require_subcommand(1);

  struct {
    CorpusOpts corpus;
    double min_pmi = 0.0;
    std::int64_t min_count = 2;
    std::string categories;
    std::string out;
    std::string format;
  } bld;
  auto* build = graph_cmd->add_subcommand(
      "build", "Build the PMI-weighted co-occurrence graph from a corpus");
  bld.corpus.attach(build, false);
  build->add_option("--min-pmi", bld.min_pmi, "Minimum edge PMI (bits)");
  build->add_option("--min-count", bld.min_count,
                    "Minimum combined co-occurrence count");
  build->add_option("--categories", bld.categories,
                    "term<TAB>category annotation file");
  build->add_option("--out", bld.out, "Output path (stdout if omitted)");
  build->add_option("--format", bld.format, "dot | graphml | records");
  build->callback([&] {
    const Corpus corpus = load_corpus(bld.corpus.path, bld.corpus.text_field);
    const auto docs = tokenize_corpus(corpus, bld.corpus.stopwords());
    TermGraph g = build_graph(count_ngrams(docs), bld.min_pmi, bld.min_count);
    if (!bld.categories.empty())
      for (const auto& [term, cat] : load_categories(bld.categories))
        if (g.has_node(term)) g.set_category(term, cat);
    emit(bld.out, export_graph(g, format_for(bld.format, bld.out, GraphFormat::records)));
  });

  struct {
    std::string graph;
    std::string term;
    int radius = 1;
    std::string out;
    std::string format;
  } sub;
  auto* subg = graph_cmd->add_subcommand(
      "subgraph", "Induced sub-graph within a hop radius of a term");
  subg->add_option("--graph", sub.graph, "Graph records file")->required();
  subg->add_option("--term", sub.term, "Anchor term")->required();
  subg->add_option("--radius", sub.radius, "Hop radius (>= 1)");
  subg->add_option("--out", sub.out, "Output path (stdout if omitted)");
  subg->add_option("--format", sub.format, "dot | graphml | records");
  subg->callback([&] {
    const TermGraph g = load_graph_records(sub.graph);
    const TermGraph s = subgraph(g, sub.term, sub.radius);
    emit(sub.out, export_graph(s, format_for(sub.format, sub.out, GraphFormat::dot)));
  });

  struct {
    std::string graph;
    std::uint64_t seed = 0;
    double tau = 0.2;
    std::string out;
  } com;
  auto* comm = graph_cmd->add_subcommand(
      "communities", "Louvain communities with soft membership probabilities");
  comm->add_option("--graph", com.graph, "Graph records file")->required();
  comm->add_option("--seed", com.seed, "Deterministic seed")
      ->envname("TERMNET_SEED");
  comm->add_option("--tau", com.tau, "Multi-membership threshold in (0, 1]");
  comm->add_option("--out", com.out, "Output path (stdout if omitted)");
  comm->callback([&] {
    const TermGraph g = load_graph_records(com.graph);
    const Partition p = louvain(g, com.seed);
    const CommunityAssignment ca = soft_memberships(g, p, com.tau);
    emit(com.out, communities_to_records(p, ca));
  });

  struct {
    std::string graph;
    double tol = 1e-10;
    int max_iter = 10000;
    bool damping = false;
    std::string out;
  } cen;
  auto* cent = graph_cmd->add_subcommand(
      "centrality", "Eigenvector centrality per connected component");
  cent->add_option("--graph", cen.graph, "Graph records file")->required();
  cent->add_option("--tol", cen.tol, "Convergence tolerance");
  cent->add_option("--max-iter", cen.max_iter, "Iteration cap");
  cent->add_flag("--damping", cen.damping,
                 "Add unit self-loops (fixes bipartite oscillation)");
  cent->add_option("--out", cen.out, "Output path (stdout if omitted)");
  cent->callback([&] {
    const TermGraph g = load_graph_records(cen.graph);
    emit(cen.out, centrality_to_records(
                      eigenvector_centrality(g, cen.tol, cen.max_iter, cen.damping)));
  });

  struct {
    std::string graph;
    std::string communities;
    std::string centrality;
    std::string out;
  } ont;
  auto* onto = graph_cmd->add_subcommand(
      "ontology", "Head-term ontology from communities and centrality");
  onto->add_option("--graph", ont.graph, "Graph records file")->required();
  onto->add_option("--communities", ont.communities, "communities records file")
      ->required();
  onto->add_option("--centrality", ont.centrality, "centrality records file")
      ->required();
  onto->add_option("--out", ont.out, "Output path (stdout if omitted)");
  onto->callback([&] {
    const TermGraph g = load_graph_records(ont.graph);
    std::ifstream cin_(ont.communities);
    if (!cin_) throw std::runtime_error("cannot open '" + ont.communities + "'");
    auto [p, ca] = communities_from_records(cin_);
    std::ifstream nin(ont.centrality);
    if (!nin) throw std::runtime_error("cannot open '" + ont.centrality + "'");
    const CentralityMap cm = centrality_from_records(nin);
    emit(ont.out, ontology_to_records(extract_ontology(g, ca, cm)));
  });

  // ---- pheno --------------------------------------------------------------
  auto* pheno_cmd = app.add_subcommand("pheno", "Phenotype clustering tools");
  pheno_cmd->require_subcommand(1);

  struct {
    std::string embeddings;
    int cut_k = 0;
    std::string out;
    std::string merges;
    std::string assignments;
  } phe;
  auto* cluster = pheno_cmd->add_subcommand(
      "cluster", "Ward-linkage hierarchical clustering of embedding vectors");
  cluster->add_option("--embeddings", phe.embeddings,
                      "TSV file: label then numeric columns")
      ->required();
  cluster->add_option("--cut-k", phe.cut_k,
                      "Also emit a flat k-cluster assignment (requires --assignments)");
  cluster->add_option("--out", phe.out, "Newick tree output (stdout if omitted)");
  cluster->add_option("--merges", phe.merges, "Merge-table records output");
  cluster->add_option("--assignments", phe.assignments, "Flat assignment TSV output");
  cluster->callback([&] {
    const EmbeddingMatrix m = load_embeddings(phe.embeddings);
    const Dendrogram dg = hac_ward(m);
    emit(phe.out, export_dendrogram(dg, TreeFormat::newick));
    if (!phe.merges.empty())
      emit(phe.merges, export_dendrogram(dg, TreeFormat::records));
    if (!phe.assignments.empty()) {
      if (phe.cut_k < 1)
        throw std::invalid_argument("--assignments requires --cut-k >= 1");
      const std::vector<int> cut = cut_dendrogram(dg, phe.cut_k);
      std::string tsv = "item\tcluster\n";
      for (std::size_t i = 0; i < cut.size(); ++i)
        tsv += dg.leaves[i] + "\t" + std::to_string(cut[i]) + "\n";
      emit(phe.assignments, tsv);
    }
  });

  // ---- pipeline -----------------------------------------------------------
  PipelineConfig pip;
  auto* pipe = app.add_subcommand(
      "pipeline", "extract -> assoc -> graph -> communities -> centrality -> ontology");
  pipe->add_option("--corpus", pip.corpus_path, "Line-delimited JSON corpus file")
      ->required();
  pipe->add_option("--text-field", pip.text_field, "Record field holding the text");
  pipe->add_option("--label-field", pip.label_field, "Record field holding labels");
  pipe->add_option("--stopwords", pip.stopwords_path, "Stop-word file");
  pipe->add_option("--categories", pip.categories_path, "term<TAB>category file");
  pipe->add_option("--min-df", pip.min_df, "Min document frequency");
  pipe->add_option("--max-df", pip.max_df, "Max document frequency (0 = unbounded)");
  pipe->add_option("--top-n", pip.top_n, "Expressions to keep");
  pipe->add_option("--min-pmi", pip.min_pmi, "Minimum edge PMI");
  pipe->add_option("--min-count", pip.min_count, "Minimum co-occurrence count");
  pipe->add_option("--seed", pip.seed, "Deterministic seed")->envname("TERMNET_SEED");
  pipe->add_option("--tau", pip.tau, "Multi-membership threshold");
  pipe->add_option("--tol", pip.tol, "Centrality tolerance");
  pipe->add_option("--max-iter", pip.max_iter, "Centrality iteration cap");
  pipe->add_flag("--damping,!--no-damping", pip.damping,
                 "Self-loop damping for centrality (default on)");
  pipe->add_option("--out-dir", pip.out_dir, "Directory for the artifact files");
  pipe->callback([&] {
    const PipelineResult res = run_pipeline(pip);
    for (const auto& path : res.artifacts) std::cerr << "wrote " << path << "\n";
  });

  // ---- synth --------------------------------------------------------------
  SyntheticConfig syn;
  std::string syn_out;
  auto* synth = app.add_subcommand(
      "synth", "Generate the bundled synthetic corpus (planted phrases)");
  synth->add_option("--docs", syn.num_docs, "Number of documents");
  synth->add_option("--doc-length", syn.tokens_per_doc, "Tokens per document");
  synth->add_option("--seed", syn.seed, "Deterministic seed")->envname("TERMNET_SEED");
  synth->add_option("--labels", syn.labels, "Label set (one phrase pair set each)");
  synth->add_option("--out", syn_out, "Output corpus path (stdout if omitted)");
  synth->callback([&] {
    const SyntheticCorpus sc = generate_synthetic_corpus(syn);
    emit(syn_out, corpus_to_jsonl(sc.docs));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
