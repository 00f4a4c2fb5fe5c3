#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termnet/corpus.hpp"
#include "termnet/mwe.hpp"

namespace termnet {

/// Everything the end-to-end pipeline needs. Defaults are usable as-is on a
/// corpus with labels.
struct PipelineConfig {
  std::string corpus_path;
  std::string text_field = "text";
  std::string label_field;     // empty = skip the association stage
  std::string stopwords_path;  // empty = bundled default list
  std::string categories_path;

  double min_df = 2;    // (0,1) = fraction of docs, >= 1 absolute, 0 = unbounded
  double max_df = 0.5;
  int top_n = 20;

  double min_pmi = 0.0;
  std::int64_t min_count = 2;

  std::uint64_t seed = 0;
  double tau = 0.2;

  double tol = 1e-10;
  int max_iter = 10000;
  bool damping = true;

  std::string out_dir = ".";
};

struct PipelineResult {
  std::vector<std::string> artifacts;  // paths written, in stage order
};

/// Runs extract -> assoc -> graph -> communities -> centrality -> ontology,
/// writing one artifact per stage into out_dir. Any failure is rethrown with
/// the stage name prefixed. Output bytes depend only on the inputs and the
/// seed.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// Tabular writers shared by the pipeline and the CLI subcommands.
std::string ranking_to_tsv(const MweRanking& ranking);
std::string association_to_tsv(const AssociationMatrix& m);

}  // namespace termnet
