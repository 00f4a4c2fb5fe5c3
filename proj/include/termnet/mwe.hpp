#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "termnet/corpus.hpp"

namespace termnet {

struct PmiScore {
  Bigram bigram;
  double pmi = 0.0;   // bits (base-2 log)
  double ppmi = 0.0;  // max(0, pmi)
  std::int64_t count = 0;
  std::int64_t docfreq = 0;
};

/// PMI-ranked multi-word-expression candidates. Entries are sorted by
/// descending pmi, ties by descending count, then lexicographic bigram.
struct MweRanking {
  std::vector<PmiScore> entries;
  double min_df = 0.0;
  double max_df = 0.0;
  int top_n = 0;
};

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

/// nullopt marks the undefined case (a zero factor in the denominator).
/// Rankings sort undefined cells as 0.
using MccValue = std::optional<double>;

/// Expression-by-label MCC matrix. Labels are sorted; unused_labels lists
/// cluster labels that appear in no document (their columns are undefined).
struct AssociationMatrix {
  std::vector<Bigram> expressions;
  std::vector<std::string> labels;
  std::vector<std::vector<MccValue>> cells;  // [expression][label]
  std::vector<std::string> unused_labels;
};

/// log2( p(x,y) / (p(x) p(y)) ) with p(x,y) = X_bi/N, p(x) = X_x/N and
/// N the total unigram count. Throws on a bigram absent from the table
/// (absent bigrams are never scored).
double pmi(const NgramTable& table, const Bigram& bigram);

double ppmi(const NgramTable& table, const Bigram& bigram);

/// Document-frequency bound semantics: values in (0,1) are fractions of
/// num_docs, values >= 1 are absolute counts, 0 means unbounded.
std::int64_t resolve_df_bound(double value, std::int64_t num_docs, bool is_upper);

/// Scores every bigram whose document frequency lies inside [min_df, max_df],
/// sorts by the ranking total order and keeps the top_n entries.
MweRanking rank_mwes(const NgramTable& table, double min_df, double max_df,
                     int top_n);

/// Add-one permutation p-value: (1 + #{null >= observed}) / (1 + #null).
double add_one_pvalue(const std::vector<double>& null_scores, double observed);

/// Permutation significance of a bigram: each replicate shuffles token order
/// independently within every document (unigram marginals are preserved, so
/// only the joint count varies) and rescored; bigrams absent from a replicate
/// score -inf. Deterministic for a fixed seed; replicate r draws its
/// generator from (seed, r).
double permutation_test(std::span<const TokenizedDoc> docs, const Bigram& bigram,
                        int n_perm, std::uint64_t seed);

/// (tp*tn - fp*fn) / sqrt((tp+fp)(tp+fn)(tn+fp)(tn+fn)), or nullopt when any
/// denominator factor is zero. Exact under the swap (tp<->tn, fp<->fn) and
/// label-flip (tp<->fp, tn<->fn => sign change) symmetries.
MccValue mcc(const ConfusionCounts& c);

/// MCC between adjacent-pair presence of each expression and membership in
/// each cluster label. doc_labels runs parallel to docs.
AssociationMatrix associate(std::span<const TokenizedDoc> docs,
                            std::span<const std::set<std::string>> doc_labels,
                            std::span<const Bigram> expressions,
                            const std::set<std::string>& cluster_labels);

}  // namespace termnet
