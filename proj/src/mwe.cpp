#include "termnet/mwe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "termnet/rng.hpp"

namespace termnet {

namespace {

std::int64_t lookup(const std::map<std::string, std::int64_t>& m,
                    const std::string& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

double pmi_from_counts(std::int64_t joint, std::int64_t cx, std::int64_t cy,
                       std::int64_t n) {
  const double total = static_cast<double>(n);
  const double p_xy = static_cast<double>(joint) / total;
  const double p_x = static_cast<double>(cx) / total;
  const double p_y = static_cast<double>(cy) / total;
  return std::log2(p_xy / (p_x * p_y));
}

}  // namespace

double pmi(const NgramTable& table, const Bigram& bigram) {
  auto it = table.bigram_counts.find(bigram);
  if (it == table.bigram_counts.end() || it->second < 1)
    throw std::runtime_error("unknown bigram '" + bigram.first + " " +
                             bigram.second + "'");
  return pmi_from_counts(it->second, lookup(table.unigram_counts, bigram.first),
                         lookup(table.unigram_counts, bigram.second),
                         table.total_unigrams);
}

double ppmi(const NgramTable& table, const Bigram& bigram) {
  return std::max(0.0, pmi(table, bigram));
}

std::int64_t resolve_df_bound(double value, std::int64_t num_docs, bool is_upper) {
  if (value < 0.0) throw std::invalid_argument("document-frequency bound must be >= 0");
  if (value == 0.0) return is_upper ? num_docs : 0;
  if (value < 1.0) {
    const double scaled = value * static_cast<double>(num_docs);
    return is_upper ? static_cast<std::int64_t>(std::floor(scaled + 1e-9))
                    : static_cast<std::int64_t>(std::ceil(scaled - 1e-9));
  }
  return static_cast<std::int64_t>(std::llround(value));
}

MweRanking rank_mwes(const NgramTable& table, double min_df, double max_df,
                     int top_n) {
  if (top_n < 1) throw std::invalid_argument("top_n must be >= 1");
  const std::int64_t lo = resolve_df_bound(min_df, table.num_docs, false);
  const std::int64_t hi = resolve_df_bound(max_df, table.num_docs, true);
  if (lo > hi)
    throw std::invalid_argument("min_df exceeds max_df after resolution");

  MweRanking ranking;
  ranking.min_df = min_df;
  ranking.max_df = max_df;
  ranking.top_n = top_n;

  for (const auto& [bigram, count] : table.bigram_counts) {
    const std::int64_t df = table.bigram_docfreq.at(bigram);
    if (df < lo || df > hi) continue;
    PmiScore s;
    s.bigram = bigram;
    s.pmi = pmi(table, bigram);
    s.ppmi = std::max(0.0, s.pmi);
    s.count = count;
    s.docfreq = df;
    ranking.entries.push_back(std::move(s));
  }

  std::sort(ranking.entries.begin(), ranking.entries.end(),
            [](const PmiScore& a, const PmiScore& b) {
              if (a.pmi != b.pmi) return a.pmi > b.pmi;
              if (a.count != b.count) return a.count > b.count;
              return a.bigram < b.bigram;
            });
  if (ranking.entries.size() > static_cast<std::size_t>(top_n))
    ranking.entries.resize(static_cast<std::size_t>(top_n));
  return ranking;
}

double add_one_pvalue(const std::vector<double>& null_scores, double observed) {
  std::int64_t hits = 0;
  for (double s : null_scores)
    if (s >= observed) ++hits;
  return static_cast<double>(1 + hits) /
         static_cast<double>(1 + null_scores.size());
}

double permutation_test(std::span<const TokenizedDoc> docs, const Bigram& bigram,
                        int n_perm, std::uint64_t seed) {
  if (n_perm < 1) throw std::invalid_argument("n_perm must be >= 1");

  const NgramTable table = count_ngrams(docs);
  const double observed = pmi(table, bigram);  // throws if unobserved
  const std::int64_t cx = table.unigram_counts.at(bigram.first);
  const std::int64_t cy = table.unigram_counts.at(bigram.second);
  const std::int64_t n = table.total_unigrams;

  // Within-document shuffles keep all unigram counts fixed, so each
  // replicate's PMI only depends on the shuffled joint count.
  std::vector<double> null_scores;
  null_scores.reserve(static_cast<std::size_t>(n_perm));
  std::vector<std::size_t> order;
  for (int rep = 0; rep < n_perm; ++rep) {
    DetRng rng(DetRng::stream_seed(seed, static_cast<std::uint64_t>(rep)));
    std::int64_t joint = 0;
    for (const auto& doc : docs) {
      order.resize(doc.tokens.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(order);
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        if (doc.tokens[order[k]] == bigram.first &&
            doc.tokens[order[k + 1]] == bigram.second)
          ++joint;
      }
    }
    null_scores.push_back(joint == 0
                              ? -std::numeric_limits<double>::infinity()
                              : pmi_from_counts(joint, cx, cy, n));
  }
  return add_one_pvalue(null_scores, observed);
}

MccValue mcc(const ConfusionCounts& c) {
  double f[4] = {static_cast<double>(c.tp + c.fp), static_cast<double>(c.tp + c.fn),
                 static_cast<double>(c.tn + c.fp), static_cast<double>(c.tn + c.fn)};
  if (f[0] == 0.0 || f[1] == 0.0 || f[2] == 0.0 || f[3] == 0.0)
    return std::nullopt;
  // Multiply the factors in sorted order so the symmetric confusion matrices
  // produce bit-identical denominators.
  std::sort(std::begin(f), std::end(f));
  const double denom = std::sqrt(f[0] * f[1] * f[2] * f[3]);
  const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                     static_cast<double>(c.fp) * static_cast<double>(c.fn);
  return num / denom;
}

AssociationMatrix associate(std::span<const TokenizedDoc> docs,
                            std::span<const std::set<std::string>> doc_labels,
                            std::span<const Bigram> expressions,
                            const std::set<std::string>& cluster_labels) {
  if (expressions.empty())
    throw std::invalid_argument("associate requires at least one expression");
  if (docs.size() != doc_labels.size())
    throw std::invalid_argument("docs and doc_labels differ in length");

  const std::int64_t n_docs = static_cast<std::int64_t>(docs.size());
  std::vector<std::set<Bigram>> doc_pairs(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto& toks = docs[d].tokens;
    for (std::size_t k = 0; k + 1 < toks.size(); ++k)
      doc_pairs[d].insert(Bigram{toks[k], toks[k + 1]});
  }

  AssociationMatrix m;
  m.expressions.assign(expressions.begin(), expressions.end());
  m.labels.assign(cluster_labels.begin(), cluster_labels.end());

  std::map<std::string, std::int64_t> docs_with_label;
  for (const auto& label : m.labels) {
    std::int64_t count = 0;
    for (const auto& labels : doc_labels)
      if (labels.count(label)) ++count;
    docs_with_label[label] = count;
    if (count == 0) m.unused_labels.push_back(label);
  }

  m.cells.resize(m.expressions.size());
  for (std::size_t e = 0; e < m.expressions.size(); ++e) {
    m.cells[e].resize(m.labels.size());
    std::map<std::string, std::int64_t> tp_per_label;
    std::int64_t docs_with_expr = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (!doc_pairs[d].count(m.expressions[e])) continue;
      ++docs_with_expr;
      for (const auto& label : doc_labels[d])
        if (cluster_labels.count(label)) ++tp_per_label[label];
    }
    for (std::size_t c = 0; c < m.labels.size(); ++c) {
      ConfusionCounts cc;
      cc.tp = tp_per_label.count(m.labels[c]) ? tp_per_label[m.labels[c]] : 0;
      cc.fp = docs_with_expr - cc.tp;
      cc.fn = docs_with_label[m.labels[c]] - cc.tp;
      cc.tn = n_docs - cc.tp - cc.fp - cc.fn;
      m.cells[e][c] = mcc(cc);
    }
  }
  return m;
}

}  // namespace termnet
