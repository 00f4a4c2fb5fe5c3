#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace termnet {

// Ordered token pair, exactly as it occurs in text.
using Bigram = std::pair<std::string, std::string>;

struct Document {
  std::string id;
  std::string text;
  std::set<std::string> labels;  // cluster/diagnosis labels, may be empty
};

using Corpus = std::vector<Document>;

struct TokenizedDoc {
  std::string id;
  std::vector<std::string> tokens;  // lowercased, stop-filtered, in order
};

/// Unigram/bigram count table over a set of documents. Tables built from
/// disjoint document sets can be merged; counts of zero are never stored.
struct NgramTable {
  std::map<std::string, std::int64_t> unigram_counts;
  std::map<Bigram, std::int64_t> bigram_counts;
  std::map<std::string, std::int64_t> unigram_docfreq;
  std::map<Bigram, std::int64_t> bigram_docfreq;
  std::int64_t total_unigrams = 0;  // == sum of unigram_counts
  std::int64_t num_docs = 0;
};

/// Loads a line-delimited record file (one JSON object per line). Every
/// record needs a non-empty unique "id" and the named text field; the label
/// field is optional and may be a string or an array of strings.
/// Throws with the offending line number on malformed input.
Corpus load_corpus(const std::string& path, const std::string& text_field,
                   const std::string& label_field = "");

/// One lowercase word per line; '#' comments and blank lines ignored.
std::set<std::string> load_stopwords(const std::string& path);

/// The generic English list bundled with the toolkit.
const std::set<std::string>& default_stopwords();

/// Lowercases, splits on Unicode whitespace, strips leading/trailing
/// punctuation, and drops stop-words and empty tokens.
std::vector<std::string> tokenize_text(std::string_view text,
                                       const std::set<std::string>& stopwords);

TokenizedDoc tokenize(const Document& doc, const std::set<std::string>& stopwords);

std::vector<TokenizedDoc> tokenize_corpus(const Corpus& corpus,
                                          const std::set<std::string>& stopwords);

/// Counts unigrams and adjacent ordered bigrams per document. Bigrams never
/// cross document boundaries; docfreq counts distinct containing documents.
NgramTable count_ngrams(std::span<const TokenizedDoc> docs);

/// Pointwise sum of two tables built from disjoint document sets.
/// Commutative and associative.
NgramTable merge_tables(const NgramTable& a, const NgramTable& b);

}  // namespace termnet
