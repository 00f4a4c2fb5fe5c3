#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "termnet/corpus.hpp"

namespace termnet {

/// Seeded synthetic corpus with planted high-PMI phrases. Every document
/// carries exactly one label; each label owns a fixed set of two-token
/// phrases whose tokens occur nowhere else, so each phrase is perfectly
/// associated with its label and far above the filler-bigram PMI range.
struct SyntheticConfig {
  int num_docs = 1000;
  int tokens_per_doc = 100;
  std::uint64_t seed = 0;
  int filler_vocab = 300;
  int phrase_repeats = 4;  // insertions of each phrase per labeled document
  std::vector<std::string> labels = {"stroke", "dementia", "tumour", "epilepsy"};
};

struct SyntheticCorpus {
  Corpus docs;
  // (phrase, label) for every planted phrase
  std::vector<std::pair<Bigram, std::string>> planted;
};

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg);

/// One JSON object per line: {"id", "text", "labels"}.
std::string corpus_to_jsonl(const Corpus& corpus);

}  // namespace termnet
