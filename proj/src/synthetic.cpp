#include "termnet/synthetic.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "termnet/rng.hpp"

namespace termnet {

namespace {

// Phrase inventory for the default labels; custom labels fall back to
// generated token pairs. All tokens are distinct across phrases so every
// phrase keeps exclusive unigram marginals.
std::vector<Bigram> phrases_for(const std::string& label) {
  if (label == "stroke")
    return {{"vessel", "occlusion"}, {"ischaemic", "penumbra"}};
  if (label == "dementia")
    return {{"hippocampal", "atrophy"}, {"ventricular", "enlargement"}};
  if (label == "tumour")
    return {{"glioblastoma", "multiforme"}, {"dural", "thickening"}};
  if (label == "epilepsy")
    return {{"mesial", "sclerosis"}, {"interictal", "spikes"}};
  return {{label + "finding0", label + "pattern0"},
          {label + "finding1", label + "pattern1"}};
}

std::string filler_token(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%03d", i);
  return buf;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& cfg) {
  if (cfg.num_docs < 1) throw std::invalid_argument("num_docs must be >= 1");
  if (cfg.labels.empty()) throw std::invalid_argument("labels must be non-empty");
  if (cfg.filler_vocab < 1) throw std::invalid_argument("filler_vocab must be >= 1");
  if (cfg.phrase_repeats < 1) throw std::invalid_argument("phrase_repeats must be >= 1");

  SyntheticCorpus out;
  std::map<std::string, std::vector<Bigram>> by_label;
  for (const auto& label : cfg.labels) {
    by_label[label] = phrases_for(label);
    for (const auto& phrase : by_label[label]) out.planted.emplace_back(phrase, label);
  }

  const int plant_tokens =
      2 * cfg.phrase_repeats * static_cast<int>(by_label.begin()->second.size());
  if (cfg.tokens_per_doc < plant_tokens + 1)
    throw std::invalid_argument("tokens_per_doc too small for the planted phrases");

  DetRng rng(DetRng::stream_seed(cfg.seed, 0x73796e74));  // "synt"
  out.docs.reserve(static_cast<std::size_t>(cfg.num_docs));
  for (int d = 0; d < cfg.num_docs; ++d) {
    const std::string& label =
        cfg.labels[static_cast<std::size_t>(d) % cfg.labels.size()];

    // Units keep planted pairs adjacent: inserting between units can never
    // split an earlier phrase instance.
    std::vector<std::vector<std::string>> units;
    const int filler = cfg.tokens_per_doc - plant_tokens;
    units.reserve(static_cast<std::size_t>(filler + plant_tokens / 2));
    for (int k = 0; k < filler; ++k)
      units.push_back({filler_token(
          static_cast<int>(rng.bounded(static_cast<std::uint64_t>(cfg.filler_vocab))))});

    for (const auto& phrase : by_label[label]) {
      for (int r = 0; r < cfg.phrase_repeats; ++r) {
        const auto pos = static_cast<std::ptrdiff_t>(rng.bounded(units.size() + 1));
        units.insert(units.begin() + pos, {phrase.first, phrase.second});
      }
    }

    std::ostringstream text;
    bool first = true;
    for (const auto& unit : units) {
      for (const auto& tok : unit) {
        if (!first) text << ' ';
        first = false;
        text << tok;
      }
    }
    char id[24];
    std::snprintf(id, sizeof id, "doc-%05d", d);
    out.docs.push_back(Document{id, text.str(), {label}});
  }
  return out;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::ostringstream out;
  for (const auto& doc : corpus) {
    nlohmann::json rec{{"id", doc.id}, {"text", doc.text}, {"labels", doc.labels}};
    out << rec.dump() << "\n";
  }
  return out.str();
}

}  // namespace termnet
