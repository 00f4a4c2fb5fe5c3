#include "termnet/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace termnet {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(std::size_t line_no, const std::string& msg) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + msg);
}

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::set<std::string> parse_labels(const json& rec, const std::string& field,
                                   std::size_t line_no) {
  std::set<std::string> labels;
  if (field.empty() || !rec.contains(field)) return labels;
  const json& v = rec.at(field);
  auto add = [&](const json& item) {
    if (!item.is_string())
      line_error(line_no, "field '" + field + "' must be a string or array of strings");
    std::string s = item.get<std::string>();
    if (s.empty()) line_error(line_no, "empty label");
    labels.insert(std::move(s));
  };
  if (v.is_array()) {
    for (const auto& item : v) add(item);
  } else if (v.is_null()) {
    // explicit null = no labels
  } else {
    add(v);
  }
  return labels;
}

// --- tokenizer -------------------------------------------------------------

// Decodes the next UTF-8 code point; malformed bytes pass through as
// single-byte code points so tokenization never fails on dirty input.
char32_t next_codepoint(std::string_view s, std::size_t& i) {
  const unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return b0;
  }
  if (i + static_cast<std::size_t>(len) > s.size()) {
    ++i;
    return b0;
  }
  for (int k = 1; k < len; ++k) {
    const unsigned char bk = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
    if ((bk & 0xC0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (bk & 0x3F);
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

void append_codepoint(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_whitespace(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_strip_punct(char32_t cp) {
  if (cp < 0x80) {
    const char c = static_cast<char>(cp);
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
           (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
  }
  switch (cp) {
    case 0x00A1: case 0x00AB: case 0x00B7: case 0x00BB: case 0x00BF:
    case 0x2039: case 0x203A: case 0x2044:
    case 0xFF01: case 0xFF08: case 0xFF09: case 0xFF0C: case 0xFF0E:
    case 0xFF1A: case 0xFF1B: case 0xFF1F: case 0x3001: case 0x3002:
      return true;
    default:
      // general punctuation block: dashes, quotes, daggers, bullets, ellipsis
      return cp >= 0x2010 && cp <= 0x2027;
  }
}

char32_t to_lower(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 32;
  // Latin-1 uppercase letters (except the multiplication sign)
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 32;
  return cp;
}

}  // namespace

Corpus load_corpus(const std::string& path, const std::string& text_field,
                   const std::string& label_field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file '" + path + "'");

  Corpus corpus;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;

    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object())
      line_error(line_no, "malformed record");

    if (!rec.contains("id") || !rec.at("id").is_string())
      line_error(line_no, "missing field 'id'");
    std::string id = rec.at("id").get<std::string>();
    if (id.empty()) line_error(line_no, "empty id");
    if (!seen_ids.insert(id).second)
      line_error(line_no, "duplicate id '" + id + "'");

    if (!rec.contains(text_field))
      line_error(line_no, "missing field '" + text_field + "'");
    if (!rec.at(text_field).is_string())
      line_error(line_no, "field '" + text_field + "' is not a string");

    corpus.push_back(Document{std::move(id),
                              rec.at(text_field).get<std::string>(),
                              parse_labels(rec, label_field, line_no)});
  }
  return corpus;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto end = line.find_last_not_of(" \t");
    std::string w = line.substr(start, end - start + 1);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    words.insert(std::move(w));
  }
  return words;
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
      "doing", "don't", "down", "during", "each", "few", "for", "from",
      "further", "had", "hadn't", "has", "hasn't", "have", "haven't",
      "having", "he", "her", "here", "hers", "herself", "him", "himself",
      "his", "how", "i", "if", "in", "into", "is", "isn't", "it", "its",
      "itself", "just", "me", "more", "most", "mustn't", "my", "myself",
      "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
      "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
      "same", "shan't", "she", "should", "shouldn't", "so", "some", "such",
      "than", "that", "the", "their", "theirs", "them", "themselves", "then",
      "there", "these", "they", "this", "those", "through", "to", "too",
      "under", "until", "up", "very", "was", "wasn't", "we", "were",
      "weren't", "what", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "won't", "would", "wouldn't", "you", "your",
      "yours", "yourself", "yourselves"};
  return words;
}

std::vector<std::string> tokenize_text(std::string_view text,
                                       const std::set<std::string>& stopwords) {
  std::vector<std::string> tokens;
  std::vector<char32_t> raw;
  std::size_t i = 0;

  auto flush = [&]() {
    if (raw.empty()) return;
    std::size_t lo = 0, hi = raw.size();
    while (lo < hi && is_strip_punct(raw[lo])) ++lo;
    while (hi > lo && is_strip_punct(raw[hi - 1])) --hi;
    if (lo < hi) {
      std::string tok;
      for (std::size_t k = lo; k < hi; ++k) append_codepoint(tok, to_lower(raw[k]));
      if (!stopwords.count(tok)) tokens.push_back(std::move(tok));
    }
    raw.clear();
  };

  while (i < text.size()) {
    const char32_t cp = next_codepoint(text, i);
    if (is_whitespace(cp)) {
      flush();
    } else {
      raw.push_back(cp);
    }
  }
  flush();
  return tokens;
}

TokenizedDoc tokenize(const Document& doc, const std::set<std::string>& stopwords) {
  return TokenizedDoc{doc.id, tokenize_text(doc.text, stopwords)};
}

std::vector<TokenizedDoc> tokenize_corpus(const Corpus& corpus,
                                          const std::set<std::string>& stopwords) {
  std::vector<TokenizedDoc> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus) out.push_back(tokenize(doc, stopwords));
  return out;
}

NgramTable count_ngrams(std::span<const TokenizedDoc> docs) {
  NgramTable t;
  t.num_docs = static_cast<std::int64_t>(docs.size());
  for (const auto& doc : docs) {
    std::set<std::string> doc_unigrams;
    std::set<Bigram> doc_bigrams;
    for (std::size_t k = 0; k < doc.tokens.size(); ++k) {
      ++t.unigram_counts[doc.tokens[k]];
      doc_unigrams.insert(doc.tokens[k]);
      if (k + 1 < doc.tokens.size()) {
        Bigram bg{doc.tokens[k], doc.tokens[k + 1]};
        ++t.bigram_counts[bg];
        doc_bigrams.insert(std::move(bg));
      }
    }
    t.total_unigrams += static_cast<std::int64_t>(doc.tokens.size());
    for (const auto& u : doc_unigrams) ++t.unigram_docfreq[u];
    for (const auto& b : doc_bigrams) ++t.bigram_docfreq[b];
  }
  return t;
}

NgramTable merge_tables(const NgramTable& a, const NgramTable& b) {
  NgramTable out = a;
  for (const auto& [k, v] : b.unigram_counts) out.unigram_counts[k] += v;
  for (const auto& [k, v] : b.bigram_counts) out.bigram_counts[k] += v;
  for (const auto& [k, v] : b.unigram_docfreq) out.unigram_docfreq[k] += v;
  for (const auto& [k, v] : b.bigram_docfreq) out.bigram_docfreq[k] += v;
  out.total_unigrams += b.total_unigrams;
  out.num_docs += b.num_docs;
  return out;
}

}  // namespace termnet
