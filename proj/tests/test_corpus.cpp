#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "termnet/corpus.hpp"
#include "termnet/rng.hpp"

using namespace termnet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  return path.string();
}

bool tables_equal(const NgramTable& a, const NgramTable& b) {
  return a.unigram_counts == b.unigram_counts && a.bigram_counts == b.bigram_counts &&
         a.unigram_docfreq == b.unigram_docfreq && a.bigram_docfreq == b.bigram_docfreq &&
         a.total_unigrams == b.total_unigrams && a.num_docs == b.num_docs;
}

TokenizedDoc doc(const std::string& id, std::vector<std::string> tokens) {
  return TokenizedDoc{id, std::move(tokens)};
}

}  // namespace

TEST_CASE("load_corpus reads records in order") {
  const auto path = write_temp(
      "corpus_ok.jsonl",
      R"({"id":"r1","text":"first report","labels":["dementia"]})"
      "\n"
      R"({"id":"r2","text":"second report"})"
      "\n");
  const Corpus c = load_corpus(path, "text", "labels");
  REQUIRE(c.size() == 2);
  CHECK(c[0].id == "r1");
  CHECK(c[0].labels == std::set<std::string>{"dementia"});
  CHECK(c[1].id == "r2");
  CHECK(c[1].labels.empty());
}

TEST_CASE("load_corpus errors carry the line number") {
  SUBCASE("missing text field") {
    const auto path = write_temp("corpus_missing.jsonl",
                                 R"({"id":"a","text":"x"})"
                                 "\n"
                                 R"({"id":"b","text":"y"})"
                                 "\n"
                                 R"({"id":"c"})"
                                 "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path, "text"),
                         doctest::Contains("line 3: missing field"),
                         std::runtime_error);
  }
  SUBCASE("malformed json") {
    const auto path = write_temp("corpus_bad.jsonl",
                                 R"({"id":"a","text":"x"})"
                                 "\n{oops\n");
    CHECK_THROWS_WITH_AS(load_corpus(path, "text"), doctest::Contains("line 2"),
                         std::runtime_error);
  }
  SUBCASE("duplicate id") {
    const auto path = write_temp("corpus_dup.jsonl",
                                 R"({"id":"a","text":"x"})"
                                 "\n"
                                 R"({"id":"a","text":"y"})"
                                 "\n");
    CHECK_THROWS_WITH_AS(load_corpus(path, "text"),
                         doctest::Contains("duplicate id 'a'"), std::runtime_error);
  }
  SUBCASE("empty label rejected") {
    const auto path =
        write_temp("corpus_lbl.jsonl", R"({"id":"a","text":"x","labels":[""]})"
                                       "\n");
    CHECK_THROWS_AS(load_corpus(path, "text", "labels"), std::runtime_error);
  }
}

TEST_CASE("load_corpus accepts a scalar label") {
  const auto path = write_temp("corpus_scalar.jsonl",
                               R"({"id":"a","text":"x","dx":"stroke"})"
                               "\n");
  const Corpus c = load_corpus(path, "text", "dx");
  CHECK(c[0].labels == std::set<std::string>{"stroke"});
}

TEST_CASE("tokenize lowercases, strips punctuation and drops stop-words") {
  Document d{"d1", "The left frontal lesion.", {}};
  CHECK(tokenize(d, {"the"}).tokens ==
        std::vector<std::string>{"left", "frontal", "lesion"});

  CHECK(tokenize_text("", {}).empty());
  CHECK(tokenize_text("a a a", {"a"}).empty());
  CHECK(tokenize_text("(left-sided), {mass}!", {}) ==
        std::vector<std::string>{"left-sided", "mass"});
  CHECK(tokenize_text("...", {}).empty());
}

TEST_CASE("tokenize handles non-ascii whitespace and punctuation") {
  // U+00A0 no-break space separates; curly quotes are stripped.
  CHECK(tokenize_text("Naïve “LESION”", {}) ==
        std::vector<std::string>{"naïve", "lesion"});
}

TEST_CASE("tokenization is idempotent") {
  DetRng rng(7);
  const std::set<std::string> stop = {"the", "of", "and"};
  const char* words[] = {"The", "lesion,", "small;", "vessel",   "(of)",
                         "AND", "cortex.", "deep",   "white-matter"};
  for (int trial = 0; trial < 20; ++trial) {
    std::string text;
    for (int k = 0; k < 30; ++k) {
      text += words[rng.bounded(std::size(words))];
      text += ' ';
    }
    const auto once = tokenize_text(text, stop);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize_text(joined, stop) == once);
  }
}

TEST_CASE("count_ngrams counts adjacent pairs per document") {
  SUBCASE("single doc") {
    const auto t = count_ngrams(std::vector<TokenizedDoc>{doc("d", {"a", "b", "a"})});
    CHECK(t.unigram_counts == std::map<std::string, std::int64_t>{{"a", 2}, {"b", 1}});
    CHECK(t.bigram_counts ==
          std::map<Bigram, std::int64_t>{{{"a", "b"}, 1}, {{"b", "a"}, 1}});
    CHECK(t.total_unigrams == 3);
    CHECK(t.num_docs == 1);
    CHECK(t.unigram_docfreq.at("a") == 1);
    CHECK(t.bigram_docfreq.at({"a", "b"}) == 1);
  }
  SUBCASE("no pairs across documents") {
    const auto t =
        count_ngrams(std::vector<TokenizedDoc>{doc("1", {"a"}), doc("2", {"b"})});
    CHECK(t.bigram_counts.empty());
    CHECK(t.total_unigrams == 2);
  }
  SUBCASE("single token") {
    const auto t = count_ngrams(std::vector<TokenizedDoc>{doc("1", {"x"})});
    CHECK(t.unigram_counts == std::map<std::string, std::int64_t>{{"x", 1}});
    CHECK(t.bigram_counts.empty());
    CHECK(t.total_unigrams == 1);
  }
}

TEST_CASE("bigram total equals sum of max(0, len-1)") {
  DetRng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TokenizedDoc> docs;
    std::int64_t expected = 0;
    const int n_docs = 1 + static_cast<int>(rng.bounded(6));
    for (int d = 0; d < n_docs; ++d) {
      const int len = static_cast<int>(rng.bounded(8));
      std::vector<std::string> toks;
      for (int k = 0; k < len; ++k)
        toks.push_back(std::string(1, static_cast<char>('a' + rng.bounded(4))));
      expected += std::max(0, len - 1);
      docs.push_back(doc("d" + std::to_string(d), std::move(toks)));
    }
    const auto t = count_ngrams(docs);
    std::int64_t total = 0;
    for (const auto& [_, c] : t.bigram_counts) total += c;
    CHECK(total == expected);
  }
}

TEST_CASE("merge_tables is a monoid over disjoint corpora") {
  const std::vector<TokenizedDoc> half1{doc("1", {"a", "b"})};
  const std::vector<TokenizedDoc> half2{doc("2", {"a"})};

  SUBCASE("identity") {
    const auto t = count_ngrams(half1);
    CHECK(tables_equal(merge_tables(t, NgramTable{}), t));
    CHECK(tables_equal(merge_tables(NgramTable{}, t), t));
  }
  SUBCASE("hand-computed merge") {
    const auto m = merge_tables(count_ngrams(half1), count_ngrams(half2));
    CHECK(m.unigram_counts == std::map<std::string, std::int64_t>{{"a", 2}, {"b", 1}});
    CHECK(m.unigram_docfreq == std::map<std::string, std::int64_t>{{"a", 2}, {"b", 1}});
    CHECK(m.num_docs == 2);
    CHECK(m.total_unigrams == 3);
  }
  SUBCASE("commutative and equal to counting the whole corpus") {
    DetRng rng(3);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<TokenizedDoc> all;
      const int n_docs = 2 + static_cast<int>(rng.bounded(6));
      for (int d = 0; d < n_docs; ++d) {
        std::vector<std::string> toks;
        const int len = static_cast<int>(rng.bounded(7));
        for (int k = 0; k < len; ++k)
          toks.push_back(std::string(1, static_cast<char>('a' + rng.bounded(3))));
        all.push_back(doc("d" + std::to_string(d), std::move(toks)));
      }
      const auto split = rng.bounded(all.size() + 1);
      const std::vector<TokenizedDoc> a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(split));
      const std::vector<TokenizedDoc> b(all.begin() + static_cast<std::ptrdiff_t>(split), all.end());
      const auto ta = count_ngrams(a);
      const auto tb = count_ngrams(b);
      CHECK(tables_equal(merge_tables(ta, tb), count_ngrams(all)));
      CHECK(tables_equal(merge_tables(ta, tb), merge_tables(tb, ta)));
    }
  }
}

TEST_CASE("stopword files ignore comments and case") {
  const auto path = write_temp("stop.txt", "# comment\nThe\n  of  \n\nand\n");
  const auto words = load_stopwords(path);
  CHECK(words == std::set<std::string>{"the", "of", "and"});
  CHECK(default_stopwords().count("the") == 1);
  CHECK(default_stopwords().count("lesion") == 0);
}
