#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pir/corpus.hpp"
#include "pir/error.hpp"
#include "pir/index.hpp"
#include "pir/text.hpp"

using namespace pir;

namespace {

Corpus random_corpus(std::mt19937_64& rng, std::size_t docs, std::size_t vocab, std::size_t max_len) {
  std::vector<Document> out;
  std::uniform_int_distribution<std::size_t> len(1, max_len), word(0, vocab - 1);
  for (std::size_t d = 0; d < docs; ++d) {
    std::string text;
    // Occasional exact duplicates force score ties.
    if (d > 0 && rng() % 8 == 0) {
      text = out[rng() % out.size()].text;
    } else {
      for (std::size_t t = len(rng); t > 0; --t) text += "t" + std::to_string(word(rng)) + " ";
    }
    out.push_back({"doc" + std::to_string(1000 + d), "", text, {}});
  }
  return Corpus(std::move(out));
}

InvertedIndex index_of(const Corpus& c) { return InvertedIndex::build(c, compute_stats(c.documents())); }

}  // namespace

TEST(Index, PostingsAndNorms) {
  Corpus c({{"a", "", "a a b", {}}, {"b", "", "b c", {}}});
  const auto idx = index_of(c);
  ASSERT_EQ(idx.postings("a").size(), 1u);
  EXPECT_EQ(idx.postings("a")[0].tf, 2u);
  EXPECT_EQ(idx.postings("b").size(), 2u);
  EXPECT_EQ(idx.num_terms(), 3u);
  const double ia = 1.0 + std::log(2.0), ib = 1.0;
  EXPECT_DOUBLE_EQ(idx.doc_norm(0), std::sqrt(4 * ia * ia + ib * ib));
}

TEST(Index, AllStopWordDocumentIsIndexed) {
  Corpus c({{"a", "", "the of and", {}}, {"b", "", "the cat", {}}});
  const auto idx = index_of(c);
  EXPECT_GT(idx.doc_norm(0), 0.0);
  WeightedQuery q;
  q.add("of", 1.0);
  const auto hits = idx.search(q);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].id, "a");
}

TEST(Index, PostingLengthsEqualDocFreq) {
  std::mt19937_64 rng(11);
  const auto c = random_corpus(rng, 100, 40, 15);
  const auto stats = compute_stats(c.documents());
  const auto idx = InvertedIndex::build(c, stats);
  for (const auto& w : stats.sorted_words()) EXPECT_EQ(idx.postings(w).size(), stats.doc_freq(w)) << w;
  EXPECT_EQ(idx.num_terms(), stats.sorted_words().size());
}

TEST(Index, SelfQueryScoresOne) {
  std::mt19937_64 rng(5);
  const auto c = random_corpus(rng, 50, 30, 20);
  const auto idx = index_of(c);
  for (std::size_t d = 0; d < c.size(); ++d) {
    const auto hits = idx.search(count_query(tokenize(c[d].text)), c.size());
    ASSERT_FALSE(hits.empty());
    EXPECT_NEAR(hits[0].score, 1.0, 1e-9);
    // Duplicates of d tie at 1.0 and are ordered by id.
    bool found = false;
    for (const auto& h : hits) {
      if (h.score < 1.0 - 1e-9) break;
      found |= h.doc == d;
    }
    EXPECT_TRUE(found);
  }
}

TEST(Index, MatchesDenseScorer) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_corpus(rng, 1 + rng() % 120, 5 + rng() % 60, 25);
    const auto idx = index_of(c);
    WeightedQuery q;
    for (int t = 0; t < 5; ++t) q.add("t" + std::to_string(rng() % 70), static_cast<double>(1 + rng() % 3));
    const auto got = idx.search(q, c.size());
    const auto want = oracle::dense_search(c, q);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].id, want[i].id);
      EXPECT_NEAR(got[i].score, want[i].score, 1e-9);
    }
  }
}

TEST(Index, TopKAndExclude) {
  std::mt19937_64 rng(23);
  const auto c = random_corpus(rng, 60, 10, 10);
  const auto idx = index_of(c);
  WeightedQuery q;
  q.add("t1", 1.0);
  q.add("t2", 2.0);
  const auto all = idx.search(q, c.size());
  const auto top = idx.search(q);
  ASSERT_EQ(top.size(), std::min<std::size_t>(kDefaultTopK, all.size()));
  for (std::size_t i = 0; i < top.size(); ++i) EXPECT_EQ(top[i], all[i]);
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_GE(all[i - 1].score, all[i].score);

  const std::vector<std::size_t> ex{all[0].doc};
  const auto rest = idx.search(q, c.size(), ex);
  ASSERT_EQ(rest.size(), all.size() - 1);
  EXPECT_EQ(rest[0], all[1]);
}

TEST(Index, UnsearchableQueries) {
  Corpus c({{"a", "", "x y", {}}});
  const auto idx = index_of(c);
  EXPECT_TRUE(idx.search(WeightedQuery{}).empty());
  WeightedQuery unknown;
  unknown.add("nope", 1.0);
  EXPECT_TRUE(idx.search(unknown).empty());
  WeightedQuery zero;
  zero.add("x", 0.0);
  EXPECT_FALSE(zero.searchable());
  EXPECT_TRUE(idx.search(zero).empty());
  EXPECT_THROW(idx.search(count_query(tokenize("x")), 0), Error);
}

TEST(Index, EmptyCorpusRejected) {
  try {
    index_of(Corpus{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

// Adding a term found only in d can lower d's cosine (the query norm grows),
// but d never loses rank: every other score shrinks by the same factor while
// d also gains a positive dot-product term.
TEST(Index, ExclusiveTermNeverLowersRank) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    auto base = random_corpus(rng, 30, 12, 12);
    std::vector<Document> docs(base.begin(), base.end());
    const std::size_t d = rng() % docs.size();
    docs[d].text += " onlyhere";
    const Corpus c(std::move(docs));
    const auto idx = index_of(c);
    WeightedQuery q;
    for (int t = 0; t < 3; ++t) q.add("t" + std::to_string(rng() % 12), 1.0);
    auto rank_of = [&](const SearchResult& r) {
      for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].doc == d) return i;
      return r.size() + c.size();
    };
    const auto before = rank_of(idx.search(q, c.size()));
    q.add("onlyhere", 0.5 + static_cast<double>(rng() % 4));
    const auto after = rank_of(idx.search(q, c.size()));
    EXPECT_LE(after, before);
  }
}

TEST(Index, SaveLoadRoundTrip) {
  std::mt19937_64 rng(31);
  const auto c = random_corpus(rng, 40, 20, 10);
  const auto idx = index_of(c);
  std::stringstream ss;
  idx.save(ss);
  EXPECT_EQ(ss.str().rfind("pir-index 1\n", 0), 0u);
  const auto back = InvertedIndex::load(ss);
  WeightedQuery q;
  q.add("t3", 1.0);
  q.add("t7", 2.0);
  EXPECT_EQ(back.search(q, 40), idx.search(q, 40));
  for (std::size_t d = 0; d < c.size(); ++d) EXPECT_EQ(back.doc_norm(d), idx.doc_norm(d));
}

TEST(Index, Deterministic) {
  std::mt19937_64 a(41), b(41);
  const auto c1 = random_corpus(a, 50, 20, 10), c2 = random_corpus(b, 50, 20, 10);
  std::stringstream s1, s2;
  index_of(c1).save(s1);
  index_of(c2).save(s2);
  EXPECT_EQ(s1.str(), s2.str());
}
