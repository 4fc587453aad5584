#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pir/corpus.hpp"

namespace pir {

// Term -> nonnegative weight. Words are looked up verbatim (already tokenized).
struct WeightedQuery {
  std::map<std::string, double> terms;

  void add(std::string_view word, double weight) { terms[std::string(word)] += weight; }
  bool searchable() const;
  bool operator==(const WeightedQuery&) const = default;
};

// Query weighted by raw in-text counts of `words`.
WeightedQuery count_query(std::span<const std::string> words);

struct SearchHit {
  std::size_t doc = 0;  // position in the indexed corpus
  std::string id;
  double score = 0.0;

  bool operator==(const SearchHit&) const = default;
};

using SearchResult = std::vector<SearchHit>;

inline constexpr std::size_t kDefaultTopK = 10;

struct Posting {
  std::uint32_t doc;
  std::uint32_t tf;
};

// Ranking idf, 1 + ln(N / N_w). Deliberately not the raw ratio used to score
// expansion candidates: under the raw ratio a word seen in one document
// outweighs a common topical word by (N/N_w)^2 in the cosine, and the
// leading 1 keeps every document vector nonzero.
double index_idf(double num_docs, std::size_t doc_freq);

// Inverted index over tf*idf document vectors with cosine ranking. Immutable
// once built; search() is const and safe to call concurrently.
class InvertedIndex {
 public:
  InvertedIndex() = default;

  // Throws kInvalidInput on an empty corpus.
  static InvertedIndex build(const Corpus& corpus, const CorpusStats& stats);

  // score(d) = (q . v_d) / (|q| |v_d|) where q_t = weight_t * idf_t and
  // v_dt = tf_dt * idf_t. Query terms unknown to the index are ignored.
  // Ties are broken by ascending document id. Documents listed in `exclude`
  // (corpus positions) are never returned. An unsearchable query yields an
  // empty result. Throws kInvalidParameter when top_k == 0.
  SearchResult search(const WeightedQuery& query, std::size_t top_k = kDefaultTopK,
                      std::span<const std::size_t> exclude = {}) const;

  std::size_t num_docs() const { return doc_ids_.size(); }
  std::size_t num_terms() const { return terms_.size(); }
  const std::string& doc_id(std::size_t doc) const { return doc_ids_.at(doc); }
  double doc_norm(std::size_t doc) const { return doc_norm_.at(doc); }
  double idf(std::string_view word) const;
  std::span<const Posting> postings(std::string_view word) const;
  // Terms in lexicographic order.
  std::span<const std::string> terms() const { return terms_; }

  void save(std::ostream& out) const;
  static InvertedIndex load(std::istream& in);

 private:
  static InvertedIndex from_postings(std::vector<std::string> doc_ids, std::vector<std::string> terms,
                                     std::vector<std::vector<Posting>> postings);
  std::size_t term_id(std::string_view word) const;

  std::vector<std::string> doc_ids_;
  std::vector<double> doc_norm_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::vector<std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::size_t> term_ids_;
};

}  // namespace pir
