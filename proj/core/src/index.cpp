#include "pir/index.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pir/error.hpp"
#include "pir/text.hpp"

namespace pir {

bool WeightedQuery::searchable() const {
  return std::any_of(terms.begin(), terms.end(), [](const auto& kv) { return kv.second > 0.0; });
}

WeightedQuery count_query(std::span<const std::string> words) {
  WeightedQuery q;
  for (const auto& w : words) q.add(w, 1.0);
  return q;
}

InvertedIndex InvertedIndex::build(const Corpus& corpus, const CorpusStats& stats) {
  if (corpus.empty()) throw Error(ErrorCode::kInvalidInput, "cannot index an empty corpus");
  if (stats.num_docs() != corpus.size()) {
    throw Error(ErrorCode::kInvalidInput, "corpus statistics were computed over a different collection");
  }

  // word -> postings, kept ordered so term ids are lexicographic.
  std::map<std::string, std::vector<Posting>> by_word;
  std::vector<std::string> doc_ids;
  doc_ids.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    doc_ids.push_back(corpus[d].id);
    std::map<std::string, std::uint32_t> tf;
    for (auto& tok : tokenize(corpus[d].text)) ++tf[std::move(tok)];
    for (auto& [word, count] : tf) {
      if (stats.doc_freq(word) == 0) continue;
      by_word[word].push_back({static_cast<std::uint32_t>(d), count});
    }
  }
  std::vector<std::string> terms;
  std::vector<std::vector<Posting>> postings;
  terms.reserve(by_word.size());
  postings.reserve(by_word.size());
  for (auto& [word, list] : by_word) {
    terms.push_back(word);
    postings.push_back(std::move(list));
  }
  return from_postings(std::move(doc_ids), std::move(terms), std::move(postings));
}

double index_idf(double num_docs, std::size_t doc_freq) {
  return 1.0 + std::log(num_docs / static_cast<double>(doc_freq));
}

InvertedIndex InvertedIndex::from_postings(std::vector<std::string> doc_ids, std::vector<std::string> terms,
                                           std::vector<std::vector<Posting>> postings) {
  InvertedIndex index;
  index.doc_ids_ = std::move(doc_ids);
  index.terms_ = std::move(terms);
  index.postings_ = std::move(postings);
  const auto n = static_cast<double>(index.doc_ids_.size());
  index.idf_.resize(index.terms_.size());
  index.doc_norm_.assign(index.doc_ids_.size(), 0.0);
  index.term_ids_.reserve(index.terms_.size());
  for (std::size_t t = 0; t < index.terms_.size(); ++t) {
    index.term_ids_.emplace(index.terms_[t], t);
    index.idf_[t] = index_idf(n, index.postings_[t].size());
    // Terms are visited lexicographically, so every document's squared norm
    // is accumulated in a fixed order.
    for (const auto& p : index.postings_[t]) {
      const double w = static_cast<double>(p.tf) * index.idf_[t];
      index.doc_norm_[p.doc] += w * w;
    }
  }
  for (auto& norm : index.doc_norm_) norm = std::sqrt(norm);
  return index;
}

std::size_t InvertedIndex::term_id(std::string_view word) const {
  auto it = term_ids_.find(std::string(word));
  return it == term_ids_.end() ? std::numeric_limits<std::size_t>::max() : it->second;
}

double InvertedIndex::idf(std::string_view word) const {
  const auto t = term_id(word);
  return t < idf_.size() ? idf_[t] : 0.0;
}

std::span<const Posting> InvertedIndex::postings(std::string_view word) const {
  const auto t = term_id(word);
  if (t >= postings_.size()) return {};
  return postings_[t];
}

SearchResult InvertedIndex::search(const WeightedQuery& query, std::size_t top_k,
                                   std::span<const std::size_t> exclude) const {
  if (top_k == 0) throw Error(ErrorCode::kInvalidParameter, "top_k must be at least 1");

  struct Resolved {
    std::size_t term;
    double weight;
  };
  std::vector<Resolved> resolved;
  double q_norm_sq = 0.0;
  for (const auto& [word, weight] : query.terms) {
    if (!(weight > 0.0)) continue;
    const auto t = term_id(word);
    if (t >= terms_.size()) continue;
    const double q = weight * idf_[t];
    resolved.push_back({t, q});
    q_norm_sq += q * q;
  }
  if (resolved.empty() || !(q_norm_sq > 0.0)) return {};
  const double q_norm = std::sqrt(q_norm_sq);

  std::vector<double> acc(doc_ids_.size(), 0.0);
  std::vector<char> touched(doc_ids_.size(), 0);
  std::vector<std::size_t> candidates;
  for (const auto& r : resolved) {
    for (const auto& p : postings_[r.term]) {
      acc[p.doc] += r.weight * (static_cast<double>(p.tf) * idf_[r.term]);
      if (!touched[p.doc]) {
        touched[p.doc] = 1;
        candidates.push_back(p.doc);
      }
    }
  }
  for (auto d : exclude) {
    if (d < touched.size()) touched[d] = 0;
  }
  std::vector<SearchHit> hits;
  hits.reserve(candidates.size());
  for (auto d : candidates) {
    if (!touched[d] || !(doc_norm_[d] > 0.0)) continue;
    hits.push_back({d, doc_ids_[d], acc[d] / (q_norm * doc_norm_[d])});
  }
  const auto better = [](const SearchHit& a, const SearchHit& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  };
  const auto k = std::min(top_k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(), better);
  hits.resize(k);
  return hits;
}

void InvertedIndex::save(std::ostream& out) const {
  out << "pir-index 1\n";
  out << "num_docs\t" << doc_ids_.size() << '\n';
  for (const auto& id : doc_ids_) out << id << '\n';
  out << "terms\t" << terms_.size() << '\n';
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    out << terms_[t] << '\t' << postings_[t].size();
    for (const auto& p : postings_[t]) out << ' ' << p.doc << ':' << p.tf;
    out << '\n';
  }
}

InvertedIndex InvertedIndex::load(std::istream& in) {
  const auto fail = [](const std::string& what) { return Error(ErrorCode::kInvalidInput, "index file: " + what); };
  std::string line;
  if (!std::getline(in, line) || line != "pir-index 1") throw fail("missing or unsupported header");

  const auto read_count = [&](std::string_view key) {
    if (!std::getline(in, line) || line.rfind(std::string(key) + '\t', 0) != 0) {
      throw fail("expected '" + std::string(key) + "'");
    }
    return static_cast<std::size_t>(std::stoull(line.substr(key.size() + 1)));
  };

  const auto num_docs = read_count("num_docs");
  std::vector<std::string> doc_ids(num_docs);
  for (auto& id : doc_ids) {
    if (!std::getline(in, id) || id.empty()) throw fail("truncated document list");
  }
  const auto num_terms = read_count("terms");
  std::vector<std::string> terms(num_terms);
  std::vector<std::vector<Posting>> postings(num_terms);
  for (std::size_t t = 0; t < num_terms; ++t) {
    if (!std::getline(in, line)) throw fail("truncated postings");
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw fail("malformed term line");
    terms[t] = line.substr(0, tab);
    if (t > 0 && !(terms[t - 1] < terms[t])) throw fail("terms not sorted");
    std::istringstream ss(line.substr(tab + 1));
    std::size_t count = 0;
    ss >> count;
    postings[t].reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint32_t doc = 0, tf = 0;
      char colon = 0;
      if (!(ss >> doc >> colon >> tf) || colon != ':' || doc >= num_docs || tf == 0) throw fail("bad posting");
      if (!postings[t].empty() && postings[t].back().doc >= doc) throw fail("postings not sorted");
      postings[t].push_back({doc, tf});
    }
    if (postings[t].empty()) throw fail("term without postings");
  }
  return from_postings(std::move(doc_ids), std::move(terms), std::move(postings));
}

}  // namespace pir
