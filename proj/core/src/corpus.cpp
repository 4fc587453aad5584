#include "pir/corpus.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "pir/error.hpp"
#include "pir/text.hpp"

namespace pir {

Corpus::Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
  by_id_.reserve(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    auto& doc = docs_[i];
    if (doc.id.empty()) {
      throw Error(ErrorCode::kInvalidInput, "document at position " + std::to_string(i) + " has an empty id");
    }
    std::sort(doc.topics.begin(), doc.topics.end());
    doc.topics.erase(std::unique(doc.topics.begin(), doc.topics.end()), doc.topics.end());
    if (!by_id_.emplace(doc.id, i).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate document id '" + doc.id + "'");
    }
  }
}

std::size_t Corpus::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? npos : it->second;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size() + 2);
  words_.emplace_back(kUnkToken);
  words_.emplace_back(kEosToken);
  for (auto& w : words) words_.push_back(std::move(w));
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<WordId>(i)).second) {
      throw Error(ErrorCode::kInvalidInput, "duplicate vocabulary entry '" + words_[i] + "'");
    }
  }
}

WordId Vocabulary::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnk : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

Vocabulary build_vocab(std::span<const Document> docs, std::size_t max_size) {
  if (max_size < 3) {
    throw Error(ErrorCode::kInvalidParameter, "vocabulary size must be at least 3");
  }
  if (docs.empty()) throw Error(ErrorCode::kInvalidInput, "cannot build a vocabulary from an empty corpus");

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (auto& tok : tokenize(doc.text)) ++counts[std::move(tok)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  const std::size_t keep = std::min(ranked.size(), max_size - 2);
  std::vector<std::string> words;
  words.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) words.push_back(std::move(ranked[i].first));
  return Vocabulary(std::move(words));
}

CorpusStats::CorpusStats(std::size_t num_docs, std::unordered_map<std::string, std::size_t> doc_freq)
    : num_docs_(num_docs), doc_freq_(std::move(doc_freq)) {
  for (const auto& [word, df] : doc_freq_) {
    if (df == 0 || df > num_docs_) {
      throw Error(ErrorCode::kInvalidInput, "document frequency of '" + word + "' outside [1, N]");
    }
  }
}

std::size_t CorpusStats::doc_freq(std::string_view word) const {
  auto it = doc_freq_.find(std::string(word));
  return it == doc_freq_.end() ? 0 : it->second;
}

double CorpusStats::idf(std::string_view word) const {
  const auto df = doc_freq(word);
  return df == 0 ? 0.0 : static_cast<double>(num_docs_) / static_cast<double>(df);
}

std::vector<std::string> CorpusStats::sorted_words() const {
  std::vector<std::string> words;
  words.reserve(doc_freq_.size());
  for (const auto& [w, _] : doc_freq_) words.push_back(w);
  std::sort(words.begin(), words.end());
  return words;
}

CorpusStats compute_stats(std::span<const Document> docs) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : docs) {
    auto tokens = tokenize(doc.text);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& tok : tokens) ++df[std::move(tok)];
  }
  return CorpusStats(docs.size(), std::move(df));
}

}  // namespace pir
