#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pir {

struct Document {
  std::string id;
  std::string title;
  std::string text;
  std::vector<std::string> topics;  // sorted, unique

  bool operator==(const Document&) const = default;
};

// Owns the documents of one collection and enforces unique nonempty ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> docs);

  std::size_t size() const { return docs_.size(); }
  bool empty() const { return docs_.empty(); }
  const Document& operator[](std::size_t i) const { return docs_[i]; }
  std::span<const Document> documents() const { return docs_; }
  auto begin() const { return docs_.begin(); }
  auto end() const { return docs_.end(); }

  // Position of a document id, or npos.
  std::size_t find(std::string_view id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

using WordId = std::uint32_t;

class Vocabulary {
 public:
  static constexpr WordId kUnk = 0;
  static constexpr WordId kEos = 1;
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kEosToken = "</s>";

  // Vocabulary holding only UNK and EOS.
  Vocabulary();
  // Reserved tokens are prepended; `words` must not contain them or repeat.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  // Out-of-vocabulary words map to kUnk.
  WordId id(std::string_view word) const;
  bool contains(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::span<const std::string> words() const { return words_; }

  bool operator==(const Vocabulary& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

// Keeps the max_size - 2 most frequent tokens (ties lexicographic) plus UNK
// and EOS. Throws kInvalidParameter for max_size < 3, kInvalidInput for an
// empty corpus.
Vocabulary build_vocab(std::span<const Document> docs, std::size_t max_size);

// Document frequencies and raw-ratio idf, idf(w) = N / N_w.
class CorpusStats {
 public:
  CorpusStats() = default;
  CorpusStats(std::size_t num_docs, std::unordered_map<std::string, std::size_t> doc_freq);

  std::size_t num_docs() const { return num_docs_; }
  // Zero for words that never occur.
  std::size_t doc_freq(std::string_view word) const;
  // Zero for words that never occur.
  double idf(std::string_view word) const;
  const std::unordered_map<std::string, std::size_t>& doc_freqs() const { return doc_freq_; }
  // All words with nonzero document frequency, lexicographically sorted.
  std::vector<std::string> sorted_words() const;

 private:
  std::size_t num_docs_ = 0;
  std::unordered_map<std::string, std::size_t> doc_freq_;
};

// Counts distinct documents per token. Every token is covered, independent of
// any vocabulary cap applied to the language models.
CorpusStats compute_stats(std::span<const Document> docs);

}  // namespace pir
