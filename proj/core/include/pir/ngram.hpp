#pragma once

#include <map>
#include <vector>

#include "pir/lm.hpp"

namespace pir {

struct NGramConfig {
  std::size_t order = 3;
  double alpha = 0.1;
};

// Add-alpha smoothed backoff model. A history is scored with its longest
// suffix (up to order - 1 words) that was seen as a context in training;
// the chain always ends at the unigram table.
class NGramModel final : public NextWordModel {
 public:
  struct ContextCounts {
    std::uint64_t total = 0;
    std::vector<std::pair<WordId, std::uint64_t>> next;  // sorted by word id
  };

  // Throws kInvalidInput on an empty corpus, kInvalidParameter on order 0
  // or negative alpha.
  static NGramModel train(const Corpus& corpus, Vocabulary vocab, NGramConfig config = {});
  // Trains on explicit id streams, one per document.
  static NGramModel train(std::span<const std::vector<WordId>> streams, Vocabulary vocab, NGramConfig config = {});

  std::string_view kind() const override { return "ngram"; }
  const Vocabulary& vocab() const override { return vocab_; }
  std::unique_ptr<ModelSession> new_session() const override;
  void save(std::ostream& out) const override;
  static NGramModel load(std::istream& in, Vocabulary vocab);

  const NGramConfig& config() const { return config_; }
  // Distribution for an explicit history (only the last order - 1 words matter).
  std::vector<double> distribution(std::span<const WordId> history) const;
  const ContextCounts* counts(std::span<const WordId> context) const;

 private:
  NGramModel(Vocabulary vocab, NGramConfig config) : vocab_(std::move(vocab)), config_(config) {}

  Vocabulary vocab_;
  NGramConfig config_;
  std::map<std::vector<WordId>, ContextCounts> tables_;
};

}  // namespace pir
