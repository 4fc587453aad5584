#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pir/corpus.hpp"

namespace pir {

// Mutable prediction state over one history. A session must only be driven
// by one caller at a time; distinct sessions of one model are independent.
class ModelSession {
 public:
  virtual ~ModelSession() = default;

  virtual void reset() = 0;
  virtual void feed(WordId word) = 0;
  // Distribution over the vocabulary for the word following everything fed
  // since the last reset. Sums to 1; entries are nonnegative.
  virtual std::vector<double> next_distribution() const = 0;
  virtual std::unique_ptr<ModelSession> clone() const = 0;
};

// Next-word predictor f: an immutable trained model that hands out sessions.
class NextWordModel {
 public:
  virtual ~NextWordModel() = default;

  virtual std::string_view kind() const = 0;
  virtual const Vocabulary& vocab() const = 0;
  virtual std::unique_ptr<ModelSession> new_session() const = 0;
  // Writes the kind-specific body; see save_model for the full container.
  virtual void save(std::ostream& out) const = 0;
};

// Feeds surface words, mapping out-of-vocabulary words to UNK.
void feed_words(ModelSession& session, const Vocabulary& vocab, std::span<const std::string> words);

struct Candidate {
  WordId word;
  double prob;

  bool operator==(const Candidate&) const = default;
};

// The b most probable words, ties broken lexicographically; probabilities are
// the raw distribution values. b is clamped to the number of admissible words.
// `admit`, when set, restricts the candidate set.
std::vector<Candidate> top_candidates(std::span<const double> dist, const Vocabulary& vocab, std::size_t b,
                                      const std::function<bool(WordId)>& admit = {});

// Training stream: every document's sentences in order, each followed by EOS.
// Out-of-vocabulary tokens become UNK.
std::vector<WordId> token_stream(const Document& doc, const Vocabulary& vocab);
std::vector<WordId> token_stream(const Corpus& corpus, const Vocabulary& vocab);

// Model container:
//   pir-model 1
//   type<TAB>ngram|lstm
//   <vocabulary file, see write_vocab>
//   <kind-specific hyperparameters and parameters>
void save_model(std::ostream& out, const NextWordModel& model);
std::unique_ptr<NextWordModel> load_model(std::istream& in);
std::unique_ptr<NextWordModel> load_model_file(const std::string& path);
void save_model_file(const NextWordModel& model, const std::string& path);

}  // namespace pir
