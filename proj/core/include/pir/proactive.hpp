#pragma once

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pir/beam.hpp"
#include "pir/corpus.hpp"
#include "pir/index.hpp"
#include "pir/linrel.hpp"
#include "pir/lm.hpp"
#include "pir/text.hpp"

namespace pir {

enum class ExpanderKind { kBaseline, kLmBeam, kIntentLinRel };

std::string_view to_string(ExpanderKind kind);
// Accepts "baseline", "lm", "lm-beam", "intent", "intent-linrel".
std::optional<ExpanderKind> parse_expander(std::string_view name);

// The n most recent input words, oldest first.
class ContextWindow {
 public:
  explicit ContextWindow(std::size_t n);

  void push(std::string word);
  void clear() { words_.clear(); }
  std::size_t capacity() const { return n_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  std::vector<std::string> words() const { return {words_.begin(), words_.end()}; }

 private:
  std::size_t n_;
  std::deque<std::string> words_;
};

struct Expansion {
  std::vector<ScoredWord> words;                     // best first
  std::vector<std::vector<std::string>> predictions;  // per tree level, for display
};

// Query expander. Implementations may keep per-writing-session state and must
// be driven by one caller at a time.
class Expander {
 public:
  virtual ~Expander() = default;
  virtual ExpanderKind kind() const = 0;
  virtual Expansion expand(std::span<const std::string> window, std::size_t n_exp) = 0;
  virtual void reset() {}
};

struct BeamExpanderOptions {
  std::size_t branching = 10;
  std::size_t width = 80;
  std::size_t depth = 3;
};

// LM beam search + idf * p scoring of the surviving tree.
class BeamExpander final : public Expander {
 public:
  BeamExpander(const NextWordModel& model, const CorpusStats& stats, BeamExpanderOptions options = {},
               const StopWords& stopwords = StopWords::english());

  ExpanderKind kind() const override { return ExpanderKind::kLmBeam; }
  Expansion expand(std::span<const std::string> window, std::size_t n_exp) override;

  // Continuations for display only. With a nonempty prefix, level-1 words are
  // restricted to completions of that prefix.
  std::vector<std::vector<std::string>> predict(std::span<const std::string> window, std::string_view prefix = {}) const;

 private:
  BeamParams params(std::string_view prefix) const;
  std::vector<std::vector<std::string>> levels(const BeamTree& tree) const;

  const NextWordModel* model_;
  const CorpusStats* stats_;
  BeamExpanderOptions options_;
  const StopWords* stopwords_;
};

struct IntentExpanderOptions {
  double c = 1.0;
  double tau = 0.1;
};

// LinRel upper-confidence-bound expansion. Every expand() call is one input
// window and ticks the relevance decay.
class IntentExpander final : public Expander {
 public:
  IntentExpander(const LinRelModel& model, IntentExpanderOptions options = {},
                 const StopWords& stopwords = StopWords::english());

  ExpanderKind kind() const override { return ExpanderKind::kIntentLinRel; }
  Expansion expand(std::span<const std::string> window, std::size_t n_exp) override;
  void reset() override { state_.reset(); }

  const RelevanceState& state() const { return state_; }

 private:
  const LinRelModel* model_;
  IntentExpanderOptions options_;
  const StopWords* stopwords_;
  RelevanceState state_;
};

struct QueryOptions {
  std::size_t n_exp = 10;
  // Off: every expansion word gets weight 1. On: weight = score / max score.
  bool score_weighting = false;
};

struct ProactiveQuery {
  WeightedQuery query;
  std::vector<ScoredWord> expansion;
  std::vector<std::vector<std::string>> predictions;
  bool fallback = false;  // expander failed; query is the baseline query
  std::string warning;
};

// Window words weighted by their in-window count plus expansion words. A null
// expander gives the baseline query. Expander failures fall back to the
// baseline query with a warning instead of throwing.
ProactiveQuery make_query(std::span<const std::string> window, Expander* expander, const QueryOptions& options = {});

inline SearchResult recommend(const InvertedIndex& index, const WeightedQuery& query, std::size_t top_k = kDefaultTopK,
                              std::span<const std::size_t> exclude = {}) {
  return index.search(query, top_k, exclude);
}

}  // namespace pir
