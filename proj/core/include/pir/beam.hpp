#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pir/corpus.hpp"
#include "pir/lm.hpp"
#include "pir/text.hpp"

namespace pir {

struct BeamParams {
  std::size_t branching = 10;  // b: successors considered per node
  std::size_t width = 80;      // k: survivors per level
  std::size_t depth = 3;       // d: predicted words per path
  // Optional restriction on level-1 words (e.g. prefix completion).
  std::function<bool(std::string_view)> first_level_filter;
};

struct BeamNode {
  static constexpr std::size_t kRoot = std::numeric_limits<std::size_t>::max();

  WordId word = Vocabulary::kUnk;
  std::size_t level = 0;           // 1-based
  double prob = 0.0;               // p(w) from the model given its path
  double path_score = 0.0;         // R: product of p along the path (root excluded)
  std::size_t parent = kRoot;      // index into the previous level
};

// Pruned prediction tree. levels[j - 1] holds the survivors of level j,
// ordered best first.
struct BeamTree {
  std::string root;                         // latest context word
  std::vector<std::vector<BeamNode>> levels;
  std::vector<std::size_t> candidates;      // per level, count before pruning
  std::size_t branching = 0;
  std::size_t width = 0;
  std::size_t depth = 0;

  // Predicted words from level 1 down to levels[level - 1][index] (root excluded).
  std::vector<WordId> path(std::size_t level, std::size_t index) const;
};

// Resets a session of `model`, feeds the whole context, and grows the tree
// level by level: every survivor contributes its top-b successors (UNK and
// zero-probability words excluded), then only the k candidates with highest
// R survive (ties: higher p, then lexicographic word, then parent order).
// Throws kInvalidParameter for an empty context or b, k == 0; depth 0 gives
// an empty tree.
BeamTree beam_expand(const NextWordModel& model, std::span<const std::string> context, const BeamParams& params);

struct ExpansionTerm {
  std::string word;
  double score = 0.0;  // idf * p
  double idf = 0.0;
  double prob = 0.0;
  double path_score = 0.0;
  std::size_t level = 0;
  std::vector<std::string> path;  // root first
};

// One term per distinct surviving word, scored idf(w) * p(w) and keeping the
// maximum-scoring occurrence. Stop words, reserved tokens, words with no
// document frequency and words of the context window are dropped. Output is
// ordered by score, ties lexicographic.
std::vector<ExpansionTerm> score_candidates(const BeamTree& tree, const Vocabulary& vocab, const CorpusStats& stats,
                                            const StopWords& stopwords, std::span<const std::string> context);

// Top n_exp terms by score, ties lexicographic.
std::vector<ExpansionTerm> select_expansion(std::vector<ExpansionTerm> terms, std::size_t n_exp);

}  // namespace pir
