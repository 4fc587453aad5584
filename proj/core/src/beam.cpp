#include "pir/beam.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "pir/error.hpp"

namespace pir {

std::vector<WordId> BeamTree::path(std::size_t level, std::size_t index) const {
  std::vector<WordId> words(level);
  for (std::size_t j = level; j >= 1; --j) {
    const auto& node = levels.at(j - 1).at(index);
    words[j - 1] = node.word;
    index = node.parent;
  }
  return words;
}

BeamTree beam_expand(const NextWordModel& model, std::span<const std::string> context, const BeamParams& params) {
  if (context.empty()) throw Error(ErrorCode::kInvalidParameter, "beam expansion needs a nonempty context");
  if (params.branching == 0 || params.width == 0) {
    throw Error(ErrorCode::kInvalidParameter, "branching and beam width must be at least 1");
  }
  const auto& vocab = model.vocab();
  BeamTree tree;
  tree.root = context.back();
  tree.branching = params.branching;
  tree.width = params.width;
  tree.depth = params.depth;
  if (params.depth == 0) return tree;

  auto root_session = model.new_session();
  root_session->reset();
  feed_words(*root_session, vocab, context);

  struct Pending {
    BeamNode node;
    const ModelSession* parent_session;
  };
  const auto better = [&vocab](const Pending& a, const Pending& b) {
    if (a.node.path_score != b.node.path_score) return a.node.path_score > b.node.path_score;
    if (a.node.prob != b.node.prob) return a.node.prob > b.node.prob;
    if (a.node.word != b.node.word) return vocab.word(a.node.word) < vocab.word(b.node.word);
    return a.node.parent < b.node.parent;
  };

  // Sessions positioned after each survivor of the previous level.
  std::vector<std::unique_ptr<ModelSession>> frontier;
  frontier.push_back(std::move(root_session));
  std::vector<double> frontier_scores{1.0};

  for (std::size_t level = 1; level <= params.depth; ++level) {
    std::vector<Pending> pending;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const auto dist = frontier[i]->next_distribution();
      std::function<bool(WordId)> admit = [&](WordId w) {
        if (w == Vocabulary::kUnk || !(dist[w] > 0.0)) return false;
        return level != 1 || !params.first_level_filter || params.first_level_filter(vocab.word(w));
      };
      for (const auto& cand : top_candidates(dist, vocab, params.branching, admit)) {
        BeamNode node;
        node.word = cand.word;
        node.level = level;
        node.prob = cand.prob;
        node.path_score = frontier_scores[i] * cand.prob;
        node.parent = level == 1 ? BeamNode::kRoot : i;
        pending.push_back({node, frontier[i].get()});
      }
    }
    tree.candidates.push_back(pending.size());
    const auto keep = std::min(params.width, pending.size());
    std::partial_sort(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(keep), pending.end(), better);
    pending.resize(keep);

    std::vector<BeamNode> survivors;
    survivors.reserve(keep);
    for (const auto& p : pending) survivors.push_back(p.node);

    if (level < params.depth) {
      std::vector<std::unique_ptr<ModelSession>> next_frontier;
      std::vector<double> next_scores;
      next_frontier.reserve(keep);
      for (const auto& p : pending) {
        auto session = p.parent_session->clone();
        session->feed(p.node.word);
        next_frontier.push_back(std::move(session));
        next_scores.push_back(p.node.path_score);
      }
      frontier = std::move(next_frontier);
      frontier_scores = std::move(next_scores);
    }
    tree.levels.push_back(std::move(survivors));
    if (keep == 0) break;
  }
  return tree;
}

std::vector<ExpansionTerm> score_candidates(const BeamTree& tree, const Vocabulary& vocab, const CorpusStats& stats,
                                            const StopWords& stopwords, std::span<const std::string> context) {
  const std::unordered_set<std::string_view> in_context(context.begin(), context.end());
  std::unordered_map<WordId, ExpansionTerm> best;
  for (std::size_t j = 0; j < tree.levels.size(); ++j) {
    for (std::size_t i = 0; i < tree.levels[j].size(); ++i) {
      const auto& node = tree.levels[j][i];
      if (node.word == Vocabulary::kUnk || node.word == Vocabulary::kEos) continue;
      const auto& word = vocab.word(node.word);
      if (stopwords.contains(word) || in_context.count(word) != 0) continue;
      const double idf = stats.idf(word);
      if (!(idf > 0.0)) continue;
      const double score = idf * node.prob;
      auto it = best.find(node.word);
      if (it != best.end() && !(score > it->second.score)) continue;

      ExpansionTerm term;
      term.word = word;
      term.score = score;
      term.idf = idf;
      term.prob = node.prob;
      term.path_score = node.path_score;
      term.level = node.level;
      term.path.push_back(tree.root);
      for (auto w : tree.path(j + 1, i)) term.path.push_back(vocab.word(w));
      best.insert_or_assign(node.word, std::move(term));
    }
  }
  std::vector<ExpansionTerm> terms;
  terms.reserve(best.size());
  for (auto& [_, t] : best) terms.push_back(std::move(t));
  std::sort(terms.begin(), terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  });
  return terms;
}

std::vector<ExpansionTerm> select_expansion(std::vector<ExpansionTerm> terms, std::size_t n_exp) {
  std::sort(terms.begin(), terms.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  });
  if (terms.size() > n_exp) terms.resize(n_exp);
  return terms;
}

}  // namespace pir
