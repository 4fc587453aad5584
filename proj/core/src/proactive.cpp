#include "pir/proactive.hpp"

#include <algorithm>
#include <exception>
#include <unordered_set>

#include "pir/error.hpp"

namespace pir {

std::string_view to_string(ExpanderKind kind) {
  switch (kind) {
    case ExpanderKind::kBaseline: return "baseline";
    case ExpanderKind::kLmBeam: return "lm-beam";
    case ExpanderKind::kIntentLinRel: return "intent-linrel";
  }
  return "unknown";
}

std::optional<ExpanderKind> parse_expander(std::string_view name) {
  if (name == "baseline") return ExpanderKind::kBaseline;
  if (name == "lm" || name == "lm-beam") return ExpanderKind::kLmBeam;
  if (name == "intent" || name == "intent-linrel") return ExpanderKind::kIntentLinRel;
  return std::nullopt;
}

ContextWindow::ContextWindow(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::kInvalidParameter, "context window size must be at least 1");
}

void ContextWindow::push(std::string word) {
  words_.push_back(std::move(word));
  if (words_.size() > n_) words_.pop_front();
}

BeamExpander::BeamExpander(const NextWordModel& model, const CorpusStats& stats, BeamExpanderOptions options,
                           const StopWords& stopwords)
    : model_(&model), stats_(&stats), options_(options), stopwords_(&stopwords) {}

BeamParams BeamExpander::params(std::string_view prefix) const {
  BeamParams p;
  p.branching = options_.branching;
  p.width = options_.width;
  p.depth = options_.depth;
  if (!prefix.empty()) {
    p.first_level_filter = [prefix = std::string(prefix)](std::string_view w) { return w.starts_with(prefix); };
  }
  return p;
}

std::vector<std::vector<std::string>> BeamExpander::levels(const BeamTree& tree) const {
  std::vector<std::vector<std::string>> out;
  for (const auto& level : tree.levels) {
    std::vector<std::string> words;
    std::unordered_set<WordId> seen;
    for (const auto& node : level) {
      if (node.word == Vocabulary::kUnk || node.word == Vocabulary::kEos) continue;
      if (seen.insert(node.word).second) words.push_back(model_->vocab().word(node.word));
    }
    out.push_back(std::move(words));
  }
  return out;
}

Expansion BeamExpander::expand(std::span<const std::string> window, std::size_t n_exp) {
  const auto tree = beam_expand(*model_, window, params({}));
  Expansion result;
  for (auto& term : select_expansion(score_candidates(tree, model_->vocab(), *stats_, *stopwords_, window), n_exp)) {
    result.words.push_back({std::move(term.word), term.score});
  }
  result.predictions = levels(tree);
  return result;
}

std::vector<std::vector<std::string>> BeamExpander::predict(std::span<const std::string> window,
                                                            std::string_view prefix) const {
  if (window.empty()) return {};
  return levels(beam_expand(*model_, window, params(prefix)));
}

IntentExpander::IntentExpander(const LinRelModel& model, IntentExpanderOptions options, const StopWords& stopwords)
    : model_(&model), options_(options), stopwords_(&stopwords), state_(model.matrix().rows(), options.tau) {}

Expansion IntentExpander::expand(std::span<const std::string> window, std::size_t n_exp) {
  update_relevance(state_, model_->matrix(), window);
  const auto solution = model_->solve(state_.y());
  Expansion result;
  result.words = linrel_expand(solution, model_->matrix(), window, n_exp, options_.c, *stopwords_);
  return result;
}

ProactiveQuery make_query(std::span<const std::string> window, Expander* expander, const QueryOptions& options) {
  if (window.empty()) throw Error(ErrorCode::kInvalidParameter, "proactive query needs a nonempty window");
  ProactiveQuery out;
  out.query = count_query(window);
  if (expander == nullptr || expander->kind() == ExpanderKind::kBaseline) return out;

  Expansion expansion;
  try {
    expansion = expander->expand(window, options.n_exp);
  } catch (const std::exception& e) {
    out.fallback = true;
    out.warning = std::string(to_string(expander->kind())) + " expansion failed, using baseline query: " + e.what();
    return out;
  }
  double max_score = 0.0;
  for (const auto& w : expansion.words) max_score = std::max(max_score, w.score);
  for (const auto& w : expansion.words) {
    const double weight = options.score_weighting ? (max_score > 0.0 ? w.score / max_score : 0.0) : 1.0;
    // Expanders never return window words; keep the window weight if one slips through.
    out.query.terms.emplace(w.word, weight);
  }
  out.expansion = std::move(expansion.words);
  out.predictions = std::move(expansion.predictions);
  return out;
}

}  // namespace pir
