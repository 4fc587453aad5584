#include "pir/service.hpp"

#include "pir/error.hpp"
#include "pir/text.hpp"

namespace pir {

struct RecommendationService::Session {
  std::mutex mutex;
  ExpanderKind kind = ExpanderKind::kBaseline;
  ContextWindow buffer{1};
  std::size_t n_exp = 0;
  std::unique_ptr<Expander> expander;
  BeamExpander* beam = nullptr;  // view of `expander` for LM sessions
  std::vector<Recommendation> last;
  Clock::time_point last_used;
};

RecommendationService::RecommendationService(const Corpus& corpus, const InvertedIndex& index,
                                             const CorpusStats& stats, const NextWordModel* model,
                                             const LinRelModel* linrel, ServiceConfig config)
    : corpus_(&corpus), index_(&index), stats_(&stats), model_(model), linrel_(linrel), config_(config) {}

RecommendationService::~RecommendationService() = default;

std::string RecommendationService::create_session(ExpanderKind expander, const SessionParams& params) {
  auto session = std::make_shared<Session>();
  session->kind = expander;
  const auto window = params.window.value_or(config_.window);
  if (window == 0) throw Error(ErrorCode::kRejected, "window size must be at least 1");
  session->buffer = ContextWindow(window);
  session->n_exp = params.n_exp.value_or(config_.n_exp);

  switch (expander) {
    case ExpanderKind::kBaseline:
      break;
    case ExpanderKind::kLmBeam: {
      if (model_ == nullptr) throw Error(ErrorCode::kRejected, "lm-beam expander requested but no language model is loaded");
      BeamExpanderOptions beam = config_.beam;
      beam.branching = params.branching.value_or(beam.branching);
      beam.width = params.width.value_or(beam.width);
      beam.depth = params.depth.value_or(beam.depth);
      if (beam.branching == 0 || beam.width == 0) throw Error(ErrorCode::kRejected, "b and k must be at least 1");
      auto owned = std::make_unique<BeamExpander>(*model_, *stats_, beam);
      session->beam = owned.get();
      session->expander = std::move(owned);
      break;
    }
    case ExpanderKind::kIntentLinRel: {
      if (linrel_ == nullptr) throw Error(ErrorCode::kRejected, "intent-linrel expander requested but no intent model is loaded");
      IntentExpanderOptions intent = config_.intent;
      intent.c = params.c.value_or(intent.c);
      intent.tau = params.tau.value_or(intent.tau);
      if (!(intent.c >= 0.0) || !(intent.tau >= 0.0 && intent.tau <= 1.0)) {
        throw Error(ErrorCode::kRejected, "c must be >= 0 and tau in [0, 1]");
      }
      session->expander = std::make_unique<IntentExpander>(*linrel_, intent);
      break;
    }
  }
  session->last_used = Clock::now();

  std::lock_guard lock(mutex_);
  auto id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(session));
  return id;
}

std::shared_ptr<RecommendationService::Session> RecommendationService::find(std::string_view id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + std::string(id) + "'");
  return it->second;
}

std::vector<Recommendation> RecommendationService::to_recommendations(const SearchResult& hits) const {
  std::vector<Recommendation> recs;
  recs.reserve(hits.size());
  for (const auto& h : hits) {
    const auto& doc = (*corpus_)[h.doc];
    recs.push_back({doc.id, doc.title, h.score, "/documents/" + doc.id});
  }
  return recs;
}

ContextResponse RecommendationService::update_context(std::string_view session_id, std::string_view word,
                                                      bool completed) {
  auto session = find(session_id);
  std::lock_guard lock(session->mutex);
  session->last_used = Clock::now();
  const auto tokens = tokenize(word);

  ContextResponse response;
  if (completed) {
    for (const auto& t : tokens) session->buffer.push(t);
    if (!session->buffer.empty()) {
      const auto window = session->buffer.words();
      QueryOptions options;
      options.n_exp = session->n_exp;
      auto query = make_query(window, session->expander.get(), options);
      session->last = to_recommendations(index_->search(query.query, config_.top_k));
      response.fallback = query.fallback;
      response.warning = std::move(query.warning);
      response.predictions = std::move(query.predictions);
    }
  } else if (session->beam != nullptr && !session->buffer.empty()) {
    const std::string prefix = tokens.empty() ? std::string{} : tokens.back();
    try {
      response.predictions = session->beam->predict(session->buffer.words(), prefix);
    } catch (const std::exception& e) {
      response.fallback = true;
      response.warning = std::string("prediction failed: ") + e.what();
    }
  }
  response.recommendations = session->last;
  return response;
}

const Document& RecommendationService::get_document(std::string_view doc_id) const {
  const auto pos = corpus_->find(doc_id);
  if (pos == Corpus::npos) throw Error(ErrorCode::kNotFound, "unknown document '" + std::string(doc_id) + "'");
  return (*corpus_)[pos];
}

bool RecommendationService::delete_session(std::string_view session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) return false;
  sessions_.erase(it);
  return true;
}

std::size_t RecommendationService::expire_idle(Clock::time_point now) {
  std::lock_guard lock(mutex_);
  std::size_t removed = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    Clock::time_point used;
    {
      std::lock_guard session_lock(it->second->mutex);
      used = it->second->last_used;
    }
    if (now - used > config_.idle_timeout) {
      it = sessions_.erase(it);
      ++removed;
    } else {
      ++it;
    }
  }
  return removed;
}

std::size_t RecommendationService::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace pir
