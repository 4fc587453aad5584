#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pir/corpus.hpp"
#include "pir/index.hpp"
#include "pir/linrel.hpp"
#include "pir/lm.hpp"
#include "pir/proactive.hpp"

namespace pir {

struct ServiceConfig {
  std::size_t window = 10;  // n: words kept in a session buffer
  std::size_t n_exp = 10;
  std::size_t top_k = kDefaultTopK;
  BeamExpanderOptions beam;
  IntentExpanderOptions intent;
  std::chrono::seconds idle_timeout{30 * 60};
};

// Per-session overrides of the service defaults.
struct SessionParams {
  std::optional<std::size_t> window;
  std::optional<std::size_t> n_exp;
  std::optional<std::size_t> branching;
  std::optional<std::size_t> width;
  std::optional<std::size_t> depth;
  std::optional<double> c;
  std::optional<double> tau;
};

struct Recommendation {
  std::string doc_id;
  std::string title;
  double score = 0.0;
  std::string link;

  bool operator==(const Recommendation&) const = default;
};

struct ContextResponse {
  std::vector<Recommendation> recommendations;
  std::vector<std::vector<std::string>> predictions;  // per level
  bool fallback = false;
  std::string warning;

  bool operator==(const ContextResponse&) const = default;
};

// Live recommendation engine behind the HTTP API. The corpus, index and models
// are shared read-only; every session is updated under its own lock, so one
// session's updates are serialized while different sessions proceed in parallel.
class RecommendationService {
 public:
  using Clock = std::chrono::steady_clock;

  RecommendationService(const Corpus& corpus, const InvertedIndex& index, const CorpusStats& stats,
                        const NextWordModel* model, const LinRelModel* linrel, ServiceConfig config = {});
  ~RecommendationService();

  // Throws kRejected when the expander's model is not loaded or a parameter
  // is out of range.
  std::string create_session(ExpanderKind expander, const SessionParams& params = {});

  // `word` is the text around the cursor. completed = true appends its tokens
  // to the buffer and runs a proactive query; completed = false only refreshes
  // continuation predictions, restricted to completions of the partial word.
  // Throws kNotFound for an unknown session.
  ContextResponse update_context(std::string_view session_id, std::string_view word, bool completed);

  // Throws kNotFound for an unknown id.
  const Document& get_document(std::string_view doc_id) const;

  bool delete_session(std::string_view session_id);
  // Drops sessions idle for longer than the configured timeout; returns how many.
  std::size_t expire_idle(Clock::time_point now);
  std::size_t session_count() const;

  const ServiceConfig& config() const { return config_; }

 private:
  struct Session;
  std::shared_ptr<Session> find(std::string_view id) const;
  std::vector<Recommendation> to_recommendations(const SearchResult& hits) const;

  const Corpus* corpus_;
  const InvertedIndex* index_;
  const CorpusStats* stats_;
  const NextWordModel* model_;
  const LinRelModel* linrel_;
  ServiceConfig config_;

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::uint64_t next_id_ = 1;
};

// HTTP+JSON front end:
//   POST   /sessions               {expander, params}  -> 201 {id}
//   POST   /sessions/{id}/context  {word, completed}   -> {recommendations, predictions, fallback}
//   GET    /documents/{id}                             -> document record
//   DELETE /sessions/{id}                              -> 204
// Errors are {code, message}: 404 for unknown ids, 500 for numeric or I/O
// failures, 400 otherwise. An optional "seq" in a context request is echoed.
class HttpApi {
 public:
  explicit HttpApi(RecommendationService& service);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Serves files under `dir` at "/" (e.g. a browser front end).
  bool mount_static(const std::string& dir);
  // Binds an ephemeral port and returns it (or -1).
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pir
