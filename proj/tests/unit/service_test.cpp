#include <gtest/gtest.h>

#include <chrono>
#include <thread>

// Eigen (via pir headers) before httplib; see http_api.cpp.
#include "pir/error.hpp"
#include "pir/ngram.hpp"
#include "pir/service.hpp"
#include "pir/synth.hpp"

#include <httplib.h>
#include <json.hpp>

using namespace pir;
using nlohmann::json;

namespace {

struct Backend {
  Corpus corpus;
  CorpusStats stats;
  InvertedIndex index;
  std::unique_ptr<NGramModel> model;
  std::unique_ptr<LinRelModel> linrel;

  Backend() {
    std::vector<Document> docs{
        {"lstm", "Long short-term memory", "long short term memory networks learn long range dependencies.", {"cs.NE"}},
        {"rnn", "Recurrent nets", "recurrent neural networks model sequences with short term memory.", {"cs.NE"}},
        {"svm", "Support vectors", "support vector machines maximize the margin of a classifier.", {"cs.LG"}},
        {"ir", "Retrieval", "information retrieval ranks documents by cosine similarity.", {"cs.IR"}}};
    SynthConfig cfg;
    cfg.docs_per_topic = 20;
    for (auto& d : synth_corpus(cfg)) docs.push_back(d);
    corpus = Corpus(std::move(docs));
    stats = compute_stats(corpus.documents());
    index = InvertedIndex::build(corpus, stats);
    model = std::make_unique<NGramModel>(NGramModel::train(corpus, build_vocab(corpus.documents(), 5000)));
    linrel = std::make_unique<LinRelModel>(
        TermDocMatrix::build(corpus, stats, StopWords::english(), sample_columns(corpus.size(), 50, 1)));
  }
};

Backend& backend() {
  static Backend b;
  return b;
}

RecommendationService make_service(bool with_model = true, ServiceConfig cfg = {}) {
  auto& b = backend();
  return RecommendationService(b.corpus, b.index, b.stats, with_model ? b.model.get() : nullptr, b.linrel.get(), cfg);
}

}  // namespace

TEST(Service, CreateSessions) {
  auto svc = make_service();
  const auto a = svc.create_session(ExpanderKind::kBaseline);
  const auto b = svc.create_session(ExpanderKind::kLmBeam);
  EXPECT_NE(a, b);
  EXPECT_EQ(svc.session_count(), 2u);
  auto none = make_service(false);
  try {
    none.create_session(ExpanderKind::kLmBeam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kRejected);
  }
  SessionParams bad;
  bad.window = 0;
  EXPECT_THROW(svc.create_session(ExpanderKind::kBaseline, bad), Error);
}

TEST(Service, LmSessionReturnsRecommendationsAndPredictions) {
  auto svc = make_service();
  const auto id = svc.create_session(ExpanderKind::kLmBeam);
  ContextResponse r;
  for (const char* w : {"long", "short", "term"}) r = svc.update_context(id, w, true);
  ASSERT_FALSE(r.recommendations.empty());
  EXPECT_LE(r.recommendations.size(), 10u);
  EXPECT_EQ(r.recommendations[0].doc_id, "lstm");
  EXPECT_EQ(r.recommendations[0].link, "/documents/lstm");
  ASSERT_FALSE(r.predictions.empty());
  EXPECT_LE(r.predictions.size(), 3u);
  EXPECT_FALSE(r.fallback);
}

TEST(Service, PartialWordRefreshesPredictionsOnly) {
  auto svc = make_service();
  const auto id = svc.create_session(ExpanderKind::kLmBeam);
  const auto empty = svc.update_context(id, "lo", false);
  EXPECT_TRUE(empty.recommendations.empty());
  const auto done = svc.update_context(id, "short", true);
  const auto r = svc.update_context(id, "te", false);
  EXPECT_EQ(r.recommendations, done.recommendations);  // last list is kept
  ASSERT_FALSE(r.predictions.empty());
  for (const auto& w : r.predictions[0]) EXPECT_TRUE(w.starts_with("te")) << w;
}

TEST(Service, BaselineHasNoPredictions) {
  auto svc = make_service();
  const auto id = svc.create_session(ExpanderKind::kBaseline);
  const auto r = svc.update_context(id, "retrieval", true);
  EXPECT_TRUE(r.predictions.empty());
  ASSERT_FALSE(r.recommendations.empty());
  EXPECT_EQ(r.recommendations[0].doc_id, "ir");
}

TEST(Service, SessionsAreIsolatedAndDeterministic) {
  auto svc = make_service();
  const auto a = svc.create_session(ExpanderKind::kIntentLinRel);
  const auto b = svc.create_session(ExpanderKind::kIntentLinRel);
  const auto c = svc.create_session(ExpanderKind::kIntentLinRel);
  ContextResponse ra, rc;
  for (const char* w : {"neural", "networks", "memory"}) {
    ra = svc.update_context(a, w, true);
    svc.update_context(b, "margin", true);
    rc = svc.update_context(c, w, true);
  }
  EXPECT_EQ(ra, rc);
}

TEST(Service, DocumentsAndDeletion) {
  auto svc = make_service();
  EXPECT_EQ(svc.get_document("svm"), backend().corpus[2]);
  EXPECT_THROW(svc.get_document("nope"), Error);
  const auto id = svc.create_session(ExpanderKind::kBaseline);
  EXPECT_TRUE(svc.delete_session(id));
  EXPECT_FALSE(svc.delete_session(id));
  try {
    svc.update_context(id, "x", true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Service, IdleSessionsExpire) {
  ServiceConfig cfg;
  cfg.idle_timeout = std::chrono::seconds(60);
  auto svc = make_service(true, cfg);
  svc.create_session(ExpanderKind::kBaseline);
  const auto now = RecommendationService::Clock::now();
  EXPECT_EQ(svc.expire_idle(now), 0u);
  EXPECT_EQ(svc.expire_idle(now + std::chrono::seconds(61)), 1u);
  EXPECT_EQ(svc.session_count(), 0u);
}

TEST(Service, ConcurrentSessions) {
  auto svc = make_service();
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) ids.push_back(svc.create_session(ExpanderKind::kLmBeam));
  std::vector<ContextResponse> last(ids.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < ids.size(); ++i)
      pool.emplace_back([&, i] {
        for (const char* w : {"long", "short", "term", "memory"}) last[i] = svc.update_context(ids[i], w, true);
      });
  }
  for (std::size_t i = 1; i < last.size(); ++i) EXPECT_EQ(last[i], last[0]);
}

TEST(Service, CompletedWordLatency) {
  auto svc = make_service();
  const auto id = svc.create_session(ExpanderKind::kLmBeam);
  const auto start = std::chrono::steady_clock::now();
  for (const char* w : {"recurrent", "neural", "networks", "model", "sequences"}) svc.update_context(id, w, true);
  const auto per_update = (std::chrono::steady_clock::now() - start) / 5;
  EXPECT_LT(per_update, std::chrono::milliseconds(500));
}

class HttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    auto& b = backend();
    service_ = std::make_unique<RecommendationService>(b.corpus, b.index, b.stats, b.model.get(), b.linrel.get());
    api_ = std::make_unique<HttpApi>(*service_);
    port_ = api_->bind_any_port();
    ASSERT_GT(port_, 0);
    thread_ = std::jthread([this] { api_->listen_after_bind(); });
    api_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }
  void TearDown() override {
    api_->stop();
    thread_ = {};
  }

  std::unique_ptr<RecommendationService> service_;
  std::unique_ptr<HttpApi> api_;
  int port_ = -1;
  std::jthread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(HttpTest, EndToEnd) {
  auto created = client_->Post("/sessions", R"({"expander":"lm","params":{"n":5,"d":2}})", "application/json");
  ASSERT_TRUE(created);
  ASSERT_EQ(created->status, 201);
  const auto id = json::parse(created->body).at("id").get<std::string>();

  json last;
  for (const char* w : {"long", "short", "term"}) {
    auto r = client_->Post("/sessions/" + id + "/context", json{{"word", w}, {"completed", true}, {"seq", 7}}.dump(),
                           "application/json");
    ASSERT_TRUE(r);
    ASSERT_EQ(r->status, 200);
    last = json::parse(r->body);
  }
  EXPECT_EQ(last.at("seq"), 7);
  EXPECT_FALSE(last.at("fallback").get<bool>());
  ASSERT_FALSE(last.at("recommendations").empty());
  const auto link = last.at("recommendations")[0].at("link").get<std::string>();
  EXPECT_EQ(last.at("predictions").size(), 2u);

  auto doc = client_->Get(link);
  ASSERT_TRUE(doc);
  ASSERT_EQ(doc->status, 200);
  const auto record = json::parse(doc->body);
  const auto& original = backend().corpus[backend().corpus.find(record.at("id").get<std::string>())];
  EXPECT_EQ(record.at("text"), original.text);
  EXPECT_EQ(record.at("title"), original.title);
  EXPECT_EQ(record.at("topics"), original.topics);
  EXPECT_EQ(doc->get_header_value("Access-Control-Allow-Origin"), "*");

  auto del = client_->Delete("/sessions/" + id);
  ASSERT_TRUE(del);
  EXPECT_EQ(del->status, 204);
  auto again = client_->Delete("/sessions/" + id);
  EXPECT_EQ(again->status, 404);
}

TEST_F(HttpTest, Errors) {
  auto unknown = client_->Post("/sessions", R"({"expander":"bm25"})", "application/json");
  ASSERT_TRUE(unknown);
  EXPECT_EQ(unknown->status, 400);
  const auto body = json::parse(unknown->body);
  EXPECT_TRUE(body.contains("code"));
  EXPECT_TRUE(body.contains("message"));

  auto garbage = client_->Post("/sessions", "{not json", "application/json");
  EXPECT_EQ(garbage->status, 400);

  auto missing = client_->Post("/sessions/s999/context", R"({"word":"x","completed":true})", "application/json");
  EXPECT_EQ(missing->status, 404);

  auto doc = client_->Get("/documents/nope");
  EXPECT_EQ(doc->status, 404);
  EXPECT_EQ(json::parse(doc->body).at("code"), "not-found");
}
