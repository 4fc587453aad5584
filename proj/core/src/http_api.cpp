// Eigen must be parsed before httplib: <resolv.h> defines a `_res` macro.
#include "pir/error.hpp"
#include "pir/service.hpp"

#include <httplib.h>
#include <json.hpp>

namespace pir {
namespace {

using nlohmann::json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kNumericFailure:
    case ErrorCode::kIo: return 500;
    default: return 400;
  }
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  res.status = status_for(code);
  res.set_content(json{{"code", std::string(to_string(code))}, {"message", message}}.dump(), "application/json");
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return obj.at(key).get<T>();
}

SessionParams parse_params(const json& params) {
  SessionParams p;
  if (params.is_null()) return p;
  if (!params.is_object()) throw Error(ErrorCode::kInvalidInput, "'params' must be an object");
  p.window = optional_field<std::size_t>(params, "n");
  p.n_exp = optional_field<std::size_t>(params, "n_exp");
  p.branching = optional_field<std::size_t>(params, "b");
  p.width = optional_field<std::size_t>(params, "k");
  p.depth = optional_field<std::size_t>(params, "d");
  p.c = optional_field<double>(params, "c");
  p.tau = optional_field<double>(params, "tau");
  return p;
}

json to_json(const ContextResponse& r) {
  json recs = json::array();
  for (const auto& rec : r.recommendations) {
    recs.push_back({{"doc_id", rec.doc_id}, {"title", rec.title}, {"score", rec.score}, {"link", rec.link}});
  }
  json out = {{"recommendations", recs}, {"predictions", r.predictions}, {"fallback", r.fallback}};
  if (!r.warning.empty()) out["warning"] = r.warning;
  return out;
}

// Runs a handler, translating library and JSON errors into {code, message}.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_error(res, e.code(), e.what());
  } catch (const json::exception& e) {
    send_error(res, ErrorCode::kInvalidInput, std::string("malformed request body: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, ErrorCode::kIo, e.what());
  }
}

}  // namespace

struct HttpApi::Impl {
  explicit Impl(RecommendationService& s) : service(s) {}

  RecommendationService& service;
  httplib::Server server;
};

HttpApi::HttpApi(RecommendationService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& server = impl_->server;
  auto& svc = impl_->service;

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = req.body.empty() ? json::object() : json::parse(req.body);
      const auto name = body.value("expander", std::string("baseline"));
      const auto kind = parse_expander(name);
      if (!kind) throw Error(ErrorCode::kRejected, "unknown expander '" + name + "'");
      const auto id = svc.create_session(*kind, parse_params(body.value("params", json())));
      res.status = 201;
      res.set_content(json{{"id", id}}.dump(), "application/json");
    });
  });

  server.Post(R"(/sessions/([^/]+)/context)", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = json::parse(req.body);
      const auto word = body.at("word").get<std::string>();
      const auto completed = body.value("completed", false);
      auto out = to_json(svc.update_context(req.matches[1].str(), word, completed));
      if (body.contains("seq")) out["seq"] = body.at("seq");
      res.set_content(out.dump(), "application/json");
    });
  });

  server.Delete(R"(/sessions/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto id = req.matches[1].str();
      if (!svc.delete_session(id)) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
      res.status = 204;
    });
  });

  server.Get(R"(/documents/([^/]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto& doc = svc.get_document(req.matches[1].str());
      json out = {{"id", doc.id}, {"title", doc.title}, {"text", doc.text}, {"topics", doc.topics}};
      res.set_content(out.dump(), "application/json");
    });
  });
}

HttpApi::~HttpApi() { stop(); }

bool HttpApi::mount_static(const std::string& dir) { return impl_->server.set_mount_point("/", dir); }

int HttpApi::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpApi::bind(const std::string& host, int port) { return impl_->server.bind_to_port(host, port); }

bool HttpApi::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpApi::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpApi::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace pir
