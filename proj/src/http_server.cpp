#include "nextmethod/http_server.hpp"

#include "httplib.h"
#include "json.hpp"

namespace nextmethod {

using json = nlohmann::json;

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, json{{"error", message}});
}

json parse_body(const httplib::Request& req, bool allow_empty) {
    if (req.body.empty()) {
        if (allow_empty) return json::object();
        throw std::invalid_argument("request body must be a JSON object");
    }
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object()) throw std::invalid_argument("request body must be a JSON object");
    return body;
}

std::string string_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string())
        throw std::invalid_argument(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

json recommendation_json(const IssuedRecommendation& issued) {
    const Recommendation& r = issued.recommendation;
    json lhs = json::array();
    for (ClusterId c : r.rule.lhs) lhs.push_back(c.value);
    return json{{"id", issued.id},
                {"sensitivity", to_string(issued.level)},
                {"lhs_signatures", r.lhs_signatures},
                {"lhs_clusters", lhs},
                {"rhs_cluster", r.rhs_cluster.value},
                {"code", r.code},
                {"confidence", r.confidence},
                {"support", r.rule.support},
                {"provenance", json{{"repo", r.repo_id}, {"commit", r.commit_id}, {"path", r.path}}},
                {"provenance_comment", provenance_comment(r)}};
}

json buffer_json(const BufferResult& result) {
    json recs = json::array();
    for (const auto& r : result.recommendations) recs.push_back(recommendation_json(r));
    json matched = json::array();
    for (const auto& m : result.matched) matched.push_back(json{{"signature", m.signature}, {"cluster", m.cluster.value}});
    return json{{"recommendations", recs}, {"matched", matched}};
}

json model_json(const Model& m) {
    const auto& c = m.config();
    return json{{"lambda", c.lambda},
                {"gamma", c.gamma},
                {"min_support", c.min_support},
                {"min_confidence", c.min_confidence},
                {"max_lhs", c.max_lhs},
                {"clusters", m.clusters().size()},
                {"rules", m.rules().size()},
                {"corpus_fingerprint", c.corpus_fingerprint},
                {"training_commits", c.training_commits},
                {"training_transactions", c.training_transactions},
                {"format_version", kModelFormatVersion}};
}

/// Runs a handler, mapping service exceptions to HTTP statuses.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const SessionNotFound& e) {
            send_error(res, 404, e.what());
        } catch (const UnknownRecommendation& e) {
            send_error(res, 404, e.what());
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, e.what());
        } catch (const std::exception& e) {
            send_error(res, 500, e.what());
        }
    };
}

}  // namespace

struct HttpServer::Impl {
    explicit Impl(Service& s) : service(s) {}
    Service& service;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto& srv = impl_->server;
    Service& svc = impl_->service;
    srv.set_payload_max_length(8 * 1024 * 1024);
    // The browser client may be served from another origin.
    srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                             {"Access-Control-Allow-Headers", "Content-Type"},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    srv.Get("/health", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        json levels = json::array();
        for (auto l : svc.levels()) levels.push_back(to_string(l));
        send_json(res, 200, json{{"status", "ok"}, {"sessions", svc.session_count()}, {"levels", levels}});
    }));

    srv.Get("/model/info", guarded([&svc](const httplib::Request&, httplib::Response& res) {
        json levels = json::object();
        for (auto l : svc.levels()) levels[to_string(l)] = model_json(svc.model(l));
        send_json(res, 200, json{{"levels", levels}});
    }));

    srv.Post("/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req, true);
        std::optional<Sensitivity> level;
        if (body.contains("sensitivity")) level = parse_sensitivity(string_field(body, "sensitivity"));
        const std::string id = svc.create_session(level);
        send_json(res, 201, json{{"session_id", id}, {"sensitivity", to_string(svc.sensitivity(id))}});
    }));

    srv.Post(R"(/sessions/([^/]+)/buffer)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req, false);
        const auto result = svc.submit_buffer(req.matches[1], string_field(body, "text"));
        send_json(res, 200, buffer_json(result));
    }));

    srv.Post(R"(/sessions/([^/]+)/sensitivity)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req, false);
        const Sensitivity level = parse_sensitivity(string_field(body, "level"));
        const bool changed = svc.set_sensitivity(req.matches[1], level);
        send_json(res, 200, json{{"session_id", std::string(req.matches[1])}, {"sensitivity", to_string(level)},
                                 {"changed", changed}});
    }));

    srv.Post(R"(/sessions/([^/]+)/feedback)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req, false);
        const Verdict verdict = parse_verdict(string_field(body, "verdict"));
        const auto ack = svc.record_feedback(req.matches[1], string_field(body, "recommendation_id"), verdict);
        json out{{"recorded", true}, {"journal_entries", ack.journal_entries}};
        if (ack.snippet) out["snippet"] = *ack.snippet;
        send_json(res, 200, out);
    }));
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace nextmethod
