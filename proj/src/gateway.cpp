// Copyright 2026 The TCA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tca/gateway.hpp"

#include <iostream>

#include "httplib.h"
#include "tca/error.hpp"
#include "tca/serialization.hpp"

namespace tca {
namespace {

HttpResponse error_response(int status, std::string_view code, const std::string& message) {
    return {status, {{"error", code}, {"message", message}}};
}

int status_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownSession: return 404;
        case ErrorCode::DuplicateSession: return 409;
        case ErrorCode::EmptyContent:
        case ErrorCode::IllegalRole: return 422;
        case ErrorCode::InvalidSessionId:
        case ErrorCode::ParseError: return 400;
        case ErrorCode::BackendUnavailable: return 502;
        default: return 500;
    }
}

// Splits "/v1/sessions/abc/turns" into {"v1", "sessions", "abc", "turns"}.
std::vector<std::string> segments(const std::string& path) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos < path.size()) {
        if (path[pos] == '/') {
            ++pos;
            continue;
        }
        const auto next = path.find('/', pos);
        out.push_back(path.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        pos = next == std::string::npos ? path.size() : next;
    }
    return out;
}

json parse_body(const std::string& body) {
    if (body.empty()) return json::object();
    auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::ParseError, "request body must be a JSON object");
    }
    return doc;
}

std::optional<std::string> optional_string(const json& doc, const char* key) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (!doc[key].is_string()) throw Error(ErrorCode::ParseError, std::string("'") + key + "' must be a string");
    return doc[key].get<std::string>();
}

std::string required_message(const json& doc) {
    auto msg = optional_string(doc, "user_message");
    if (!msg || is_blank(*msg)) throw Error(ErrorCode::EmptyContent, "user_message is required and non-blank");
    return *msg;
}

}  // namespace

json turn_response(const TurnOutcome& outcome) {
    const auto& b = outcome.bundle;
    auto patterns = to_json(b.flags);
    patterns["pattern_risk"] = b.risk_record.pattern;
    return {{"decision", to_json(b.decision)},
            {"risk", b.risk_record.risk},
            {"trend", to_string(outcome.risk.trend)},
            {"patterns", std::move(patterns)},
            {"intent", to_json(b.assessment)},
            {"analyzer_unavailable", outcome.analyzer_unavailable}};
}

json risk_report(const SessionRecord& record) {
    json history = json::array();
    for (const auto& rec : record.risk.history) history.push_back(to_json(rec));
    json decisions = json::array();
    for (const auto& d : record.decisions) decisions.push_back(to_json(d));
    return {{"session_id", record.session.session_id},
            {"history", std::move(history)},
            {"trend", to_string(record.risk.trend)},
            {"decisions", std::move(decisions)}};
}

Gateway::Gateway(std::shared_ptr<Supervisor> supervisor) : supervisor_(std::move(supervisor)) {
    if (const auto& up = supervisor_->config().upstream) upstream_ = http_upstream(*up);
}

Gateway::~Gateway() { stop(); }

HttpResponse Gateway::dispatch(const std::string& method, const std::string& path,
                               const std::string& body) {
    const auto parts = segments(path);
    try {
        if (parts.size() == 1 && parts[0] == "healthz") {
            if (method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
            return {200, {{"status", "ok"}}};
        }
        if (parts.size() >= 2 && parts[0] == "v1" && parts[1] == "sessions") {
            if (parts.size() == 2) {
                if (method != "POST") return error_response(405, "MethodNotAllowed", "use POST");
                return create_session(body);
            }
            if (parts.size() == 4) {
                const auto& id = parts[2];
                const auto& action = parts[3];
                if (action == "turns") {
                    if (method != "POST") return error_response(405, "MethodNotAllowed", "use POST");
                    return assess(id, body);
                }
                if (action == "risk") {
                    if (method != "GET") return error_response(405, "MethodNotAllowed", "use GET");
                    return report(id);
                }
                if (action == "chat") {
                    if (method != "POST") return error_response(405, "MethodNotAllowed", "use POST");
                    return chat(id, body);
                }
            }
        }
        return error_response(404, "NotFound", "no route for " + method + " " + path);
    } catch (const Error& e) {
        return error_response(status_for(e.code()), to_string(e.code()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "InternalError", e.what());
    }
}

HttpResponse Gateway::create_session(const std::string& body) {
    const auto doc = parse_body(body);
    auto id = optional_string(doc, "session_id");
    auto domain = optional_string(doc, "baseline_domain").value_or("");
    const auto created = supervisor_->create_session(std::move(id), std::move(domain));
    return {201, {{"session_id", created}}};
}

HttpResponse Gateway::assess(const std::string& session_id, const std::string& body) {
    const auto doc = parse_body(body);
    TurnInput input;
    // Unknown sessions are reported before body validation.
    supervisor_->record(session_id);
    input.user_message = required_message(doc);
    input.assistant_message = optional_string(doc, "assistant_message");
    if (doc.contains("timestamp_ms") && !doc["timestamp_ms"].is_null()) {
        if (!doc["timestamp_ms"].is_number_integer()) {
            throw Error(ErrorCode::ParseError, "'timestamp_ms' must be an integer");
        }
        input.timestamp = doc["timestamp_ms"].get<TimestampMs>();
    }
    return {200, turn_response(supervisor_->assess_turn(session_id, input))};
}

HttpResponse Gateway::chat(const std::string& session_id, const std::string& body) {
    if (!upstream_) return error_response(404, "NotFound", "forwarding mode is not configured");
    const auto doc = parse_body(body);
    supervisor_->record(session_id);
    const auto message = required_message(doc);
    try {
        auto result = supervisor_->chat_turn(session_id, message, upstream_);
        auto out = turn_response(result.outcome);
        out["forwarded"] = result.forwarded;
        out["reply"] = result.reply ? json(*result.reply) : json(nullptr);
        return {200, std::move(out)};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::BackendUnavailable) {
            return error_response(502, "UpstreamUnavailable", e.what());
        }
        throw;
    }
}

HttpResponse Gateway::report(const std::string& session_id) {
    return {200, risk_report(supervisor_->record(session_id))};
}

void Gateway::install_routes() {
    server_ = std::make_unique<httplib::Server>();
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
        const auto out = dispatch(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body.dump(), "application/json");
    };
    server_->Get(".*", handler);
    server_->Post(".*", handler);
    server_->set_logger([this](const httplib::Request& req, const httplib::Response& res) {
        // Method, path and status only; message bodies and credentials are never logged.
        if (log_requests_) std::cerr << req.method << ' ' << req.path << ' ' << res.status << '\n';
    });
}

int Gateway::start(const std::string& host, int port) {
    install_routes();
    const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void Gateway::listen(const std::string& host, int port) {
    install_routes();
    if (!server_->bind_to_port(host, port)) {
        throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    }
    server_->listen_after_bind();
}

void Gateway::stop() {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

UpstreamFn http_upstream(const UpstreamConfig& config) {
    return [config](const Session& session, const std::string& user_message) -> std::string {
        const auto scheme_end = config.endpoint.find("://");
        const auto path_start =
            config.endpoint.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        const auto base = config.endpoint.substr(0, path_start);
        const auto path = path_start == std::string::npos ? "/" : config.endpoint.substr(path_start);

        json messages = json::array();
        for (const auto& pair : session.turn_pairs) {
            messages.push_back({{"role", "user"}, {"content", pair.user_turn.content}});
            if (pair.assistant_turn) {
                messages.push_back({{"role", "assistant"}, {"content", pair.assistant_turn->content}});
            }
        }
        messages.push_back({{"role", "user"}, {"content", user_message}});
        const json body{{"session_id", session.session_id}, {"messages", std::move(messages)}};

        httplib::Client client(base);
        const auto timeout = std::chrono::milliseconds(config.timeout_ms);
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res || res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::BackendUnavailable, "upstream model call failed");
        }
        auto reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded() || !reply.contains("content") || !reply["content"].is_string()) {
            throw Error(ErrorCode::BackendUnavailable, "upstream reply lacks 'content'");
        }
        return reply["content"].get<std::string>();
    };
}

}  // namespace tca
