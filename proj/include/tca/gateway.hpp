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

#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "json.hpp"
#include "tca/supervisor.hpp"

namespace httplib {
class Server;
}

namespace tca {

struct HttpResponse {
    int status = 200;
    nlohmann::json body;
};

// JSON body of a per-turn response: {decision, risk, trend, patterns, intent, analyzer_unavailable}.
nlohmann::json turn_response(const TurnOutcome& outcome);
// {session_id, history, trend, decisions}
nlohmann::json risk_report(const SessionRecord& record);

// HTTP/1.1 JSON API over a Supervisor:
//   POST /v1/sessions                 -> 201 {session_id}
//   POST /v1/sessions/{id}/turns      -> 200 turn_response
//   POST /v1/sessions/{id}/chat       -> 200 (forwarding mode only)
//   GET  /v1/sessions/{id}/risk       -> 200 risk_report
//   GET  /healthz
class Gateway {
public:
    explicit Gateway(std::shared_ptr<Supervisor> supervisor);
    ~Gateway();

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    // Transport-independent routing; the HTTP server delegates here.
    HttpResponse dispatch(const std::string& method, const std::string& path, const std::string& body);

    // Binds and serves on a background thread. port 0 picks a free port.
    // Returns the bound port.
    int start(const std::string& host, int port);
    // Blocks until stop() is called from another thread or a signal handler.
    void listen(const std::string& host, int port);
    void stop();

    void set_request_logging(bool on) { log_requests_ = on; }
    // Overrides the upstream built from config (forwarding mode).
    void set_upstream(UpstreamFn upstream) { upstream_ = std::move(upstream); }

private:
    HttpResponse create_session(const std::string& body);
    HttpResponse assess(const std::string& session_id, const std::string& body);
    HttpResponse chat(const std::string& session_id, const std::string& body);
    HttpResponse report(const std::string& session_id);
    void install_routes();

    std::shared_ptr<Supervisor> supervisor_;
    UpstreamFn upstream_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::atomic<bool> log_requests_{false};
};

// Forwarding-mode upstream call: POSTs {session_id, messages} and reads {content}.
// Throws BackendUnavailable on any failure.
UpstreamFn http_upstream(const UpstreamConfig& config);

}  // namespace tca
