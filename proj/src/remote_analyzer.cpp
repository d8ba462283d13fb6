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

#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "tca/error.hpp"
#include "tca/intent.hpp"
#include "tca/serialization.hpp"

namespace tca {

RemoteAnalyzer::RemoteAnalyzer(RemoteAnalyzerConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "analyzer endpoint must be an http(s) URL: '" +
                                                  config_.endpoint + "'");
    }
    const auto path_start = config_.endpoint.find('/', scheme_end + 3);
    base_url_ = config_.endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : config_.endpoint.substr(path_start);
}

std::string RemoteAnalyzer::build_request_body(const AnalyzerContext& ctx,
                                               const TurnPair& pair) const {
    json context = json::array();
    for (const auto& prior : ctx.prior_pairs) {
        context.push_back(to_json(prior.user_turn));
        if (prior.assistant_turn) context.push_back(to_json(*prior.assistant_turn));
    }
    json body{{"context", std::move(context)},
              {"pair", to_json(pair)},
              {"prior_risk", ctx.prior_risk},
              {"session_domain", ctx.session_domain}};
    if (!config_.prompt_template.empty()) body["instructions"] = config_.prompt_template;
    return body.dump();
}

IntentAssessment RemoteAnalyzer::analyze(const AnalyzerContext& ctx, const TurnPair& pair) const {
    httplib::Client client(base_url_);
    if (!client.is_valid()) {
        throw Error(ErrorCode::BackendUnavailable, "cannot build a client for " + base_url_);
    }
    const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (!config_.credential_env.empty()) {
        if (const char* secret = std::getenv(config_.credential_env.c_str()); secret && *secret) {
            headers.emplace(config_.auth_header, secret);
        }
    }

    auto res = client.Post(path_, headers, build_request_body(ctx, pair), "application/json");
    if (!res) {
        throw Error(ErrorCode::BackendUnavailable,
                    "analyzer request failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::BackendUnavailable,
                    "analyzer returned HTTP " + std::to_string(res->status));
    }
    auto assessment = parse_remote_reply(res->body);
    assessment.analyzer_id = id();
    return assessment;
}

}  // namespace tca
