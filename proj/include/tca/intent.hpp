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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tca/conversation.hpp"
#include "tca/lexicon.hpp"

namespace tca {

enum class IntentClass { Benign, Probing, BoundaryTesting, Manipulation, Critical };

std::string_view to_string(IntentClass c);
IntentClass parse_intent_class(std::string_view text);

// Canonical class for a risk level: 0 benign, 1 probing, 2 boundary testing,
// 3-4 manipulation, 5 critical.
IntentClass class_for_risk(int risk);

inline constexpr int kMaxInteractionRisk = 5;

struct IntentAssessment {
    int risk = 0;  // I_t, always within 0..5
    IntentClass intent_class = IntentClass::Benign;
    std::vector<std::string> concerns;
    std::string analyzer_id;

    bool operator==(const IntentAssessment&) const = default;
};

// Clamps risk into 0..5 and repairs the class when it contradicts the risk
// endpoints (0 must be benign, 5 must be critical).
IntentAssessment normalized(IntentAssessment a);

struct AnalyzerContext {
    std::vector<TurnPair> prior_pairs;  // ascending index, at most the window length
    double prior_risk = 0.0;            // R_{t-1}
    std::string session_domain;
};

class AnalyzerBackend {
public:
    virtual ~AnalyzerBackend() = default;
    virtual IntentAssessment analyze(const AnalyzerContext& ctx, const TurnPair& pair) const = 0;
    virtual std::string id() const = 0;
};

struct HeuristicParams {
    // Prior risk at or above this (the warn threshold) lets a tier >= 3 hit
    // escalate the score by one.
    double escalation_threshold = 1.65;
};

inline constexpr std::string_view kHeuristicAnalyzerId = "heuristic-v1";
inline constexpr std::string_view kEscalationConcern = "escalated-by-history";

// risk = clamp(max matched tier + escalation, 0, 5). Total and deterministic.
IntentAssessment heuristic_score(const AnalyzerContext& ctx, const TurnPair& pair,
                                 const LexiconSet& lexicons, const HeuristicParams& params = {});

class HeuristicAnalyzer final : public AnalyzerBackend {
public:
    HeuristicAnalyzer(std::shared_ptr<const LexiconSet> lexicons, HeuristicParams params)
        : lexicons_(std::move(lexicons)), params_(params) {}

    IntentAssessment analyze(const AnalyzerContext& ctx, const TurnPair& pair) const override {
        return heuristic_score(ctx, pair, *lexicons_, params_);
    }
    std::string id() const override { return std::string(kHeuristicAnalyzerId); }

private:
    std::shared_ptr<const LexiconSet> lexicons_;
    HeuristicParams params_;
};

inline constexpr std::string_view kClampedConcern = "clamped";

// Parses {"risk": int, "intent_class": str, "concerns": [str...]}. Out-of-range
// risk is clamped and "clamped" added to concerns. Throws MalformedBackendReply.
IntentAssessment parse_remote_reply(std::string_view raw);

struct RemoteAnalyzerConfig {
    std::string endpoint;  // http(s)://host[:port]/path
    std::string auth_header = "Authorization";
    std::string credential_env;  // name of the variable holding the credential
    int timeout_ms = 10000;
    std::string prompt_template;
};

// POSTs {context, pair, prior_risk, instructions} to the configured endpoint.
// Throws BackendUnavailable on transport failure or non-2xx status and
// MalformedBackendReply on an unparseable body.
class RemoteAnalyzer final : public AnalyzerBackend {
public:
    explicit RemoteAnalyzer(RemoteAnalyzerConfig config);

    IntentAssessment analyze(const AnalyzerContext& ctx, const TurnPair& pair) const override;
    std::string id() const override { return "remote:" + config_.endpoint; }

    std::string build_request_body(const AnalyzerContext& ctx, const TurnPair& pair) const;

private:
    RemoteAnalyzerConfig config_;
    std::string base_url_;
    std::string path_;
};

// Runs the backend and enforces the assessment invariants on whatever it returns.
IntentAssessment analyze_intent(const AnalyzerContext& ctx, const TurnPair& pair,
                                const AnalyzerBackend& backend);

}  // namespace tca
