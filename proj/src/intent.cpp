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

#include "tca/intent.hpp"

#include <algorithm>

#include "json.hpp"
#include "tca/error.hpp"

namespace tca {

std::string_view to_string(IntentClass c) {
    switch (c) {
        case IntentClass::Benign: return "benign";
        case IntentClass::Probing: return "probing";
        case IntentClass::BoundaryTesting: return "boundary_testing";
        case IntentClass::Manipulation: return "manipulation";
        case IntentClass::Critical: return "critical";
    }
    return "benign";
}

IntentClass parse_intent_class(std::string_view text) {
    if (text == "benign") return IntentClass::Benign;
    if (text == "probing") return IntentClass::Probing;
    if (text == "boundary_testing") return IntentClass::BoundaryTesting;
    if (text == "manipulation") return IntentClass::Manipulation;
    if (text == "critical") return IntentClass::Critical;
    throw Error(ErrorCode::ParseError, "unknown intent class '" + std::string(text) + "'");
}

IntentClass class_for_risk(int risk) {
    if (risk <= 0) return IntentClass::Benign;
    if (risk == 1) return IntentClass::Probing;
    if (risk == 2) return IntentClass::BoundaryTesting;
    if (risk <= 4) return IntentClass::Manipulation;
    return IntentClass::Critical;
}

IntentAssessment normalized(IntentAssessment a) {
    if (a.risk < 0 || a.risk > kMaxInteractionRisk) {
        a.risk = std::clamp(a.risk, 0, kMaxInteractionRisk);
        if (std::find(a.concerns.begin(), a.concerns.end(), kClampedConcern) == a.concerns.end()) {
            a.concerns.emplace_back(kClampedConcern);
        }
    }
    if (a.risk == 0) a.intent_class = IntentClass::Benign;
    if (a.risk == kMaxInteractionRisk) a.intent_class = IntentClass::Critical;
    return a;
}

IntentAssessment heuristic_score(const AnalyzerContext& ctx, const TurnPair& pair,
                                 const LexiconSet& lexicons, const HeuristicParams& params) {
    std::string text = to_lower_ascii(pair.user_turn.content);
    if (pair.assistant_turn) {
        text += '\n';
        text += to_lower_ascii(pair.assistant_turn->content);
    }

    int base = 0;
    IntentAssessment out;
    out.analyzer_id = std::string(kHeuristicAnalyzerId);
    for (const auto& category : lexicons.intent) {
        if (category.tier == Tier::Benign || !category.patterns.matches(text)) continue;
        base = std::max(base, static_cast<int>(category.tier));
        out.concerns.push_back(category.category);
    }

    const bool escalate = ctx.prior_risk >= params.escalation_threshold &&
                          base >= static_cast<int>(Tier::HarmfulEnabling);
    if (escalate) out.concerns.emplace_back(kEscalationConcern);

    out.risk = std::clamp(base + (escalate ? 1 : 0), 0, kMaxInteractionRisk);
    out.intent_class = class_for_risk(out.risk);
    return out;
}

IntentAssessment parse_remote_reply(std::string_view raw) {
    const auto doc = nlohmann::json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw Error(ErrorCode::MalformedBackendReply, "reply is not a JSON object");
    }
    for (const char* key : {"risk", "intent_class", "concerns"}) {
        if (!doc.contains(key)) {
            throw Error(ErrorCode::MalformedBackendReply, std::string("reply lacks key '") + key + "'");
        }
    }
    const auto& risk = doc["risk"];
    if (!risk.is_number()) throw Error(ErrorCode::MalformedBackendReply, "risk is not a number");
    if (!doc["intent_class"].is_string()) {
        throw Error(ErrorCode::MalformedBackendReply, "intent_class is not a string");
    }
    if (!doc["concerns"].is_array()) {
        throw Error(ErrorCode::MalformedBackendReply, "concerns is not an array");
    }

    IntentAssessment a;
    // Fractional ratings round to the nearest level; huge values saturate before the cast.
    const double r = std::clamp(risk.get<double>(), -1.0, 6.0);
    a.risk = static_cast<int>(r < 0 ? r - 0.5 : r + 0.5);
    try {
        a.intent_class = parse_intent_class(doc["intent_class"].get<std::string>());
    } catch (const Error&) {
        throw Error(ErrorCode::MalformedBackendReply,
                    "unknown intent_class '" + doc["intent_class"].get<std::string>() + "'");
    }
    for (const auto& c : doc["concerns"]) {
        if (!c.is_string()) throw Error(ErrorCode::MalformedBackendReply, "concerns must be strings");
        a.concerns.push_back(c.get<std::string>());
    }
    return normalized(std::move(a));
}

IntentAssessment analyze_intent(const AnalyzerContext& ctx, const TurnPair& pair,
                                const AnalyzerBackend& backend) {
    validate_pair(pair);
    auto a = normalized(backend.analyze(ctx, pair));
    if (a.analyzer_id.empty()) a.analyzer_id = backend.id();
    return a;
}

}  // namespace tca
