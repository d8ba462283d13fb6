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

#include <string>
#include <string_view>
#include <vector>

#include "tca/intent.hpp"
#include "tca/patterns.hpp"
#include "tca/risk.hpp"

namespace tca {

struct Thresholds {
    double t_warn = 1.65;
    double t_block = 2.475;

    bool operator==(const Thresholds&) const = default;
};

// Throws InvalidThresholds unless 0 < t_warn < t_block.
void validate(const Thresholds& th);

// Ordered by severity.
enum class Verdict { Allow = 0, Warn = 1, Block = 2 };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

// allow: risk < t_warn; warn: t_warn <= risk < t_block; block: risk >= t_block.
Verdict decide(double risk, const Thresholds& th);

struct Contributing {
    IntentClass intent_class = IntentClass::Benign;
    std::vector<std::string> concerns;
    std::vector<std::string> patterns;
    Trend trend = Trend::Stable;

    bool operator==(const Contributing&) const = default;
};

struct Decision {
    Verdict verdict = Verdict::Allow;
    double risk = 0.0;
    int turn_index = 0;
    std::string rationale;
    Contributing contributing;
    std::string message;  // redirection text on warn, refusal text on block

    bool operator==(const Decision&) const = default;
};

struct InterventionMessages {
    std::string warn = "This conversation is drifting toward sensitive territory. "
                       "Please keep the request within safe and ethical bounds.";
    std::string block = "This request cannot be continued because it carries a critical risk level.";

    bool operator==(const InterventionMessages&) const = default;
};

struct DecisionPolicy {
    Thresholds thresholds;
    TrendParams trend;
    bool escalation_override = false;  // sustained escalating warn -> block
    int escalation_turns = 3;
    InterventionMessages messages;
};

// Everything the engine knows about one assessed turn.
struct AssessmentBundle {
    int turn_index = 0;
    IntentAssessment assessment;
    PatternFlags flags;
    RiskState risk;  // already includes this turn's record
    bool analyzer_unavailable = false;
};

inline constexpr std::string_view kAnalyzerUnavailable = "analyzer_unavailable";

// True when each of the last `turns` records alone falls in the warn band and
// the trend computed at that point was escalating.
bool sustained_escalation(std::span<const RiskRecord> history, const DecisionPolicy& policy);

// Threshold verdict, then fail-closed and the optional escalation override.
Verdict final_verdict(const AssessmentBundle& bundle, const DecisionPolicy& policy);

Decision compose_intervention(Verdict verdict, const AssessmentBundle& bundle,
                              const DecisionPolicy& policy);

inline Decision decide_turn(const AssessmentBundle& bundle, const DecisionPolicy& policy) {
    return compose_intervention(final_verdict(bundle, policy), bundle, policy);
}

}  // namespace tca
