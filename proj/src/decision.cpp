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

#include "tca/decision.hpp"

#include <cstdio>

#include "tca/error.hpp"

namespace tca {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    return out;
}

}  // namespace

void validate(const Thresholds& th) {
    if (!(th.t_warn > 0.0) || !(th.t_warn < th.t_block)) {
        throw Error(ErrorCode::InvalidThresholds,
                    "need 0 < t_warn < t_block, got t_warn=" + fmt(th.t_warn) +
                        " t_block=" + fmt(th.t_block));
    }
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Allow: return "allow";
        case Verdict::Warn: return "warn";
        case Verdict::Block: return "block";
    }
    return "block";
}

Verdict parse_verdict(std::string_view text) {
    if (text == "allow") return Verdict::Allow;
    if (text == "warn") return Verdict::Warn;
    if (text == "block") return Verdict::Block;
    throw Error(ErrorCode::ParseError, "unknown verdict '" + std::string(text) + "'");
}

Verdict decide(double risk, const Thresholds& th) {
    validate(th);
    if (!(risk >= 0.0)) throw Error(ErrorCode::NegativeInput, "risk must be non-negative");
    if (risk < th.t_warn) return Verdict::Allow;
    if (risk < th.t_block) return Verdict::Warn;
    return Verdict::Block;
}

bool sustained_escalation(std::span<const RiskRecord> history, const DecisionPolicy& policy) {
    const auto turns = static_cast<std::size_t>(std::max(policy.escalation_turns, 1));
    if (history.size() < turns) return false;
    for (std::size_t end = history.size() - turns + 1; end <= history.size(); ++end) {
        const auto prefix = history.first(end);
        if (decide(prefix.back().risk, policy.thresholds) != Verdict::Warn) return false;
        if (risk_trend(prefix, policy.trend) != Trend::Escalating) return false;
    }
    return true;
}

Verdict final_verdict(const AssessmentBundle& bundle, const DecisionPolicy& policy) {
    if (bundle.analyzer_unavailable) return Verdict::Block;
    const auto verdict = decide(bundle.risk.current, policy.thresholds);
    if (policy.escalation_override && verdict == Verdict::Warn &&
        sustained_escalation(bundle.risk.history, policy)) {
        return Verdict::Block;
    }
    return verdict;
}

Decision compose_intervention(Verdict verdict, const AssessmentBundle& bundle,
                              const DecisionPolicy& policy) {
    const auto& th = policy.thresholds;
    Decision d;
    d.verdict = verdict;
    d.risk = bundle.risk.current;
    d.turn_index = bundle.turn_index;
    d.contributing.intent_class = bundle.assessment.intent_class;
    d.contributing.concerns = bundle.assessment.concerns;
    d.contributing.patterns = fired_patterns(bundle.flags);
    d.contributing.trend = bundle.risk.trend;

    const auto& c = d.contributing;
    const bool quiet = c.concerns.empty() && c.patterns.empty() &&
                       c.intent_class == IntentClass::Benign && d.risk == 0.0;
    if (verdict == Verdict::Allow && quiet) {
        d.rationale = "no risk indicators";
        return d;
    }

    std::string r;
    const auto risk = fmt(d.risk);
    const bool threshold_block = d.risk >= th.t_block;
    switch (verdict) {
        case Verdict::Allow:
            r = "allow: risk " + risk + " < warn threshold " + fmt(th.t_warn);
            break;
        case Verdict::Warn:
            r = "warn: risk " + risk + " >= warn threshold " + fmt(th.t_warn) +
                " and < block threshold " + fmt(th.t_block);
            d.message = policy.messages.warn;
            break;
        case Verdict::Block:
            if (bundle.analyzer_unavailable) {
                r = "block: intent analyzer unavailable, failing closed (risk " + risk + ")";
            } else if (threshold_block) {
                r = "block: risk " + risk + " >= block threshold " + fmt(th.t_block);
            } else {
                r = "block: risk " + risk + " stayed in the warn band with an escalating trend for " +
                    std::to_string(policy.escalation_turns) + " consecutive turns";
            }
            d.message = policy.messages.block;
            break;
    }
    r += "; intent " + std::string(to_string(c.intent_class));
    if (!c.patterns.empty()) r += "; patterns: " + join(c.patterns);
    if (!c.concerns.empty()) r += "; concerns: " + join(c.concerns);
    r += "; trend " + std::string(to_string(c.trend));
    d.rationale = std::move(r);
    return d;
}

}  // namespace tca
