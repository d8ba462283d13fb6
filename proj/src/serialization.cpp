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

#include "tca/serialization.hpp"

#include <charconv>
#include <system_error>

#include "tca/error.hpp"

namespace tca {
namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) {
        throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
    }
    return j.at(name);
}

std::string string_field(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (!v.is_string()) throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be a string");
    return v.get<std::string>();
}

int int_field(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (!v.is_number_integer()) {
        throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be an integer");
    }
    return v.get<int>();
}

bool bool_field(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (!v.is_boolean()) throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be a boolean");
    return v.get<bool>();
}

std::vector<std::string> strings_field(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (!v.is_array()) throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be an array");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) {
            throw Error(ErrorCode::ParseError, std::string("'") + name + "' entries must be strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

json real(double v, Reals reals) {
    return reals == Reals::Decimal ? json(format_decimal(v)) : json(v);
}

}  // namespace

std::string format_decimal(double value) {
    // Shortest form that reads back to the same double.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw Error(ErrorCode::ParseError, "not a decimal number: '" + text + "'");
    }
    return value;
}

double real_from_json(const json& j, const char* name) {
    const auto& v = field(j, name);
    if (v.is_string()) return parse_decimal(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
    throw Error(ErrorCode::ParseError, std::string("'") + name + "' must be a number");
}

json to_json(const Turn& turn) {
    json j{{"role", to_string(turn.role)}, {"content", turn.content}};
    if (turn.timestamp) j["timestamp_ms"] = *turn.timestamp;
    return j;
}

Turn turn_from_json(const json& j) {
    Turn t;
    t.role = parse_role(string_field(j, "role"));
    t.content = string_field(j, "content");
    if (j.contains("timestamp_ms") && !j["timestamp_ms"].is_null()) {
        if (!j["timestamp_ms"].is_number_integer()) {
            throw Error(ErrorCode::ParseError, "'timestamp_ms' must be an integer");
        }
        t.timestamp = j["timestamp_ms"].get<TimestampMs>();
    }
    return t;
}

json to_json(const TurnPair& pair) {
    json j{{"index", pair.index}, {"user", to_json(pair.user_turn)}};
    if (pair.assistant_turn) j["assistant"] = to_json(*pair.assistant_turn);
    return j;
}

TurnPair pair_from_json(const json& j) {
    TurnPair p;
    p.index = int_field(j, "index");
    p.user_turn = turn_from_json(field(j, "user"));
    if (j.contains("assistant") && !j["assistant"].is_null()) {
        p.assistant_turn = turn_from_json(j["assistant"]);
    }
    return p;
}

json to_json(const Session& session) {
    json pairs = json::array();
    for (const auto& p : session.turn_pairs) pairs.push_back(to_json(p));
    return {{"session_id", session.session_id},
            {"created_at_ms", session.created_at},
            {"turn_pairs", std::move(pairs)}};
}

Session session_from_json(const json& j) {
    Session s;
    s.session_id = string_field(j, "session_id");
    const auto& created = field(j, "created_at_ms");
    if (!created.is_number_integer()) throw Error(ErrorCode::ParseError, "'created_at_ms' must be an integer");
    s.created_at = created.get<TimestampMs>();
    const auto& pairs = field(j, "turn_pairs");
    if (!pairs.is_array()) throw Error(ErrorCode::ParseError, "'turn_pairs' must be an array");
    for (const auto& p : pairs) s.turn_pairs.push_back(pair_from_json(p));
    return s;
}

json to_json(const PatternFlags& flags) {
    return {{kLanguageShift, flags.language_shift},
            {kDomainShift, flags.domain_shift},
            {kTimeSensitivity, flags.time_sensitivity},
            {kProhibitedContent, flags.prohibited_content}};
}

PatternFlags flags_from_json(const json& j) {
    PatternFlags f;
    f.language_shift = bool_field(j, "language_shift");
    f.domain_shift = bool_field(j, "domain_shift");
    f.time_sensitivity = bool_field(j, "time_sensitivity");
    f.prohibited_content = bool_field(j, "prohibited_content");
    return f;
}

json to_json(const MetadataState& state) {
    json j{{"baseline_language", state.baseline_language},
           {"baseline_domain", state.baseline_domain},
           {"domain_history", state.domain_history},
           {"first_turn_seen", state.first_turn_seen},
           {"rapid_streak", state.rapid_streak}};
    j["last_timestamp_ms"] = state.last_timestamp ? json(*state.last_timestamp) : json(nullptr);
    return j;
}

MetadataState metadata_from_json(const json& j) {
    MetadataState s;
    s.baseline_language = string_field(j, "baseline_language");
    s.baseline_domain = string_field(j, "baseline_domain");
    s.domain_history = strings_field(j, "domain_history");
    s.first_turn_seen = bool_field(j, "first_turn_seen");
    s.rapid_streak = int_field(j, "rapid_streak");
    const auto& ts = field(j, "last_timestamp_ms");
    if (!ts.is_null()) {
        if (!ts.is_number_integer()) throw Error(ErrorCode::ParseError, "'last_timestamp_ms' must be an integer");
        s.last_timestamp = ts.get<TimestampMs>();
    }
    return s;
}

json to_json(const IntentAssessment& a) {
    return {{"risk", a.risk},
            {"intent_class", to_string(a.intent_class)},
            {"concerns", a.concerns},
            {"analyzer_id", a.analyzer_id}};
}

IntentAssessment assessment_from_json(const json& j) {
    IntentAssessment a;
    a.risk = int_field(j, "risk");
    a.intent_class = parse_intent_class(string_field(j, "intent_class"));
    a.concerns = strings_field(j, "concerns");
    a.analyzer_id = string_field(j, "analyzer_id");
    return a;
}

json to_json(const RiskRecord& rec, Reals reals) {
    return {{"t", rec.t},
            {"interaction", real(rec.interaction, reals)},
            {"pattern", real(rec.pattern, reals)},
            {"risk", real(rec.risk, reals)}};
}

RiskRecord risk_record_from_json(const json& j) {
    return {int_field(j, "t"), real_from_json(j, "interaction"), real_from_json(j, "pattern"),
            real_from_json(j, "risk")};
}

json to_json(const RiskState& state, Reals reals) {
    json history = json::array();
    for (const auto& rec : state.history) history.push_back(to_json(rec, reals));
    return {{"current", real(state.current, reals)},
            {"trend", to_string(state.trend)},
            {"history", std::move(history)}};
}

RiskState risk_state_from_json(const json& j) {
    RiskState s;
    s.current = real_from_json(j, "current");
    s.trend = parse_trend(string_field(j, "trend"));
    const auto& history = field(j, "history");
    if (!history.is_array()) throw Error(ErrorCode::ParseError, "'history' must be an array");
    for (const auto& rec : history) s.history.push_back(risk_record_from_json(rec));
    return s;
}

json to_json(const Decision& d, Reals reals) {
    json j{{"verdict", to_string(d.verdict)},
           {"risk", real(d.risk, reals)},
           {"turn_index", d.turn_index},
           {"rationale", d.rationale},
           {"contributing",
            {{"intent_class", to_string(d.contributing.intent_class)},
             {"concerns", d.contributing.concerns},
             {"patterns", d.contributing.patterns},
             {"trend", to_string(d.contributing.trend)}}}};
    if (!d.message.empty()) j["message"] = d.message;
    return j;
}

Decision decision_from_json(const json& j) {
    Decision d;
    d.verdict = parse_verdict(string_field(j, "verdict"));
    d.risk = real_from_json(j, "risk");
    d.turn_index = int_field(j, "turn_index");
    d.rationale = string_field(j, "rationale");
    const auto& c = field(j, "contributing");
    d.contributing.intent_class = parse_intent_class(string_field(c, "intent_class"));
    d.contributing.concerns = strings_field(c, "concerns");
    d.contributing.patterns = strings_field(c, "patterns");
    d.contributing.trend = parse_trend(string_field(c, "trend"));
    if (j.contains("message")) d.message = string_field(j, "message");
    return d;
}

}  // namespace tca
