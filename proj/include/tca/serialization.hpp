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

#include "json.hpp"
#include "tca/conversation.hpp"
#include "tca/decision.hpp"
#include "tca/intent.hpp"
#include "tca/patterns.hpp"
#include "tca/risk.hpp"

namespace tca {

using json = nlohmann::json;

// Shortest decimal that round-trips the double bit-exactly.
std::string format_decimal(double value);
// Throws ParseError on anything but a complete decimal literal.
double parse_decimal(const std::string& text);

// API responses carry reals as JSON numbers; persisted state carries them as
// decimal strings. Readers accept either.
enum class Reals { Number, Decimal };

json to_json(const Turn& turn);
json to_json(const TurnPair& pair);
json to_json(const Session& session);
json to_json(const PatternFlags& flags);
json to_json(const MetadataState& state);
json to_json(const IntentAssessment& a);
json to_json(const RiskRecord& rec, Reals reals = Reals::Number);
json to_json(const RiskState& state, Reals reals = Reals::Number);
json to_json(const Decision& d, Reals reals = Reals::Number);

// Readers throw ParseError naming the missing or mistyped field.
Turn turn_from_json(const json& j);
TurnPair pair_from_json(const json& j);
Session session_from_json(const json& j);
PatternFlags flags_from_json(const json& j);
MetadataState metadata_from_json(const json& j);
IntentAssessment assessment_from_json(const json& j);
RiskRecord risk_record_from_json(const json& j);
RiskState risk_state_from_json(const json& j);
Decision decision_from_json(const json& j);

double real_from_json(const json& j, const char* field);

}  // namespace tca
