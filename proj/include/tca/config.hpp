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

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "tca/decision.hpp"
#include "tca/intent.hpp"
#include "tca/patterns.hpp"
#include "tca/risk.hpp"

namespace tca {

enum class AnalyzerKind { Heuristic, Remote };

struct UpstreamConfig {
    std::string endpoint;  // receives {session_id, messages:[...]}, replies {content}
    int timeout_ms = 30000;
};

// Every tunable of the supervisor. Loaded once at startup.
struct PolicyConfig {
    RiskWeights weights;
    PatternWeights pattern_weights;
    Thresholds thresholds;
    int window = 5;
    double trend_epsilon = 0.05;
    bool escalation_override = false;
    AnalyzerKind analyzer = AnalyzerKind::Heuristic;
    RemoteAnalyzerConfig remote;
    std::filesystem::path lexicon_path;  // empty selects the bundled lexicon
    InterventionMessages messages;
    std::optional<UpstreamConfig> upstream;
};

// Throws InvalidConfig listing every offending field, one per line.
void validate(const PolicyConfig& config);

// Relative lexicon paths resolve against `base_dir`. Unknown keys are errors.
PolicyConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
PolicyConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PolicyConfig& config);

std::filesystem::path resolved_lexicon_path(const PolicyConfig& config);

TrendParams trend_params(const PolicyConfig& config);
PatternParams pattern_params(const PolicyConfig& config);
HeuristicParams heuristic_params(const PolicyConfig& config);
DecisionPolicy decision_policy(const PolicyConfig& config);

}  // namespace tca
