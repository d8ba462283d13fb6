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

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tca/config.hpp"
#include "tca/conversation.hpp"
#include "tca/decision.hpp"
#include "tca/intent.hpp"
#include "tca/patterns.hpp"

namespace tca {

enum class Tactic {
    DirectRequest,
    Obfuscation,
    HiddenIntentionStreamline,
    RequestFraming,
    OutputFormat,
    Injection,
    Echoing,
    Benign,
};

std::string_view to_string(Tactic t);
// Accepts the canonical snake_case name and the spaced / capitalised variants
// ("Hidden Intention Streamline"). Throws ParseError.
Tactic parse_tactic(std::string_view text);

struct DatasetConversation {
    std::string conversation_id;
    Tactic tactic = Tactic::Benign;
    std::vector<Turn> turns;       // alternating, starting with the user
    std::string baseline_domain;   // optional declared domain of the conversation
};

enum class DatasetFormat { Jsonl, Csv };

DatasetFormat parse_format(std::string_view text);

// Column names for long-format CSV datasets: one row per turn.
struct CsvMapping {
    std::string id = "conversation_id";
    std::string tactic = "tactic";
    std::string turn_index = "turn_index";
    std::string role = "role";
    std::string content = "content";
};

// RFC 4180 parsing: quoted fields, doubled quotes, embedded newlines.
// Throws ParseError with the 1-based line number.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Throws ParseError (with line number) or NonAlternatingRoles.
std::vector<DatasetConversation> parse_jsonl_dataset(std::string_view text);
std::vector<DatasetConversation> parse_csv_dataset(std::string_view text, const CsvMapping& mapping = {});
std::vector<DatasetConversation> ingest_dataset(const std::filesystem::path& path, DatasetFormat format,
                                                const CsvMapping& mapping = {});

// Throws NonAlternatingRoles unless roles alternate starting with user.
void check_alternation(const DatasetConversation& conversation);
std::vector<TurnPair> to_pairs(const DatasetConversation& conversation);

nlohmann::json to_json(const DatasetConversation& conversation);

struct TurnResult {
    int turn_index = 0;
    IntentAssessment assessment;
    PatternFlags flags;
    double pattern_risk = 0.0;
    double risk = 0.0;
    Trend trend = Trend::Stable;
    Decision decision;
};

struct ConversationResult {
    std::string conversation_id;
    Tactic tactic = Tactic::Benign;
    std::vector<TurnResult> turns;
    std::optional<int> first_intervention;  // first warn/block turn
};

// Counts indexed by Verdict.
using VerdictCounts = std::array<int, 3>;

struct BatchReport {
    std::vector<ConversationResult> conversations;  // sorted by conversation_id
    std::map<Tactic, VerdictCounts> distribution;
    VerdictCounts totals{};
    int total_turns = 0;
    nlohmann::json config_echo;
};

struct BatchOptions {
    int parallel = 1;
};

// Replays each conversation through a fresh session of the gateway pipeline.
BatchReport run_batch(const std::vector<DatasetConversation>& conversations, const PolicyConfig& config,
                      const BatchOptions& options = {});

nlohmann::json to_json(const BatchReport& report);
void print_table(const BatchReport& report, std::ostream& out);

// One swept parameter. Names: alpha beta gamma w_language w_domain w_time
// w_prohibited t_warn t_block.
struct GridParameter {
    std::string name;
    std::vector<double> values;
};

struct GridSpec {
    std::vector<GridParameter> parameters;
};

// {"parameters": [{"name": n, "values": [...]}
//                 | {"name": n, "range": [lo, hi], "step": s}
//                 | {"name": n, "scale": [lo, hi], "step": s}]}
// "scale" is relative to the base value: base * (1 + s). Throws InvalidGrid.
GridSpec parse_grid(const nlohmann::json& doc, const PolicyConfig& base);
GridSpec load_grid(const std::filesystem::path& path, const PolicyConfig& base);

double parameter_value(const PolicyConfig& config, const std::string& name);
// Throws InvalidGrid for unknown names or when the result is not a valid config.
PolicyConfig with_parameter(const PolicyConfig& config, const std::string& name, double value);

struct SweepPoint {
    std::string parameter;
    double value = 0.0;
    double relative_change = 0.0;
    std::vector<std::string> flipped_conversations;
    int flipped_turns = 0;
};

// Nearest swept values on either side of the base value that change any verdict.
struct FlipBoundary {
    std::string conversation_id;
    std::string parameter;
    double base_value = 0.0;
    std::optional<double> upper_flip;
    std::optional<double> lower_flip;
};

struct SweepReport {
    BatchReport base;
    std::vector<SweepPoint> points;
    std::vector<FlipBoundary> boundaries;
    int points_with_flips = 0;
    int total_flipped_turns = 0;
};

// One-at-a-time sensitivity sweep: every parameter's values are run with all
// other parameters at their base values.
SweepReport sweep_parameters(const std::vector<DatasetConversation>& conversations,
                             const PolicyConfig& base, const GridSpec& grid,
                             const BatchOptions& options = {});

nlohmann::json to_json(const SweepReport& report);

struct GoldenCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    std::optional<double> expected;
    std::optional<double> actual;
};

struct GoldenReport {
    std::vector<GoldenCheck> checks;
    bool passed() const;
};

std::filesystem::path default_fixtures_dir();

// Replays the bundled case-study fixture and runs the oracle-equivalence suite.
GoldenReport verify_golden(const std::filesystem::path& fixtures_dir, const PolicyConfig& config);

nlohmann::json to_json(const GoldenReport& report);

}  // namespace tca
