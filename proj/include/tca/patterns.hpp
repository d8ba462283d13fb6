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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tca/conversation.hpp"
#include "tca/lexicon.hpp"

namespace tca {

// The four metadata dimensions. The set is fixed.
struct PatternFlags {
    bool language_shift = false;
    bool domain_shift = false;
    bool time_sensitivity = false;
    bool prohibited_content = false;

    bool any() const { return language_shift || domain_shift || time_sensitivity || prohibited_content; }
    bool operator==(const PatternFlags&) const = default;
};

inline constexpr std::string_view kLanguageShift = "language_shift";
inline constexpr std::string_view kDomainShift = "domain_shift";
inline constexpr std::string_view kTimeSensitivity = "time_sensitivity";
inline constexpr std::string_view kProhibitedContent = "prohibited_content";

// Names of the set flags, in the fixed order above.
std::vector<std::string> fired_patterns(const PatternFlags& flags);

struct PatternWeights {
    double language_shift = 0.3;
    double domain_shift = 0.3;
    double time_sensitivity = 0.3;
    double prohibited_content = 0.3;

    double total() const { return language_shift + domain_shift + time_sensitivity + prohibited_content; }
    bool operator==(const PatternWeights&) const = default;
};

// Throws InvalidWeights when any weight is negative.
void validate(const PatternWeights& w);

// P_t: weighted sum of the set flags.
double pattern_risk(const PatternFlags& flags, const PatternWeights& weights);

struct PatternParams {
    int window = 5;                        // rolling domain baseline length
    TimestampMs rapid_gap_ms = 2000;       // gaps shorter than this count as scripted
    int rapid_turns = 3;                   // consecutive short gaps needed to fire
};

// Per-session metadata. The language baseline is fixed once set; the domain
// baseline is the mode of the recent dominant domains.
struct MetadataState {
    std::string baseline_language;         // script class, empty until established
    std::string baseline_domain;           // domain label, empty until established
    std::vector<std::string> domain_history;
    bool first_turn_seen = false;
    std::optional<TimestampMs> last_timestamp;
    int rapid_streak = 0;

    bool operator==(const MetadataState&) const = default;
};

// A session whose domain is known before the first turn (for example a
// creative-writing assistant) starts from a declared baseline.
MetadataState seeded_metadata(std::string baseline_domain);

// Script class ("latin", "cyrillic", ...) holding a strict majority of the
// letters in `text`; nullopt when no class has more than half.
std::optional<std::string> dominant_script(std::string_view text);

struct DomainScore {
    std::string label;
    int hits = 0;
};

// Highest-scoring domain of `text`; ties go to `preferred`, then to the
// alphabetically first label. hits == 0 when nothing matched.
DomainScore dominant_domain(std::string_view text, const LexiconSet& lexicons,
                            std::string_view preferred = {});

bool detect_language_shift(const MetadataState& state, const TurnPair& pair);
bool detect_domain_shift(const MetadataState& state, const TurnPair& pair, const LexiconSet& lexicons);
bool detect_prohibited_content(const TurnPair& pair, const LexiconSet& lexicons);
std::vector<std::string> prohibited_categories(const TurnPair& pair, const LexiconSet& lexicons);
bool detect_urgency(const TurnPair& pair, const LexiconSet& lexicons);

struct PatternResult {
    PatternFlags flags;
    MetadataState state;
};

PatternResult detect_patterns(const MetadataState& state, const TurnPair& pair,
                              const LexiconSet& lexicons, const PatternParams& params = {});

}  // namespace tca
