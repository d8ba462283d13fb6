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
#include <memory>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tca {

// Severity tiers used by the heuristic analyzer.
enum class Tier : int {
    Benign = 0,
    SensitiveTopic = 1,
    PolicyAdjacent = 2,
    HarmfulEnabling = 3,
    IllegalActivity = 4,
};

// ASCII lower-casing; non-ASCII bytes pass through untouched.
std::string to_lower_ascii(std::string_view text);

// Plain vocabulary matched on word boundaries. Input text must already be lower-cased.
class TermMatcher {
public:
    TermMatcher() = default;
    explicit TermMatcher(std::vector<std::string> terms);

    // Total occurrences across all terms.
    int count_hits(std::string_view lowered) const;
    const std::vector<std::string>& terms() const { return terms_; }

private:
    std::vector<std::string> terms_;
};

// A set of regular expressions folded into one word-boundary anchored
// alternation. Patterns are written in lower case and run against lowered text.
class PatternMatcher {
public:
    PatternMatcher() = default;
    explicit PatternMatcher(std::vector<std::string> patterns);

    bool matches(std::string_view lowered) const;
    bool empty() const { return patterns_.empty(); }
    const std::vector<std::string>& patterns() const { return patterns_; }

private:
    std::vector<std::string> patterns_;
    std::shared_ptr<const std::regex> regex_;
};

struct DomainLexicon {
    std::string label;
    TermMatcher terms;
};

struct ProhibitedCategory {
    std::string category;
    PatternMatcher patterns;
};

struct IntentCategory {
    std::string category;
    Tier tier = Tier::Benign;
    PatternMatcher patterns;
};

// Immutable after loading; shared read-only between sessions and threads.
struct LexiconSet {
    int schema_version = 1;
    std::vector<DomainLexicon> domains;          // sorted by label
    std::vector<ProhibitedCategory> prohibited;  // sorted by category
    PatternMatcher urgency;
    std::vector<IntentCategory> intent;          // sorted by category
};

// Throws Error(InvalidLexicon) naming the offending field.
LexiconSet parse_lexicon(const nlohmann::json& doc);
LexiconSet load_lexicon(const std::filesystem::path& path);

std::filesystem::path default_data_dir();
std::filesystem::path default_lexicon_path();

}  // namespace tca
