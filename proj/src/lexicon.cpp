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

#include "tca/lexicon.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>

#include "tca/error.hpp"

namespace tca {
namespace {

bool is_word_byte(unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_';
}

[[noreturn]] void lexicon_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::InvalidLexicon, field + ": " + what);
}

std::vector<std::string> string_list(const nlohmann::json& node, const std::string& field) {
    if (!node.is_array()) lexicon_error(field, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : node) {
        if (!item.is_string() || item.get_ref<const std::string&>().empty()) {
            lexicon_error(field, "entries must be non-empty strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

PatternMatcher compile(std::vector<std::string> patterns, const std::string& field) {
    try {
        return PatternMatcher(std::move(patterns));
    } catch (const std::regex_error& e) {
        lexicon_error(field, std::string("bad regular expression: ") + e.what());
    }
}

}  // namespace

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (auto& ch : out) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
}

TermMatcher::TermMatcher(std::vector<std::string> terms) {
    for (auto& t : terms) {
        auto lowered = to_lower_ascii(t);
        if (!lowered.empty()) terms_.push_back(std::move(lowered));
    }
}

int TermMatcher::count_hits(std::string_view lowered) const {
    int hits = 0;
    for (const auto& term : terms_) {
        std::size_t pos = lowered.find(term);
        while (pos != std::string_view::npos) {
            const std::size_t end = pos + term.size();
            const bool left_ok = pos == 0 || !is_word_byte(static_cast<unsigned char>(lowered[pos - 1]));
            const bool right_ok =
                end == lowered.size() || !is_word_byte(static_cast<unsigned char>(lowered[end]));
            if (left_ok && right_ok) ++hits;
            pos = lowered.find(term, pos + 1);
        }
    }
    return hits;
}

PatternMatcher::PatternMatcher(std::vector<std::string> patterns) : patterns_(std::move(patterns)) {
    if (patterns_.empty()) return;
    std::string source = "\\b(?:";
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        if (i) source += '|';
        source += "(?:" + patterns_[i] + ")";
    }
    source += ")\\b";
    regex_ = std::make_shared<const std::regex>(source, std::regex::ECMAScript | std::regex::optimize);
}

bool PatternMatcher::matches(std::string_view lowered) const {
    if (!regex_) return false;
    return std::regex_search(lowered.begin(), lowered.end(), *regex_);
}

LexiconSet parse_lexicon(const nlohmann::json& doc) {
    if (!doc.is_object()) lexicon_error("<root>", "expected a JSON object");
    LexiconSet lex;

    if (doc.contains("schema_version")) {
        if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != 1) {
            lexicon_error("schema_version", "only version 1 is supported");
        }
    }

    if (!doc.contains("domains") || !doc["domains"].is_object()) {
        lexicon_error("domains", "required object {label: [terms...]}");
    }
    // nlohmann objects iterate in key order, which keeps every lexicon list sorted.
    for (const auto& [label, terms] : doc["domains"].items()) {
        lex.domains.push_back({label, TermMatcher(string_list(terms, "domains." + label))});
    }

    if (!doc.contains("prohibited") || !doc["prohibited"].is_object()) {
        lexicon_error("prohibited", "required object {category: [patterns...]}");
    }
    for (const auto& [category, patterns] : doc["prohibited"].items()) {
        const auto field = "prohibited." + category;
        lex.prohibited.push_back({category, compile(string_list(patterns, field), field)});
    }

    if (!doc.contains("urgency")) lexicon_error("urgency", "required array of terms");
    lex.urgency = compile(string_list(doc["urgency"], "urgency"), "urgency");

    if (doc.contains("intent")) {
        if (!doc["intent"].is_object()) lexicon_error("intent", "expected an object");
        for (const auto& [category, spec] : doc["intent"].items()) {
            const auto field = "intent." + category;
            if (!spec.is_object() || !spec.contains("tier") || !spec["tier"].is_number_integer()) {
                lexicon_error(field, "expected {tier: 0-4, patterns: [...]}");
            }
            const int tier = spec["tier"].get<int>();
            if (tier < 0 || tier > 4) lexicon_error(field + ".tier", "must be within 0-4");
            if (!spec.contains("patterns")) lexicon_error(field + ".patterns", "required");
            lex.intent.push_back({category, static_cast<Tier>(tier),
                                  compile(string_list(spec["patterns"], field + ".patterns"),
                                          field + ".patterns")});
        }
    }
    return lex;
}

LexiconSet load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open lexicon file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidLexicon, path.string() + ": " + e.what());
    }
    return parse_lexicon(doc);
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("TCA_DATA_DIR"); env && *env) return env;
    return TCA_DATA_DIR;
}

std::filesystem::path default_lexicon_path() {
    return default_data_dir() / "lexicon" / "default.json";
}

}  // namespace tca
