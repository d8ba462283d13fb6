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

#include "tca/patterns.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "tca/error.hpp"

namespace tca {
namespace {

// Decodes one UTF-8 sequence starting at text[i]; advances i. Invalid bytes yield U+FFFD.
char32_t next_codepoint(std::string_view text, std::size_t& i) {
    const auto lead = static_cast<unsigned char>(text[i++]);
    if (lead < 0x80) return lead;
    int extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        return 0xFFFD;
    }
    for (int k = 0; k < extra; ++k) {
        if (i >= text.size()) return 0xFFFD;
        const auto cont = static_cast<unsigned char>(text[i]);
        if ((cont & 0xC0) != 0x80) return 0xFFFD;
        cp = (cp << 6) | (cont & 0x3F);
        ++i;
    }
    return cp;
}

// Script class of a letter, or nullptr for digits, punctuation and symbols.
const char* script_of(char32_t cp) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return "latin";
    if (cp >= 0x00C0 && cp <= 0x024F && cp != 0x00D7 && cp != 0x00F7) return "latin";
    if (cp >= 0x0370 && cp <= 0x03FF) return "greek";
    if (cp >= 0x0400 && cp <= 0x052F) return "cyrillic";
    if (cp >= 0x0590 && cp <= 0x05FF) return "hebrew";
    if ((cp >= 0x0600 && cp <= 0x06FF) || (cp >= 0x0750 && cp <= 0x077F)) return "arabic";
    if (cp >= 0x0900 && cp <= 0x097F) return "devanagari";
    if (cp >= 0x0E00 && cp <= 0x0E7F) return "thai";
    if (cp >= 0x3040 && cp <= 0x30FF) return "kana";
    if ((cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF)) return "han";
    if (cp >= 0xAC00 && cp <= 0xD7AF) return "hangul";
    return nullptr;
}

std::string lowered_pair_text(const TurnPair& pair) {
    std::string text = to_lower_ascii(pair.user_turn.content);
    if (pair.assistant_turn) {
        text += '\n';
        text += to_lower_ascii(pair.assistant_turn->content);
    }
    return text;
}

std::string mode_of(const std::vector<std::string>& labels, const std::string& current) {
    std::map<std::string, int> counts;
    for (const auto& l : labels) ++counts[l];
    int best = 0;
    for (const auto& [label, n] : counts) best = std::max(best, n);
    if (auto it = counts.find(current); it != counts.end() && it->second == best) return current;
    for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
        if (counts[*it] == best) return *it;
    }
    return current;
}

}  // namespace

std::vector<std::string> fired_patterns(const PatternFlags& flags) {
    std::vector<std::string> out;
    if (flags.language_shift) out.emplace_back(kLanguageShift);
    if (flags.domain_shift) out.emplace_back(kDomainShift);
    if (flags.time_sensitivity) out.emplace_back(kTimeSensitivity);
    if (flags.prohibited_content) out.emplace_back(kProhibitedContent);
    return out;
}

void validate(const PatternWeights& w) {
    for (double v : {w.language_shift, w.domain_shift, w.time_sensitivity, w.prohibited_content}) {
        if (!(v >= 0.0)) throw Error(ErrorCode::InvalidWeights, "pattern weights must be >= 0");
    }
}

double pattern_risk(const PatternFlags& flags, const PatternWeights& weights) {
    double p = 0.0;
    if (flags.language_shift) p += weights.language_shift;
    if (flags.domain_shift) p += weights.domain_shift;
    if (flags.time_sensitivity) p += weights.time_sensitivity;
    if (flags.prohibited_content) p += weights.prohibited_content;
    return p;
}

MetadataState seeded_metadata(std::string baseline_domain) {
    MetadataState state;
    if (!baseline_domain.empty()) state.domain_history.push_back(baseline_domain);
    state.baseline_domain = std::move(baseline_domain);
    return state;
}

std::optional<std::string> dominant_script(std::string_view text) {
    std::map<std::string, int> counts;
    int letters = 0;
    for (std::size_t i = 0; i < text.size();) {
        if (const char* script = script_of(next_codepoint(text, i))) {
            ++counts[script];
            ++letters;
        }
    }
    for (const auto& [script, n] : counts) {
        if (2 * n > letters) return script;
    }
    return std::nullopt;
}

DomainScore dominant_domain(std::string_view text, const LexiconSet& lexicons,
                            std::string_view preferred) {
    const auto lowered = to_lower_ascii(text);
    DomainScore best;
    for (const auto& domain : lexicons.domains) {
        const int hits = domain.terms.count_hits(lowered);
        if (hits == 0) continue;
        if (hits > best.hits || (hits == best.hits && domain.label == preferred)) {
            best = {domain.label, hits};
        }
    }
    return best;
}

bool detect_language_shift(const MetadataState& state, const TurnPair& pair) {
    if (state.baseline_language.empty()) return false;
    const auto script = dominant_script(pair.user_turn.content);
    return script && *script != state.baseline_language;
}

bool detect_domain_shift(const MetadataState& state, const TurnPair& pair,
                         const LexiconSet& lexicons) {
    if (state.baseline_domain.empty()) return false;
    const auto score = dominant_domain(pair.user_turn.content, lexicons, state.baseline_domain);
    return score.hits >= 2 && score.label != state.baseline_domain;
}

std::vector<std::string> prohibited_categories(const TurnPair& pair, const LexiconSet& lexicons) {
    const auto text = lowered_pair_text(pair);
    std::vector<std::string> out;
    for (const auto& cat : lexicons.prohibited) {
        if (cat.patterns.matches(text)) out.push_back(cat.category);
    }
    return out;
}

bool detect_prohibited_content(const TurnPair& pair, const LexiconSet& lexicons) {
    const auto text = lowered_pair_text(pair);
    return std::any_of(lexicons.prohibited.begin(), lexicons.prohibited.end(),
                       [&](const ProhibitedCategory& c) { return c.patterns.matches(text); });
}

bool detect_urgency(const TurnPair& pair, const LexiconSet& lexicons) {
    return lexicons.urgency.matches(to_lower_ascii(pair.user_turn.content));
}

PatternResult detect_patterns(const MetadataState& state, const TurnPair& pair,
                              const LexiconSet& lexicons, const PatternParams& params) {
    PatternResult result{{}, state};
    auto& next = result.state;
    auto& flags = result.flags;

    if (state.first_turn_seen) {
        flags.language_shift = detect_language_shift(state, pair);
    }
    // A declared baseline makes a domain shift definable from the first turn on.
    flags.domain_shift = detect_domain_shift(state, pair, lexicons);
    flags.prohibited_content = detect_prohibited_content(pair, lexicons);

    bool rapid = false;
    if (const auto& ts = pair.user_turn.timestamp) {
        if (state.last_timestamp && *ts - *state.last_timestamp < params.rapid_gap_ms) {
            next.rapid_streak = state.rapid_streak + 1;
        } else {
            next.rapid_streak = 0;
        }
        next.last_timestamp = ts;
        rapid = next.rapid_streak >= params.rapid_turns;
    } else {
        next.rapid_streak = 0;
    }
    flags.time_sensitivity = detect_urgency(pair, lexicons) || rapid;

    if (next.baseline_language.empty()) {
        if (auto script = dominant_script(pair.user_turn.content)) next.baseline_language = *script;
    }

    const auto domain = dominant_domain(pair.user_turn.content, lexicons, state.baseline_domain);
    if (domain.hits > 0) {
        next.domain_history.push_back(domain.label);
        const auto window = static_cast<std::size_t>(std::max(params.window, 1));
        if (next.domain_history.size() > window) {
            next.domain_history.erase(next.domain_history.begin(),
                                      next.domain_history.end() - static_cast<std::ptrdiff_t>(window));
        }
        next.baseline_domain = next.baseline_domain.empty()
                                   ? domain.label
                                   : mode_of(next.domain_history, next.baseline_domain);
    }
    next.first_turn_seen = true;
    return result;
}

}  // namespace tca
