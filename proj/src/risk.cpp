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

#include "tca/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tca/error.hpp"

namespace tca {

void validate(const RiskWeights& w) {
    if (!(w.alpha >= 0.0) || !(w.beta >= 0.0) || !(w.gamma >= 0.0)) {
        throw Error(ErrorCode::InvalidWeights, "alpha, beta and gamma must be >= 0");
    }
    if (!(w.alpha < 1.0)) {
        throw Error(ErrorCode::InvalidWeights, "alpha must be < 1 so history decays");
    }
}

std::string_view to_string(Trend trend) {
    switch (trend) {
        case Trend::Escalating: return "escalating";
        case Trend::Stable: return "stable";
        case Trend::Declining: return "declining";
    }
    return "stable";
}

Trend parse_trend(std::string_view text) {
    if (text == "escalating") return Trend::Escalating;
    if (text == "declining") return Trend::Declining;
    if (text == "stable") return Trend::Stable;
    throw Error(ErrorCode::ParseError, "unknown trend '" + std::string(text) + "'");
}

double progressive_risk(double prev, double interaction, double pattern, const RiskWeights& w) {
    if (!(prev >= 0.0) || !(interaction >= 0.0) || !(pattern >= 0.0)) {
        throw Error(ErrorCode::NegativeInput, "risk inputs must be non-negative");
    }
    return w.alpha * prev + w.beta * interaction + w.gamma * pattern;
}

double closed_form_risk(std::span<const std::pair<double, double>> records, double r0,
                        const RiskWeights& w) {
    const auto t = static_cast<int>(records.size());
    double total = std::pow(w.alpha, t) * r0;
    for (int i = 1; i <= t; ++i) {
        const auto& [interaction, pattern] = records[static_cast<std::size_t>(i - 1)];
        total += std::pow(w.alpha, t - i) * (w.beta * interaction + w.gamma * pattern);
    }
    return total;
}

Trend risk_trend(std::span<const double> risks, const TrendParams& params) {
    const std::size_t window = params.window < 1 ? 1 : static_cast<std::size_t>(params.window);
    const std::size_t n = std::min(window, risks.size());
    if (n < 2) return Trend::Stable;
    const auto tail = risks.subspan(risks.size() - n);
    double sum = 0.0;
    for (std::size_t i = 1; i < n; ++i) sum += tail[i] - tail[i - 1];
    const double mean = sum / static_cast<double>(n - 1);
    if (mean > params.epsilon) return Trend::Escalating;
    if (mean < -params.epsilon) return Trend::Declining;
    return Trend::Stable;
}

Trend risk_trend(std::span<const RiskRecord> history, const TrendParams& params) {
    std::vector<double> risks;
    risks.reserve(history.size());
    for (const auto& rec : history) risks.push_back(rec.risk);
    return risk_trend(std::span<const double>(risks), params);
}

RiskState update_tracker(const RiskState& state, int t, double interaction, double pattern,
                         const RiskWeights& w, const TrendParams& params) {
    const auto expected = static_cast<int>(state.history.size()) + 1;
    if (t != expected) {
        throw Error(ErrorCode::IndexGap,
                    "expected risk record " + std::to_string(expected) + ", got " + std::to_string(t));
    }
    RiskState next = state;
    const double r = progressive_risk(state.current, interaction, pattern, w);
    next.history.push_back({t, interaction, pattern, r});
    next.current = r;
    next.trend = risk_trend(std::span<const RiskRecord>(next.history), params);
    return next;
}

}  // namespace tca
