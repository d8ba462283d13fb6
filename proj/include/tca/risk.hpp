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

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace tca {

// Weights of the progressive risk recursion
//   R_t = alpha * R_{t-1} + beta * I_t + gamma * P_t.
struct RiskWeights {
    double alpha = 0.3;  // carried-over history
    double beta = 0.5;   // interaction risk
    double gamma = 0.2;  // pattern risk

    bool operator==(const RiskWeights&) const = default;
};

// Throws InvalidWeights unless all weights are >= 0 and alpha < 1.
void validate(const RiskWeights& w);

enum class Trend { Escalating, Stable, Declining };

std::string_view to_string(Trend trend);
Trend parse_trend(std::string_view text);

struct TrendParams {
    int window = 5;
    double epsilon = 0.05;
};

struct RiskRecord {
    int t = 0;
    double interaction = 0.0;
    double pattern = 0.0;
    double risk = 0.0;

    bool operator==(const RiskRecord&) const = default;
};

struct RiskState {
    double current = 0.0;  // R_0 = 0 for a fresh session
    std::vector<RiskRecord> history;
    Trend trend = Trend::Stable;

    bool operator==(const RiskState&) const = default;
};

// One step of the recursion. Throws NegativeInput if any input is negative.
double progressive_risk(double prev, double interaction, double pattern, const RiskWeights& w);

// Unrolled form: alpha^t * r0 + sum_i alpha^(t-i) * (beta * I_i + gamma * P_i).
// Each term is evaluated independently of the recursion; used as a cross-check.
double closed_form_risk(std::span<const std::pair<double, double>> records, double r0,
                        const RiskWeights& w);

// Mean first difference over the last `window` records, thresholded at +/- epsilon.
Trend risk_trend(std::span<const RiskRecord> history, const TrendParams& params = {});
Trend risk_trend(std::span<const double> risks, const TrendParams& params = {});

// Appends record t (which must be history.size() + 1, else IndexGap) and recomputes the trend.
RiskState update_tracker(const RiskState& state, int t, double interaction, double pattern,
                         const RiskWeights& w, const TrendParams& params = {});

}  // namespace tca
