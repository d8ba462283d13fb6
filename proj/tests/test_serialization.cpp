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

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "support.hpp"
#include "tca/serialization.hpp"

using namespace tca;

TEST_CASE("decimal round trip") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng);
        const double back = parse_decimal(format_decimal(v));
        CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    }
    CHECK(format_decimal(2.12) == "2.12");
    CHECK(format_decimal(0.0) == "0");
    CHECK(parse_decimal("3.256") == 3.256);
    CHECK_CODE(parse_decimal("3.2x"), ErrorCode::ParseError);
    CHECK_CODE(parse_decimal(""), ErrorCode::ParseError);
}

TEST_CASE("decision json") {
    Decision d;
    d.verdict = Verdict::Warn;
    d.risk = 2.12;
    d.turn_index = 1;
    d.rationale = "r";
    d.contributing.intent_class = IntentClass::Manipulation;
    d.contributing.concerns = {"illegal_activity"};
    d.contributing.patterns = {"domain_shift"};
    d.contributing.trend = Trend::Escalating;
    d.message = "m";
    const auto j = to_json(d);
    CHECK(j["verdict"] == "warn");
    CHECK(j["contributing"]["intent_class"] == "manipulation");
    CHECK(j["contributing"]["trend"] == "escalating");
    CHECK(decision_from_json(j) == d);
    CHECK(decision_from_json(to_json(d, Reals::Decimal)) == d);
    CHECK(to_json(d, Reals::Decimal)["risk"] == "2.12");

    auto broken = j;
    broken.erase("verdict");
    CHECK_CODE(decision_from_json(broken), ErrorCode::ParseError);
}

TEST_CASE("session and metadata json") {
    Session s{"abc", {make_pair(1, "hi", std::string("hello"), 5), make_pair(2, "bye")}, 42};
    CHECK(session_from_json(to_json(s)) == s);
    MetadataState m = seeded_metadata("legal");
    m.baseline_language = "latin";
    m.last_timestamp = 99;
    m.rapid_streak = 2;
    m.first_turn_seen = true;
    CHECK(metadata_from_json(to_json(m)) == m);
    RiskState r;
    r = update_tracker(r, 1, 4, 0.6, {});
    CHECK(risk_state_from_json(to_json(r, Reals::Decimal)) == r);
}
