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

#include <fstream>

#include "support.hpp"
#include "tca/config.hpp"
#include "tca/serialization.hpp"

using namespace tca;

TEST_CASE("defaults") {
    const PolicyConfig c;
    CHECK(c.weights == RiskWeights{0.3, 0.5, 0.2});
    CHECK(c.thresholds == Thresholds{1.65, 2.475});
    CHECK(c.pattern_weights.total() == doctest::Approx(1.2));
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("bundled config equals the defaults") {
    const auto c = load_config(default_data_dir() / "config" / "default.json");
    CHECK(config_to_json(c)["risk_weights"] == config_to_json(PolicyConfig{})["risk_weights"]);
    CHECK(c.thresholds == Thresholds{});
    CHECK(std::filesystem::equivalent(resolved_lexicon_path(c), default_lexicon_path()));
}

TEST_CASE("every bad field is reported") {
    const auto doc = json::parse(R"({
        "risk_weights": {"alpha": 1.5, "beta": 0.5, "gamma": 0.2},
        "thresholds": {"warn": 3.0, "block": 2.0},
        "window": 0,
        "colour": "blue"
    })");
    try {
        parse_config(doc);
        FAIL("expected InvalidConfig");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
        const std::string msg = e.what();
        CHECK(msg.find("risk_weights.alpha") != std::string::npos);
        CHECK(msg.find("thresholds") != std::string::npos);
        CHECK(msg.find("window") != std::string::npos);
        CHECK(msg.find("colour") != std::string::npos);
    }
}

TEST_CASE("config echo keeps the credential out") {
    ::setenv("TCA_TEST_SECRET", "hunter2", 1);
    const auto c = parse_config(json::parse(R"({
        "analyzer": {"backend": "remote", "endpoint": "http://127.0.0.1:9/x", "credential_env": "TCA_TEST_SECRET"}
    })"));
    CHECK(c.analyzer == AnalyzerKind::Remote);
    const auto echo = config_to_json(c).dump();
    CHECK(echo.find("TCA_TEST_SECRET") != std::string::npos);
    CHECK(echo.find("hunter2") == std::string::npos);
    CHECK(parse_config(config_to_json(c)).remote.endpoint == "http://127.0.0.1:9/x");
}

TEST_CASE("relative lexicon path resolves against the config file") {
    test::TempDir dir;
    std::filesystem::create_directories(dir.path() / "lex");
    std::filesystem::copy_file(default_lexicon_path(), dir.path() / "lex" / "mine.json");
    std::ofstream(dir.path() / "c.json") << R"({"lexicon_path": "lex/mine.json"})";
    const auto c = load_config(dir.path() / "c.json");
    CHECK(c.lexicon_path == dir.path() / "lex" / "mine.json");
}

TEST_CASE("lexicon validation") {
    CHECK_CODE(parse_lexicon(json::parse(R"({"prohibited": {}, "urgency": []})")), ErrorCode::InvalidLexicon);
    CHECK_CODE(parse_lexicon(json::parse(R"({"domains": {}, "prohibited": {"x": ["(unclosed"]}, "urgency": []})")),
               ErrorCode::InvalidLexicon);
    CHECK_CODE(parse_lexicon(json::parse(
                   R"({"domains": {}, "prohibited": {}, "urgency": [], "intent": {"x": {"tier": 7, "patterns": []}}})")),
               ErrorCode::InvalidLexicon);
    CHECK_CODE(parse_lexicon(json::parse(R"({"schema_version": 2, "domains": {}, "prohibited": {}, "urgency": []})")),
               ErrorCode::InvalidLexicon);
    const auto lex = *test::default_lexicons();
    CHECK(lex.domains.size() >= 10);
    CHECK(lex.intent.size() >= 8);
}
