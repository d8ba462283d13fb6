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
#include "tca/harness.hpp"
#include "tca/serialization.hpp"

using namespace tca;

namespace {

std::vector<DatasetConversation> fixture(const std::string& name) {
    return ingest_dataset(default_fixtures_dir() / name, DatasetFormat::Jsonl);
}

std::vector<json> expectations(const std::string& name) {
    std::ifstream in(default_fixtures_dir() / name);
    std::vector<json> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) out.push_back(json::parse(line));
    }
    return out;
}

}  // namespace

TEST_CASE("tactic names") {
    CHECK(parse_tactic("Hidden Intention Streamline") == Tactic::HiddenIntentionStreamline);
    CHECK(parse_tactic("direct_request") == Tactic::DirectRequest);
    CHECK(to_string(Tactic::OutputFormat) == "output_format");
    CHECK_CODE(parse_tactic("telepathy"), ErrorCode::ParseError);
}

TEST_CASE("csv parsing") {
    const auto rows = parse_csv("a,b,c\n1,\"x, \"\"quoted\"\"\",3\r\n4,\"multi\nline\",6\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][1] == "x, \"quoted\"");
    CHECK(rows[2][1] == "multi\nline");
    CHECK_CODE(parse_csv("a,\"open\n"), ErrorCode::ParseError);
}

TEST_CASE("csv dataset groups and sorts") {
    const std::string text =
        "conversation_id,tactic,turn_index,role,content\n"
        "b,Echoing,2,assistant,ok\n"
        "a,direct_request,1,user,hello\n"
        "b,Echoing,1,user,repeat after me\n"
        "b,Echoing,3,user,again\n";
    const auto convs = parse_csv_dataset(text);
    REQUIRE(convs.size() == 2);
    CHECK(convs[1].conversation_id == "b");
    CHECK(convs[1].tactic == Tactic::Echoing);
    CHECK(convs[1].turns[0].content == "repeat after me");
    CHECK(to_pairs(convs[1]).size() == 2);

    CsvMapping mapping;
    mapping.id = "cid";
    CHECK_CODE(parse_csv_dataset(text, mapping), ErrorCode::ParseError);
    CHECK_CODE(parse_csv_dataset("conversation_id,tactic,turn_index,role,content\nx,benign,1,assistant,hi\n"),
               ErrorCode::NonAlternatingRoles);
    CHECK_CODE(parse_csv_dataset("conversation_id,tactic,turn_index,role,content\nx,benign,one,user,hi\n"),
               ErrorCode::ParseError);
}

TEST_CASE("jsonl errors name the line") {
    const std::string good = R"({"conversation_id":"a","tactic":"benign","turns":[{"role":"user","content":"hi"}]})";
    CHECK(parse_jsonl_dataset(good + "\n\n").size() == 1);
    try {
        parse_jsonl_dataset(good + "\n{broken\n");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_CODE(parse_jsonl_dataset(good + "\n" + good), ErrorCode::ParseError);
    CHECK_CODE(parse_jsonl_dataset(
                   R"({"conversation_id":"a","tactic":"benign","turns":[{"role":"user","content":"a"},{"role":"user","content":"b"}]})"),
               ErrorCode::NonAlternatingRoles);
    CHECK_CODE(parse_jsonl_dataset(R"({"conversation_id":"a","tactic":"weird","turns":[{"role":"user","content":"a"}]})"),
               ErrorCode::ParseError);
}

TEST_CASE("escalating corpus matches the hand-computed values") {
    const auto convs = fixture("escalating.jsonl");
    const auto expect = expectations("escalating.jsonl");
    REQUIRE(convs.size() == 35);
    const auto report = run_batch(convs, {});
    std::map<std::string, json> by_id;
    for (const auto& e : expect) by_id[e["conversation_id"]] = e["expected"];
    for (const auto& c : report.conversations) {
        CAPTURE(c.conversation_id);
        const auto& e = by_id.at(c.conversation_id);
        REQUIRE(e.size() == c.turns.size());
        for (std::size_t t = 0; t < c.turns.size(); ++t) {
            CHECK(c.turns[t].assessment.risk == e[t]["interaction"].get<int>());
            CHECK(std::abs(c.turns[t].pattern_risk - e[t]["pattern"].get<double>()) <= 1e-9);
            CHECK(std::abs(c.turns[t].risk - e[t]["risk"].get<double>()) <= 1e-9);
            CHECK(to_string(c.turns[t].decision.verdict) == e[t]["verdict"].get<std::string>());
        }
        CHECK(c.first_intervention.has_value());
    }
    // Every tactic other than benign is present with five conversations.
    CHECK(report.distribution.size() == 7);
}

TEST_CASE("report conservation and determinism") {
    const auto convs = fixture("synthetic50.jsonl");
    const auto serial = run_batch(convs, {});
    const auto parallel = run_batch(convs, {}, {4});
    CHECK(to_json(serial) == to_json(parallel));
    int counted = 0;
    for (const auto& [tactic, c] : serial.distribution) counted += c[0] + c[1] + c[2];
    int turns = 0;
    for (const auto& c : serial.conversations) turns += static_cast<int>(c.turns.size());
    CHECK(counted == turns);
    CHECK(serial.total_turns == turns);
    CHECK(std::is_sorted(serial.conversations.begin(), serial.conversations.end(),
                         [](const auto& a, const auto& b) { return a.conversation_id < b.conversation_id; }));
}

TEST_CASE("grid parsing") {
    const PolicyConfig base;
    const auto g = parse_grid(json::parse(R"({"parameters": [{"name": "beta", "range": [0.4, 0.6], "step": 0.005}]})"), base);
    REQUIRE(g.parameters.size() == 1);
    CHECK(g.parameters[0].values.size() == 41);
    CHECK(g.parameters[0].values[38] == 0.59);
    const auto s = parse_grid(json::parse(R"({"parameters": [{"name": "t_warn", "scale": [-0.1, 0.1], "step": 0.05}]})"), base);
    CHECK(s.parameters[0].values.front() == doctest::Approx(1.485));
    CHECK_CODE(parse_grid(json::parse(R"({"parameters": [{"name": "delta", "values": [1]}]})"), base), ErrorCode::InvalidGrid);
    CHECK_CODE(parse_grid(json::parse(R"({"parameters": [{"name": "alpha", "values": [1.2]}]})"), base), ErrorCode::InvalidGrid);
    CHECK_CODE(parse_grid(json::parse(R"({"parameters": [{"name": "t_warn", "values": [3.0]}]})"), base), ErrorCode::InvalidGrid);
    CHECK_CODE(parse_grid(json::parse(R"({"parameters": [{"name": "beta", "range": [0.6, 0.4], "step": 0.1}]})"), base), ErrorCode::InvalidGrid);
}

TEST_CASE("beta sweep finds the analytic flip") {
    const auto convs = fixture("case_study.jsonl");
    const PolicyConfig base;
    const auto grid = parse_grid(json::parse(R"({"parameters": [{"name": "beta", "range": [0.4, 0.6], "step": 0.005}]})"), base);
    const auto report = sweep_parameters(convs, base, grid);
    REQUIRE(report.boundaries.size() == 1);
    const auto& b = report.boundaries[0];
    CHECK(b.conversation_id == "case-study");
    REQUIRE(b.upper_flip.has_value());
    CHECK(*b.upper_flip == 0.59);
    // Turn 1 crosses the block threshold where 4*beta + 0.12 = 2.475.
    const double analytic = (2.475 - 0.2 * 0.6) / 4;
    CHECK(std::abs(*b.upper_flip - analytic) <= 0.005);
    CHECK_FALSE(b.lower_flip.has_value());
    CHECK(report.points.size() == 41);

    const auto empty = sweep_parameters(convs, base, GridSpec{});
    CHECK(empty.points.empty());
    CHECK(to_json(empty.base) == to_json(run_batch(convs, base)));
}

TEST_CASE("golden verification") {
    const auto ok = verify_golden(default_fixtures_dir(), {});
    CHECK(ok.passed());

    PolicyConfig off;
    off.weights.alpha = 0.31;
    const auto bad = verify_golden(default_fixtures_dir(), off);
    CHECK_FALSE(bad.passed());
    int failed = 0;
    for (const auto& c : bad.checks) {
        if (!c.passed) {
            ++failed;
            CHECK(c.name == "turn 2 progressive risk");
            CHECK(*c.actual == doctest::Approx(3.2772));
        }
    }
    CHECK(failed == 1);

    test::TempDir empty;
    const auto missing = verify_golden(empty.path(), {});
    CHECK_FALSE(missing.passed());
    CHECK(missing.checks[0].detail.find("FixtureMissing") != std::string::npos);
}
