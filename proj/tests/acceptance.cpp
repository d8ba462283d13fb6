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

// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "httplib.h"
#include "tca/config.hpp"
#include "tca/gateway.hpp"
#include "tca/harness.hpp"
#include "tca/serialization.hpp"

using namespace tca;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > budget_s) {
        out.passed = false;
        out.detail += "; over time budget";
    }
    if (!out.passed) ++failures;
    char head[160];
    std::snprintf(head, sizeof head, "%s %2d %-34s", out.passed ? "PASS" : "FAIL", id, name.c_str());
    std::cout << head << ' ' << out.detail << " (" << std::fixed << std::setprecision(2) << secs << " s / "
              << std::setprecision(0) << budget_s << " s)" << std::endl;
}

std::vector<DatasetConversation> fixture(const std::string& name) {
    return ingest_dataset(default_fixtures_dir() / name, DatasetFormat::Jsonl);
}

// Written out term by term, independent of the library's closed form.
double unrolled(const std::vector<std::pair<double, double>>& in, const RiskWeights& w) {
    double r = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        double decay = 1.0;
        for (std::size_t k = i + 1; k < in.size(); ++k) decay *= w.alpha;
        r += decay * (w.beta * in[i].first + w.gamma * in[i].second);
    }
    return r;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome golden() {
    const auto report = run_batch(fixture("case_study.jsonl"), {});
    const auto& t = report.conversations.at(0).turns;
    if (t.size() != 2) return {false, "case study must have two turns"};
    const bool ok = t[0].assessment.risk == 4 && t[1].assessment.risk == 5 &&
                    std::abs(t[0].pattern_risk - 0.6) <= 1e-9 && std::abs(t[1].pattern_risk - 0.6) <= 1e-9 &&
                    std::abs(t[0].risk - 2.12) <= 1e-9 && std::abs(t[1].risk - 3.256) <= 1e-9 &&
                    t[0].decision.verdict == Verdict::Warn && t[1].decision.verdict == Verdict::Block;
    return {ok, "R1=" + format_decimal(t[0].risk) + " " + std::string(to_string(t[0].decision.verdict)) +
                    ", R2=" + format_decimal(t[1].risk) + " " + std::string(to_string(t[1].decision.verdict))};
}

Outcome boundaries() {
    const Thresholds th;
    const bool ok = decide(1.65, th) == Verdict::Warn && decide(2.475, th) == Verdict::Block &&
                    decide(1.6499999, th) == Verdict::Allow;
    return {ok, "1.65->" + std::string(to_string(decide(1.65, th))) + ", 2.475->" +
                    std::string(to_string(decide(2.475, th))) + ", 1.6499999->" +
                    std::string(to_string(decide(1.6499999, th)))};
}

Outcome oracle() {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int turns = 0;
    for (int seq = 0; seq < 1000; ++seq) {
        const RiskWeights w{0.99 * u(rng), u(rng), u(rng)};
        const int len = 1 + static_cast<int>(rng() % 20);
        std::vector<std::pair<double, double>> in;
        double r = 0.0;
        for (int k = 0; k < len; ++k) {
            in.emplace_back(5 * u(rng), 1.2 * u(rng));
            r = progressive_risk(r, in.back().first, in.back().second, w);
            worst = std::max({worst, std::abs(r - unrolled(in, w)), std::abs(r - closed_form_risk(in, 0.0, w))});
            ++turns;
        }
    }
    return {worst <= 1e-9, "1000 sequences, " + std::to_string(turns) + " turns, max error " + fmt("%.3g", worst)};
}

Outcome properties() {
    constexpr int kCases = 600;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const RiskWeights w;
    const PatternWeights pw;
    const Thresholds th;
    int bad = 0;
    for (int i = 0; i < kCases; ++i) {
        const double prev = 5 * u(rng), in = 5 * u(rng), p = 1.2 * u(rng), d = u(rng);
        const double base = progressive_risk(prev, in, p, w);
        if (progressive_risk(prev + d, in, p, w) < base) ++bad;
        if (progressive_risk(prev, in + d, p, w) < base) ++bad;
        if (progressive_risk(prev, in, p + d, w) < base) ++bad;
    }
    for (int i = 0; i < kCases; ++i) {
        double r = 10 * u(rng);
        const double r0 = r;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int k = 0; k < n; ++k) r = progressive_risk(r, 0, 0, w);
        if (std::abs(r - std::pow(w.alpha, n) * r0) > 1e-12) ++bad;
    }
    for (int i = 0; i < kCases; ++i) {
        const unsigned bits = static_cast<unsigned>(rng() & 15u);
        const PatternFlags f{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0, (bits & 8) != 0};
        const double p = pattern_risk(f, pw);
        if (p < 0.0 || p > pw.total() + 1e-12) ++bad;
    }
    for (int i = 0; i < kCases; ++i) {
        double a = 6 * u(rng), b = 6 * u(rng);
        if (a > b) std::swap(a, b);
        if (static_cast<int>(decide(a, th)) > static_cast<int>(decide(b, th))) ++bad;
        const int bands = (a < th.t_warn) + (a >= th.t_warn && a < th.t_block) + (a >= th.t_block);
        if (bands != 1) ++bad;
    }
    return {bad == 0, std::to_string(kCases) + " cases per property, " + std::to_string(bad) + " violations"};
}

Outcome fail_closed() {
    PolicyConfig cfg;
    cfg.analyzer = AnalyzerKind::Remote;
    cfg.remote.endpoint = "http://127.0.0.1:1/analyze";
    cfg.remote.timeout_ms = 500;
    auto sup = Supervisor::from_config(cfg, SessionStore::in_memory());
    const std::vector<std::string> msgs{"How do I bake bread?", "What is a good hotel in Rome?",
                                        "Thanks, that helps.", "Can you suggest a song?"};
    int allow = 0, unavailable = 0;
    for (int s = 0; s < 10; ++s) {
        const auto id = sup->create_session();
        for (int t = 0; t < 10; ++t) {
            const auto o = sup->assess_turn(id, {msgs[static_cast<std::size_t>(t) % msgs.size()], std::nullopt,
                                                 std::nullopt});
            allow += o.bundle.decision.verdict == Verdict::Allow;
            unavailable += o.analyzer_unavailable;
        }
    }
    return {allow == 0 && unavailable == 100,
            "100 turns, " + std::to_string(allow) + " allow, " + std::to_string(unavailable) + " fail-closed"};
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(TCA_CLI_PATH) + " " + args).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome harness_gateway() {
    const auto dataset = default_fixtures_dir() / "synthetic50.jsonl";
    const auto report_path = std::filesystem::temp_directory_path() / "tca-acceptance-report.json";
    if (run_cli("analyze --dataset " + dataset.string() + " --report " + report_path.string()) != 0) {
        return {false, "CLI analyze failed"};
    }
    std::ifstream in(report_path);
    const auto report = json::parse(in);
    std::filesystem::remove(report_path);
    std::map<std::string, json> cli_turns;
    for (const auto& c : report["conversations"]) cli_turns[c["conversation_id"]] = c["turns"];

    Gateway gw(Supervisor::from_config({}, SessionStore::in_memory()));
    const int port = gw.start("127.0.0.1", 0);
    httplib::Client client("127.0.0.1", port);
    int compared = 0, mismatched = 0;
    const auto convs = fixture("synthetic50.jsonl");
    for (const auto& conv : convs) {
        json create = json::object();
        if (!conv.baseline_domain.empty()) create["baseline_domain"] = conv.baseline_domain;
        auto res = client.Post("/v1/sessions", create.dump(), "application/json");
        if (!res || res->status != 201) return {false, "session creation failed over HTTP"};
        const auto sid = json::parse(res->body)["session_id"].get<std::string>();
        const auto& expected = cli_turns.at(conv.conversation_id);
        const auto pairs = to_pairs(conv);
        if (pairs.size() != expected.size()) return {false, conv.conversation_id + ": turn count differs"};
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            json body{{"user_message", pairs[i].user_turn.content}};
            if (pairs[i].assistant_turn) body["assistant_message"] = pairs[i].assistant_turn->content;
            auto turn = client.Post("/v1/sessions/" + sid + "/turns", body.dump(), "application/json");
            if (!turn || turn->status != 200) return {false, "turn request failed over HTTP"};
            ++compared;
            if (json::parse(turn->body)["decision"] != expected[i]["decision"]) ++mismatched;
        }
    }
    gw.stop();
    return {convs.size() == 50 && compared > 0 && mismatched == 0,
            std::to_string(convs.size()) + " conversations, " + std::to_string(compared) + " turns, " +
                std::to_string(mismatched) + " decision mismatches"};
}

Outcome scripted() {
    const auto esc = run_batch(fixture("escalating.jsonl"), {});
    int reached = 0;
    for (const auto& c : esc.conversations) reached += c.turns.back().decision.verdict != Verdict::Allow;

    std::ifstream in(default_fixtures_dir() / "escalating.jsonl");
    std::map<std::string, json> expected;
    for (std::string line; std::getline(in, line);) {
        if (line.empty()) continue;
        auto doc = json::parse(line);
        expected[doc["conversation_id"]] = doc["expected"];
    }
    int off_oracle = 0;
    for (const auto& c : esc.conversations) {
        const auto& e = expected.at(c.conversation_id);
        for (std::size_t t = 0; t < c.turns.size(); ++t) {
            if (std::abs(c.turns[t].risk - e.at(t)["risk"].get<double>()) > 1e-9) ++off_oracle;
        }
    }

    const auto ben = run_batch(fixture("benign.jsonl"), {});
    const int flagged = ben.totals[1] + ben.totals[2];
    const bool ok = esc.conversations.size() == 35 && reached == 35 && off_oracle == 0 &&
                    ben.conversations.size() == 20 && flagged == 0;
    return {ok, "escalating " + std::to_string(reached) + "/" + std::to_string(esc.conversations.size()) +
                    " intervene (" + std::to_string(off_oracle) + " turns off the hand-computed R), benign " +
                    std::to_string(flagged) + " warn/block over " + std::to_string(ben.total_turns) + " turns"};
}

Outcome sensitivity() {
    const PolicyConfig base;
    const double step = 0.005;
    const auto grid = parse_grid(
        json{{"parameters", json::array({json{{"name", "beta"}, {"range", {0.4, 0.6}}, {"step", step}}})}}, base);
    const auto report = sweep_parameters(fixture("case_study.jsonl"), base, grid);
    const double analytic = (base.thresholds.t_block - base.weights.gamma * 0.6) / 4.0;
    if (report.boundaries.size() != 1 || !report.boundaries[0].upper_flip) return {false, "no flip found"};
    const double flip = *report.boundaries[0].upper_flip;
    return {std::abs(flip - analytic) <= step,
            "flip at beta=" + format_decimal(flip) + ", analytic " + format_decimal(analytic) + ", step " +
                format_decimal(step)};
}

Outcome latency() {
    Gateway gw(Supervisor::from_config({}, SessionStore::in_memory()));
    std::vector<std::string> pool;
    for (const auto* name : {"escalating.jsonl", "benign.jsonl"}) {
        for (const auto& c : fixture(name)) {
            for (const auto& t : c.turns) pool.push_back(t.content);
        }
    }
    std::vector<double> ms;
    ms.reserve(10000);
    std::size_t k = 0;
    for (int s = 0; s < 500; ++s) {
        const auto sid = "lat" + std::to_string(s);
        gw.dispatch("POST", "/v1/sessions", json{{"session_id", sid}}.dump());
        for (int t = 0; t < 20; ++t) {
            const auto body = json{{"user_message", pool[k++ % pool.size()]}}.dump();
            const auto start = Clock::now();
            const auto res = gw.dispatch("POST", "/v1/sessions/" + sid + "/turns", body);
            const auto json_text = res.body.dump();
            ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - start).count());
            if (res.status != 200 || json_text.empty()) return {false, "turn failed"};
        }
    }
    std::sort(ms.begin(), ms.end());
    const double p50 = ms[ms.size() / 2];
    const double p99 = ms[static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ms.size()))) - 1];
    return {ms.size() == 10000 && p99 <= 5.0,
            "10000 turns, p50 " + fmt("%.3f", p50) + " ms, p99 " + fmt("%.3f", p99) + " ms"};
}

Outcome persistence() {
    auto store = SessionStore::in_memory();
    auto sup = Supervisor::from_config({}, store);
    const auto convs = fixture("synthetic50.jsonl");
    for (std::size_t i = 0; i < 12; ++i) {
        const auto id = sup->create_session("p" + std::to_string(i), convs[i].baseline_domain);
        for (const auto& pair : to_pairs(convs[i])) {
            TurnInput in{pair.user_turn.content, std::nullopt, 1000 + static_cast<TimestampMs>(pair.index)};
            if (pair.assistant_turn) in.assistant_message = pair.assistant_turn->content;
            sup->assess_turn(id, in);
        }
    }
    const auto path = std::filesystem::temp_directory_path() / "tca-acceptance-snapshot.json";
    store->write_snapshot(path);
    auto restored = SessionStore::restore(path);
    std::filesystem::remove(path);

    int values = 0, differing = 0;
    auto same = [&](double a, double b) {
        ++values;
        if (std::memcmp(&a, &b, sizeof a) != 0) ++differing;
    };
    for (const auto& id : store->session_ids()) {
        const auto a = store->snapshot(id);
        const auto b = restored->snapshot(id);
        if (a.turns() != b.turns()) return {false, id + ": turn count differs"};
        same(a.risk.current, b.risk.current);
        for (std::size_t t = 0; t < a.turns(); ++t) {
            same(a.risk.history[t].risk, b.risk.history[t].risk);
            same(a.risk.history[t].pattern, b.risk.history[t].pattern);
            same(a.risk.history[t].interaction, b.risk.history[t].interaction);
            same(a.decisions[t].risk, b.decisions[t].risk);
        }
    }
    const bool ok = store->size() >= 10 && *store == *restored && differing == 0;
    return {ok, std::to_string(store->size()) + " sessions, " + std::to_string(values) + " reals, " +
                    std::to_string(differing) + " differ"};
}

}  // namespace

int main() {
    criterion(1, "golden case study", 1, golden);
    criterion(2, "threshold boundaries", 1, boundaries);
    criterion(3, "oracle equivalence", 10, oracle);
    criterion(4, "property suite", 30, properties);
    criterion(5, "fail-closed", 10, fail_closed);
    criterion(6, "harness/gateway equivalence", 60, harness_gateway);
    criterion(7, "scripted-corpus detection", 60, scripted);
    criterion(8, "sensitivity boundary", 30, sensitivity);
    criterion(9, "latency p99", 120, latency);
    criterion(10, "persistence round trip", 10, persistence);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
