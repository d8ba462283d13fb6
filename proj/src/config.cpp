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

#include "tca/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "tca/error.hpp"

namespace tca {
namespace {

using nlohmann::json;

// Collects field-level problems so a bad config is reported in one pass.
class Report {
public:
    void add(const std::string& field, const std::string& problem) {
        problems_.push_back(field + ": " + problem);
    }
    void raise_if_any() const {
        if (problems_.empty()) return;
        std::ostringstream out;
        out << problems_.size() << " invalid field(s)";
        for (const auto& p : problems_) out << "\n  " << p;
        throw Error(ErrorCode::InvalidConfig, out.str());
    }

private:
    std::vector<std::string> problems_;
};

void check_keys(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed,
                Report& report) {
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) report.add(prefix + key, "unknown key");
    }
}

void read_number(const json& obj, const char* key, const std::string& prefix, double& out,
                 Report& report) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_number()) {
        report.add(prefix + key, "must be a number");
        return;
    }
    out = obj[key].get<double>();
}

void read_int(const json& obj, const char* key, const std::string& prefix, int& out, Report& report) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_number_integer()) {
        report.add(prefix + key, "must be an integer");
        return;
    }
    out = obj[key].get<int>();
}

void read_string(const json& obj, const char* key, const std::string& prefix, std::string& out,
                 Report& report) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_string()) {
        report.add(prefix + key, "must be a string");
        return;
    }
    out = obj[key].get<std::string>();
}

const json* section(const json& doc, const char* key, Report& report) {
    if (!doc.contains(key)) return nullptr;
    if (!doc[key].is_object()) {
        report.add(key, "must be an object");
        return nullptr;
    }
    return &doc[key];
}

void check_values(const PolicyConfig& c, Report& report) {
    if (!(c.weights.alpha >= 0)) report.add("risk_weights.alpha", "must be >= 0");
    if (!(c.weights.alpha < 1)) report.add("risk_weights.alpha", "must be < 1");
    if (!(c.weights.beta >= 0)) report.add("risk_weights.beta", "must be >= 0");
    if (!(c.weights.gamma >= 0)) report.add("risk_weights.gamma", "must be >= 0");
    const auto& pw = c.pattern_weights;
    if (!(pw.language_shift >= 0)) report.add("pattern_weights.language_shift", "must be >= 0");
    if (!(pw.domain_shift >= 0)) report.add("pattern_weights.domain_shift", "must be >= 0");
    if (!(pw.time_sensitivity >= 0)) report.add("pattern_weights.time_sensitivity", "must be >= 0");
    if (!(pw.prohibited_content >= 0)) report.add("pattern_weights.prohibited_content", "must be >= 0");
    if (!(c.thresholds.t_warn > 0)) report.add("thresholds.warn", "must be > 0");
    if (!(c.thresholds.t_warn < c.thresholds.t_block)) {
        report.add("thresholds.block", "must be greater than thresholds.warn");
    }
    if (c.window < 1) report.add("window", "must be >= 1");
    if (!(c.trend_epsilon >= 0)) report.add("trend_epsilon", "must be >= 0");
    if (c.analyzer == AnalyzerKind::Remote && c.remote.endpoint.empty()) {
        report.add("analyzer.endpoint", "required when analyzer.backend is 'remote'");
    }
    if (c.remote.timeout_ms <= 0) report.add("analyzer.timeout_ms", "must be > 0");
    if (c.upstream && c.upstream->endpoint.empty()) report.add("upstream.endpoint", "must not be empty");
}

}  // namespace

void validate(const PolicyConfig& config) {
    Report report;
    check_values(config, report);
    report.raise_if_any();
}

PolicyConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    Report report;
    PolicyConfig c;
    if (!doc.is_object()) {
        report.add("<root>", "must be a JSON object");
        report.raise_if_any();
    }
    check_keys(doc, "",
               {"risk_weights", "pattern_weights", "thresholds", "window", "trend_epsilon",
                "escalation_override", "analyzer", "lexicon_path", "messages", "upstream"},
               report);

    if (const auto* s = section(doc, "risk_weights", report)) {
        check_keys(*s, "risk_weights.", {"alpha", "beta", "gamma"}, report);
        read_number(*s, "alpha", "risk_weights.", c.weights.alpha, report);
        read_number(*s, "beta", "risk_weights.", c.weights.beta, report);
        read_number(*s, "gamma", "risk_weights.", c.weights.gamma, report);
    }
    if (const auto* s = section(doc, "pattern_weights", report)) {
        check_keys(*s, "pattern_weights.",
                   {"language_shift", "domain_shift", "time_sensitivity", "prohibited_content"}, report);
        read_number(*s, "language_shift", "pattern_weights.", c.pattern_weights.language_shift, report);
        read_number(*s, "domain_shift", "pattern_weights.", c.pattern_weights.domain_shift, report);
        read_number(*s, "time_sensitivity", "pattern_weights.", c.pattern_weights.time_sensitivity, report);
        read_number(*s, "prohibited_content", "pattern_weights.", c.pattern_weights.prohibited_content,
                    report);
    }
    if (const auto* s = section(doc, "thresholds", report)) {
        check_keys(*s, "thresholds.", {"warn", "block"}, report);
        read_number(*s, "warn", "thresholds.", c.thresholds.t_warn, report);
        read_number(*s, "block", "thresholds.", c.thresholds.t_block, report);
    }
    read_int(doc, "window", "", c.window, report);
    read_number(doc, "trend_epsilon", "", c.trend_epsilon, report);
    if (doc.contains("escalation_override")) {
        if (doc["escalation_override"].is_boolean()) {
            c.escalation_override = doc["escalation_override"].get<bool>();
        } else {
            report.add("escalation_override", "must be a boolean");
        }
    }
    if (const auto* s = section(doc, "analyzer", report)) {
        check_keys(*s, "analyzer.",
                   {"backend", "endpoint", "auth_header", "credential_env", "timeout_ms", "prompt_template"},
                   report);
        std::string backend = "heuristic";
        read_string(*s, "backend", "analyzer.", backend, report);
        if (backend == "remote") {
            c.analyzer = AnalyzerKind::Remote;
        } else if (backend != "heuristic") {
            report.add("analyzer.backend", "must be 'heuristic' or 'remote'");
        }
        read_string(*s, "endpoint", "analyzer.", c.remote.endpoint, report);
        read_string(*s, "auth_header", "analyzer.", c.remote.auth_header, report);
        read_string(*s, "credential_env", "analyzer.", c.remote.credential_env, report);
        read_int(*s, "timeout_ms", "analyzer.", c.remote.timeout_ms, report);
        read_string(*s, "prompt_template", "analyzer.", c.remote.prompt_template, report);
    }
    if (doc.contains("lexicon_path")) {
        std::string path;
        read_string(doc, "lexicon_path", "", path, report);
        if (!path.empty()) {
            c.lexicon_path = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path)
                                                                        : base_dir / path;
        }
    }
    if (const auto* s = section(doc, "messages", report)) {
        check_keys(*s, "messages.", {"warn", "block"}, report);
        read_string(*s, "warn", "messages.", c.messages.warn, report);
        read_string(*s, "block", "messages.", c.messages.block, report);
    }
    if (const auto* s = section(doc, "upstream", report)) {
        check_keys(*s, "upstream.", {"endpoint", "timeout_ms"}, report);
        UpstreamConfig up;
        read_string(*s, "endpoint", "upstream.", up.endpoint, report);
        read_int(*s, "timeout_ms", "upstream.", up.timeout_ms, report);
        c.upstream = up;
    }

    check_values(c, report);
    report.raise_if_any();
    return c;
}

PolicyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

json config_to_json(const PolicyConfig& c) {
    json j{{"risk_weights", {{"alpha", c.weights.alpha}, {"beta", c.weights.beta}, {"gamma", c.weights.gamma}}},
           {"pattern_weights",
            {{"language_shift", c.pattern_weights.language_shift},
             {"domain_shift", c.pattern_weights.domain_shift},
             {"time_sensitivity", c.pattern_weights.time_sensitivity},
             {"prohibited_content", c.pattern_weights.prohibited_content}}},
           {"thresholds", {{"warn", c.thresholds.t_warn}, {"block", c.thresholds.t_block}}},
           {"window", c.window},
           {"trend_epsilon", c.trend_epsilon},
           {"escalation_override", c.escalation_override},
           {"messages", {{"warn", c.messages.warn}, {"block", c.messages.block}}}};
    json analyzer{{"backend", c.analyzer == AnalyzerKind::Remote ? "remote" : "heuristic"}};
    if (c.analyzer == AnalyzerKind::Remote) {
        // The credential itself is never echoed, only the variable that holds it.
        analyzer["endpoint"] = c.remote.endpoint;
        analyzer["auth_header"] = c.remote.auth_header;
        analyzer["credential_env"] = c.remote.credential_env;
        analyzer["timeout_ms"] = c.remote.timeout_ms;
    }
    j["analyzer"] = std::move(analyzer);
    if (!c.lexicon_path.empty()) j["lexicon_path"] = c.lexicon_path.string();
    if (c.upstream) j["upstream"] = {{"endpoint", c.upstream->endpoint}, {"timeout_ms", c.upstream->timeout_ms}};
    return j;
}

std::filesystem::path resolved_lexicon_path(const PolicyConfig& config) {
    return config.lexicon_path.empty() ? default_lexicon_path() : config.lexicon_path;
}

TrendParams trend_params(const PolicyConfig& config) {
    return {config.window, config.trend_epsilon};
}

PatternParams pattern_params(const PolicyConfig& config) {
    PatternParams p;
    p.window = config.window;
    return p;
}

HeuristicParams heuristic_params(const PolicyConfig& config) {
    return {config.thresholds.t_warn};
}

DecisionPolicy decision_policy(const PolicyConfig& config) {
    DecisionPolicy p;
    p.thresholds = config.thresholds;
    p.trend = trend_params(config);
    p.escalation_override = config.escalation_override;
    p.messages = config.messages;
    return p;
}

}  // namespace tca
