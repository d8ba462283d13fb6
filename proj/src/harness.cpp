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

#include "tca/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "tca/error.hpp"
#include "tca/risk.hpp"
#include "tca/serialization.hpp"
#include "tca/supervisor.hpp"

namespace tca {
namespace {

constexpr std::array<Tactic, 8> kTactics = {
    Tactic::DirectRequest, Tactic::Obfuscation, Tactic::HiddenIntentionStreamline,
    Tactic::RequestFraming, Tactic::OutputFormat, Tactic::Injection,
    Tactic::Echoing,       Tactic::Benign,
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

DatasetConversation conversation_from_json(const json& j, std::size_t line) {
    if (!j.is_object()) parse_error(line, "expected a JSON object");
    DatasetConversation c;
    try {
        c.conversation_id = j.at("conversation_id").get<std::string>();
        c.tactic = parse_tactic(j.at("tactic").get<std::string>());
        const auto& turns = j.at("turns");
        if (!turns.is_array() || turns.empty()) parse_error(line, "'turns' must be a non-empty array");
        for (const auto& t : turns) c.turns.push_back(turn_from_json(t));
        if (j.contains("baseline_domain")) c.baseline_domain = j["baseline_domain"].get<std::string>();
    } catch (const json::exception& e) {
        parse_error(line, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NonAlternatingRoles) throw;
        parse_error(line, e.what());
    }
    if (c.conversation_id.empty()) parse_error(line, "conversation_id must not be empty");
    try {
        check_alternation(c);
    } catch (const Error& e) {
        throw Error(ErrorCode::NonAlternatingRoles, "line " + std::to_string(line) + ": " + e.what());
    }
    return c;
}

std::string verdict_key(Verdict v) { return std::string(to_string(v)); }

json counts_json(const VerdictCounts& c) {
    return {{"allow", c[0]}, {"warn", c[1]}, {"block", c[2]}};
}

std::vector<double> stepped(double lo, double hi, double step) {
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) {
        // Round to 12 decimals so 0.4 + 37 * 0.005 reads back as 0.585.
        const double v = lo + static_cast<double>(i) * step;
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

bool verdicts_differ(const ConversationResult& a, const ConversationResult& b, int* flipped) {
    int n = 0;
    for (std::size_t i = 0; i < a.turns.size() && i < b.turns.size(); ++i) {
        if (a.turns[i].decision.verdict != b.turns[i].decision.verdict) ++n;
    }
    if (flipped) *flipped += n;
    return n > 0;
}

}  // namespace

std::string_view to_string(Tactic t) {
    switch (t) {
        case Tactic::DirectRequest: return "direct_request";
        case Tactic::Obfuscation: return "obfuscation";
        case Tactic::HiddenIntentionStreamline: return "hidden_intention_streamline";
        case Tactic::RequestFraming: return "request_framing";
        case Tactic::OutputFormat: return "output_format";
        case Tactic::Injection: return "injection";
        case Tactic::Echoing: return "echoing";
        case Tactic::Benign: return "benign";
    }
    return "benign";
}

Tactic parse_tactic(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch == ' ' || ch == '-') {
            key += '_';
        } else {
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
    }
    for (auto t : kTactics) {
        if (key == to_string(t)) return t;
    }
    throw Error(ErrorCode::ParseError, "unknown tactic '" + std::string(text) + "'");
}

DatasetFormat parse_format(std::string_view text) {
    if (text == "jsonl") return DatasetFormat::Jsonl;
    if (text == "csv") return DatasetFormat::Csv;
    throw Error(ErrorCode::ParseError, "format must be 'jsonl' or 'csv'");
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field += ch;
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (field_started) parse_error(line, "stray quote inside an unquoted field");
                quoted = true;
                field_started = true;
                quote_line = line;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default:
                field += ch;
                field_started = true;
        }
    }
    if (quoted) parse_error(quote_line, "unterminated quoted field");
    if (field_started || !row.empty()) end_row();
    return rows;
}

void check_alternation(const DatasetConversation& c) {
    for (std::size_t i = 0; i < c.turns.size(); ++i) {
        const auto expected = i % 2 == 0 ? Role::User : Role::Assistant;
        if (c.turns[i].role != expected) {
            throw Error(ErrorCode::NonAlternatingRoles,
                        "conversation '" + c.conversation_id + "' turn " + std::to_string(i + 1) +
                            " should be " + std::string(to_string(expected)));
        }
    }
}

std::vector<TurnPair> to_pairs(const DatasetConversation& c) {
    std::vector<TurnPair> pairs;
    for (std::size_t i = 0; i < c.turns.size(); i += 2) {
        TurnPair p;
        p.index = static_cast<int>(pairs.size()) + 1;
        p.user_turn = c.turns[i];
        if (i + 1 < c.turns.size()) p.assistant_turn = c.turns[i + 1];
        pairs.push_back(std::move(p));
    }
    return pairs;
}

json to_json(const DatasetConversation& c) {
    json turns = json::array();
    for (const auto& t : c.turns) turns.push_back(to_json(t));
    json j{{"conversation_id", c.conversation_id}, {"tactic", to_string(c.tactic)}, {"turns", std::move(turns)}};
    if (!c.baseline_domain.empty()) j["baseline_domain"] = c.baseline_domain;
    return j;
}

std::vector<DatasetConversation> parse_jsonl_dataset(std::string_view text) {
    std::vector<DatasetConversation> out;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (is_blank(line)) continue;
        auto doc = json::parse(line, nullptr, false);
        if (doc.is_discarded()) parse_error(line_no, "not valid JSON");
        auto c = conversation_from_json(doc, line_no);
        if (!seen.insert(c.conversation_id).second) {
            parse_error(line_no, "duplicate conversation_id '" + c.conversation_id + "'");
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<DatasetConversation> parse_csv_dataset(std::string_view text, const CsvMapping& mapping) {
    const auto rows = parse_csv(text);
    if (rows.empty()) throw Error(ErrorCode::ParseError, "line 1: missing header row");
    const auto& header = rows.front();
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) parse_error(1, "missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto id_col = column(mapping.id);
    const auto tactic_col = column(mapping.tactic);
    const auto index_col = column(mapping.turn_index);
    const auto role_col = column(mapping.role);
    const auto content_col = column(mapping.content);

    struct Row {
        long index;
        Turn turn;
    };
    std::map<std::string, std::pair<Tactic, std::vector<Row>>> grouped;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const auto line = r + 1;
        if (row.size() != header.size()) {
            parse_error(line, "expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(row.size()));
        }
        long index = 0;
        try {
            std::size_t used = 0;
            index = std::stol(row[index_col], &used);
            if (used != row[index_col].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            parse_error(line, "turn_index '" + row[index_col] + "' is not an integer");
        }
        Tactic tactic;
        Turn turn;
        try {
            tactic = parse_tactic(row[tactic_col]);
            turn.role = parse_role(row[role_col]);
        } catch (const Error& e) {
            parse_error(line, e.what());
        }
        turn.content = row[content_col];
        auto& slot = grouped[row[id_col]];
        if (slot.second.empty()) {
            slot.first = tactic;
        } else if (slot.first != tactic) {
            parse_error(line, "conversation '" + row[id_col] + "' changes tactic");
        }
        slot.second.push_back({index, std::move(turn)});
    }

    std::vector<DatasetConversation> out;
    for (auto& [id, entry] : grouped) {
        auto& rows_for_id = entry.second;
        std::stable_sort(rows_for_id.begin(), rows_for_id.end(),
                         [](const Row& a, const Row& b) { return a.index < b.index; });
        DatasetConversation c;
        c.conversation_id = id;
        c.tactic = entry.first;
        for (auto& row : rows_for_id) c.turns.push_back(std::move(row.turn));
        check_alternation(c);
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<DatasetConversation> ingest_dataset(const std::filesystem::path& path, DatasetFormat format,
                                                const CsvMapping& mapping) {
    const auto text = read_file(path);
    return format == DatasetFormat::Jsonl ? parse_jsonl_dataset(text) : parse_csv_dataset(text, mapping);
}

BatchReport run_batch(const std::vector<DatasetConversation>& conversations, const PolicyConfig& config,
                      const BatchOptions& options) {
    auto supervisor = Supervisor::from_config(config, SessionStore::in_memory());

    std::vector<ConversationResult> results(conversations.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= conversations.size()) return;
            try {
                const auto& conv = conversations[i];
                const auto sid = "conv-" + std::to_string(i);
                supervisor->create_session(sid, conv.baseline_domain);
                auto& result = results[i];
                result.conversation_id = conv.conversation_id;
                result.tactic = conv.tactic;
                for (const auto& pair : to_pairs(conv)) {
                    TurnInput input{pair.user_turn.content, std::nullopt, pair.user_turn.timestamp};
                    if (pair.assistant_turn) input.assistant_message = pair.assistant_turn->content;
                    const auto outcome = supervisor->assess_turn(sid, input);
                    const auto& b = outcome.bundle;
                    result.turns.push_back({b.pair.index, b.assessment, b.flags, b.risk_record.pattern,
                                            b.risk_record.risk, outcome.risk.trend, b.decision});
                    if (!result.first_intervention && b.decision.verdict != Verdict::Allow) {
                        result.first_intervention = b.pair.index;
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = conversations.size();
                return;
            }
        }
    };

    const int threads = std::clamp(options.parallel, 1, 64);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return a.conversation_id < b.conversation_id;
    });

    BatchReport report;
    report.config_echo = config_to_json(config);
    for (auto& r : results) {
        auto& counts = report.distribution[r.tactic];
        for (const auto& t : r.turns) {
            const auto v = static_cast<std::size_t>(t.decision.verdict);
            ++counts[v];
            ++report.totals[v];
            ++report.total_turns;
        }
    }
    report.conversations = std::move(results);
    return report;
}

json to_json(const BatchReport& report) {
    json conversations = json::array();
    for (const auto& c : report.conversations) {
        json turns = json::array();
        for (const auto& t : c.turns) {
            turns.push_back({{"turn_index", t.turn_index},
                             {"intent", to_json(t.assessment)},
                             {"patterns", to_json(t.flags)},
                             {"pattern_risk", t.pattern_risk},
                             {"risk", t.risk},
                             {"trend", to_string(t.trend)},
                             {"decision", to_json(t.decision)}});
        }
        conversations.push_back({{"conversation_id", c.conversation_id},
                                 {"tactic", to_string(c.tactic)},
                                 {"first_intervention_turn",
                                  c.first_intervention ? json(*c.first_intervention) : json(nullptr)},
                                 {"turns", std::move(turns)}});
    }
    json distribution = json::object();
    for (const auto& [tactic, counts] : report.distribution) {
        distribution[std::string(to_string(tactic))] = counts_json(counts);
    }
    auto totals = counts_json(report.totals);
    totals["turns"] = report.total_turns;
    return {{"config", report.config_echo},
            {"totals", std::move(totals)},
            {"distribution", std::move(distribution)},
            {"conversations", std::move(conversations)}};
}

void print_table(const BatchReport& report, std::ostream& out) {
    out << std::left << std::setw(30) << "tactic" << std::right << std::setw(8) << "allow"
        << std::setw(8) << "warn" << std::setw(8) << "block" << '\n';
    for (const auto& [tactic, c] : report.distribution) {
        out << std::left << std::setw(30) << to_string(tactic) << std::right << std::setw(8) << c[0]
            << std::setw(8) << c[1] << std::setw(8) << c[2] << '\n';
    }
    out << std::left << std::setw(30) << "total" << std::right << std::setw(8) << report.totals[0]
        << std::setw(8) << report.totals[1] << std::setw(8) << report.totals[2] << '\n';
}

GridSpec parse_grid(const json& doc, const PolicyConfig& base) {
    auto invalid = [](const std::string& what) -> Error { return Error(ErrorCode::InvalidGrid, what); };
    if (!doc.is_object() || !doc.contains("parameters") || !doc["parameters"].is_array()) {
        throw invalid("grid must be an object with a 'parameters' array");
    }
    GridSpec grid;
    for (const auto& p : doc["parameters"]) {
        if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) {
            throw invalid("each parameter needs a string 'name'");
        }
        GridParameter gp;
        gp.name = p["name"].get<std::string>();
        double base_value = 0.0;
        try {
            base_value = parameter_value(base, gp.name);
        } catch (const Error&) {
            throw invalid("unknown parameter '" + gp.name + "'");
        }
        auto read_pair = [&](const char* key) {
            const auto& r = p[key];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
                throw invalid(gp.name + ": '" + key + "' must be [low, high]");
            }
            if (!p.contains("step") || !p["step"].is_number() || !(p["step"].get<double>() > 0)) {
                throw invalid(gp.name + ": 'step' must be a positive number");
            }
            const double lo = r[0].get<double>();
            const double hi = r[1].get<double>();
            if (!(lo <= hi)) throw invalid(gp.name + ": low must not exceed high");
            return stepped(lo, hi, p["step"].get<double>());
        };
        if (p.contains("values")) {
            if (!p["values"].is_array()) throw invalid(gp.name + ": 'values' must be an array");
            for (const auto& v : p["values"]) {
                if (!v.is_number()) throw invalid(gp.name + ": values must be numbers");
                gp.values.push_back(v.get<double>());
            }
        } else if (p.contains("range")) {
            gp.values = read_pair("range");
        } else if (p.contains("scale")) {
            for (double s : read_pair("scale")) gp.values.push_back(base_value * (1.0 + s));
        } else {
            throw invalid(gp.name + ": needs 'values', 'range' or 'scale'");
        }
        if (gp.values.empty()) throw invalid(gp.name + ": no grid values");
        for (double v : gp.values) {
            if (!std::isfinite(v)) throw invalid(gp.name + ": non-finite value");
            with_parameter(base, gp.name, v);
        }
        grid.parameters.push_back(std::move(gp));
    }
    return grid;
}

GridSpec load_grid(const std::filesystem::path& path, const PolicyConfig& base) {
    const auto text = read_file(path);
    auto doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(ErrorCode::InvalidGrid, path.string() + ": not valid JSON");
    return parse_grid(doc, base);
}

double parameter_value(const PolicyConfig& c, const std::string& name) {
    if (name == "alpha") return c.weights.alpha;
    if (name == "beta") return c.weights.beta;
    if (name == "gamma") return c.weights.gamma;
    if (name == "w_language") return c.pattern_weights.language_shift;
    if (name == "w_domain") return c.pattern_weights.domain_shift;
    if (name == "w_time") return c.pattern_weights.time_sensitivity;
    if (name == "w_prohibited") return c.pattern_weights.prohibited_content;
    if (name == "t_warn") return c.thresholds.t_warn;
    if (name == "t_block") return c.thresholds.t_block;
    throw Error(ErrorCode::InvalidGrid, "unknown parameter '" + name + "'");
}

PolicyConfig with_parameter(const PolicyConfig& config, const std::string& name, double value) {
    PolicyConfig c = config;
    if (name == "alpha") c.weights.alpha = value;
    else if (name == "beta") c.weights.beta = value;
    else if (name == "gamma") c.weights.gamma = value;
    else if (name == "w_language") c.pattern_weights.language_shift = value;
    else if (name == "w_domain") c.pattern_weights.domain_shift = value;
    else if (name == "w_time") c.pattern_weights.time_sensitivity = value;
    else if (name == "w_prohibited") c.pattern_weights.prohibited_content = value;
    else if (name == "t_warn") c.thresholds.t_warn = value;
    else if (name == "t_block") c.thresholds.t_block = value;
    else throw Error(ErrorCode::InvalidGrid, "unknown parameter '" + name + "'");
    try {
        validate(c);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidGrid, name + "=" + format_decimal(value) + " gives an invalid config: " + e.what());
    }
    return c;
}

SweepReport sweep_parameters(const std::vector<DatasetConversation>& conversations,
                             const PolicyConfig& base, const GridSpec& grid, const BatchOptions& options) {
    SweepReport report;
    report.base = run_batch(conversations, base, options);
    const auto& base_convs = report.base.conversations;

    for (const auto& param : grid.parameters) {
        const double base_value = parameter_value(base, param.name);
        std::vector<FlipBoundary> bounds(base_convs.size());
        for (std::size_t i = 0; i < base_convs.size(); ++i) {
            bounds[i] = {base_convs[i].conversation_id, param.name, base_value, std::nullopt, std::nullopt};
        }
        for (double value : param.values) {
            const auto run = run_batch(conversations, with_parameter(base, param.name, value), options);
            SweepPoint point;
            point.parameter = param.name;
            point.value = value;
            point.relative_change = base_value == 0.0 ? value : (value - base_value) / base_value;
            for (std::size_t i = 0; i < base_convs.size(); ++i) {
                if (!verdicts_differ(base_convs[i], run.conversations[i], &point.flipped_turns)) continue;
                point.flipped_conversations.push_back(base_convs[i].conversation_id);
                auto& b = bounds[i];
                if (value > base_value && (!b.upper_flip || value < *b.upper_flip)) b.upper_flip = value;
                if (value < base_value && (!b.lower_flip || value > *b.lower_flip)) b.lower_flip = value;
            }
            if (!point.flipped_conversations.empty()) ++report.points_with_flips;
            report.total_flipped_turns += point.flipped_turns;
            report.points.push_back(std::move(point));
        }
        for (auto& b : bounds) {
            if (b.upper_flip || b.lower_flip) report.boundaries.push_back(std::move(b));
        }
    }
    return report;
}

json to_json(const SweepReport& report) {
    json points = json::array();
    for (const auto& p : report.points) {
        points.push_back({{"parameter", p.parameter},
                          {"value", p.value},
                          {"relative_change", p.relative_change},
                          {"flipped_conversations", p.flipped_conversations},
                          {"flipped_turns", p.flipped_turns}});
    }
    json boundaries = json::array();
    for (const auto& b : report.boundaries) {
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        auto rel = [&](const std::optional<double>& v) {
            return v && b.base_value != 0.0 ? json((*v - b.base_value) / b.base_value) : json(nullptr);
        };
        boundaries.push_back({{"conversation_id", b.conversation_id},
                              {"parameter", b.parameter},
                              {"base_value", b.base_value},
                              {"upper_flip", opt(b.upper_flip)},
                              {"upper_relative_change", rel(b.upper_flip)},
                              {"lower_flip", opt(b.lower_flip)},
                              {"lower_relative_change", rel(b.lower_flip)}});
    }
    return {{"base", to_json(report.base)},
            {"points", std::move(points)},
            {"boundaries", std::move(boundaries)},
            {"aggregate",
             {{"grid_points", report.points.size()},
              {"points_with_flips", report.points_with_flips},
              {"flipped_turns", report.total_flipped_turns}}}};
}

bool GoldenReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const GoldenCheck& c) { return c.passed; });
}

std::filesystem::path default_fixtures_dir() { return default_data_dir() / "fixtures"; }

GoldenReport verify_golden(const std::filesystem::path& fixtures_dir, const PolicyConfig& config) {
    constexpr double kTolerance = 1e-9;
    GoldenReport report;
    const auto fixture = fixtures_dir / "case_study.jsonl";
    if (!std::filesystem::exists(fixture)) {
        report.checks.push_back({"case-study fixture", false,
                                 std::string(to_string(ErrorCode::FixtureMissing)) + ": " + fixture.string(),
                                 std::nullopt, std::nullopt});
        return report;
    }

    auto number_check = [&](std::string name, double expected, double actual) {
        const double delta = actual - expected;
        std::ostringstream detail;
        detail << "expected " << format_decimal(expected) << ", got " << format_decimal(actual)
               << ", delta " << format_decimal(delta);
        report.checks.push_back({std::move(name), std::abs(delta) <= kTolerance, detail.str(), expected, actual});
    };
    auto verdict_check = [&](std::string name, Verdict expected, Verdict actual) {
        report.checks.push_back({std::move(name), expected == actual,
                                 "expected " + verdict_key(expected) + ", got " + verdict_key(actual),
                                 std::nullopt, std::nullopt});
    };

    try {
        const auto convs = ingest_dataset(fixture, DatasetFormat::Jsonl);
        const auto batch = run_batch(convs, config);
        if (batch.conversations.size() != 1 || batch.conversations[0].turns.size() != 2) {
            report.checks.push_back({"case-study shape", false, "expected one conversation of two turns",
                                     std::nullopt, std::nullopt});
            return report;
        }
        const auto& turns = batch.conversations[0].turns;
        const std::array<double, 2> interaction{4, 5};
        const std::array<double, 2> pattern{0.6, 0.6};
        const std::array<double, 2> risk{2.12, 3.256};
        const std::array<Verdict, 2> verdict{Verdict::Warn, Verdict::Block};
        for (std::size_t i = 0; i < 2; ++i) {
            const auto prefix = "turn " + std::to_string(i + 1) + " ";
            number_check(prefix + "interaction risk", interaction[i], turns[i].assessment.risk);
            number_check(prefix + "pattern risk", pattern[i], turns[i].pattern_risk);
            number_check(prefix + "progressive risk", risk[i], turns[i].risk);
            verdict_check(prefix + "verdict", verdict[i], turns[i].decision.verdict);
        }
    } catch (const Error& e) {
        report.checks.push_back({"case-study replay", false, e.what(), std::nullopt, std::nullopt});
    }

    // Iterated recursion against the unrolled sum on every prefix.
    std::mt19937_64 rng(20261015);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int seq = 0; seq < 1000; ++seq) {
        const RiskWeights w{0.99 * unit(rng), unit(rng), unit(rng)};
        const double p_max = 1.2 * unit(rng) + 1e-3;
        const auto len = 1 + static_cast<int>(unit(rng) * 20.0) % 20;
        std::vector<std::pair<double, double>> records;
        double r = 0.0;
        for (int t = 0; t < len; ++t) {
            records.emplace_back(5.0 * unit(rng), p_max * unit(rng));
            r = progressive_risk(r, records.back().first, records.back().second, w);
            worst = std::max(worst, std::abs(r - closed_form_risk(records, 0.0, w)));
        }
    }
    report.checks.push_back({"oracle equivalence (1000 sequences)", worst <= kTolerance,
                             "max |iterated - closed form| = " + format_decimal(worst), 0.0, worst});
    return report;
}

json to_json(const GoldenReport& report) {
    json checks = json::array();
    for (const auto& c : report.checks) {
        json j{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
        if (c.expected) j["expected"] = *c.expected;
        if (c.actual) j["actual"] = *c.actual;
        checks.push_back(std::move(j));
    }
    return {{"passed", report.passed()}, {"checks", std::move(checks)}};
}

}  // namespace tca
