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

// tca: batch replay, sensitivity sweeps, golden verification and the HTTP gateway.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "tca/config.hpp"
#include "tca/error.hpp"
#include "tca/gateway.hpp"
#include "tca/harness.hpp"
#include "tca/store.hpp"
#include "tca/supervisor.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

tca::PolicyConfig config_from(const std::string& path) {
    return path.empty() ? tca::PolicyConfig{} : tca::load_config(path);
}

void write_json(const std::string& path, const nlohmann::json& doc) {
    const auto text = doc.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw tca::Error(tca::ErrorCode::IoError, "cannot write " + path);
    out << text;
    if (!out.flush()) throw tca::Error(tca::ErrorCode::IoError, "write failed: " + path);
}

std::shared_ptr<tca::SessionStore> store_from(const std::string& spec) {
    if (spec == "memory") return tca::SessionStore::in_memory();
    if (spec.rfind("dir:", 0) == 0 && spec.size() > 4) return tca::SessionStore::open_directory(spec.substr(4));
    throw tca::Error(tca::ErrorCode::InvalidConfig, "--store must be 'memory' or 'dir:PATH'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Turn-level conversational risk supervisor"};
    app.require_subcommand(1);

    std::string dataset, format = "jsonl", config_path, report_path, grid_path, fixtures;
    int parallel = 1;
    bool table = false;

    auto* analyze = app.add_subcommand("analyze", "Replay a dataset and report per-turn decisions");
    analyze->add_option("--dataset", dataset, "JSONL or CSV dataset")->required()->check(CLI::ExistingFile);
    analyze->add_option("--format", format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    analyze->add_option("--config", config_path, "policy config JSON");
    analyze->add_option("--report", report_path, "output report path ('-' for stdout)");
    analyze->add_option("--parallel", parallel, "worker threads")->check(CLI::Range(1, 64));
    analyze->add_flag("--table", table, "print a verdict distribution table");

    auto* sweep = app.add_subcommand("sweep", "One-at-a-time sensitivity sweep over a parameter grid");
    sweep->add_option("--dataset", dataset)->required()->check(CLI::ExistingFile);
    sweep->add_option("--format", format)->check(CLI::IsMember({"jsonl", "csv"}));
    sweep->add_option("--config", config_path);
    sweep->add_option("--grid", grid_path, "grid JSON")->required()->check(CLI::ExistingFile);
    sweep->add_option("--report", report_path);
    sweep->add_option("--parallel", parallel)->check(CLI::Range(1, 64));

    auto* golden = app.add_subcommand("verify-golden", "Check the bundled case study and oracle equivalence");
    golden->add_option("--config", config_path);
    golden->add_option("--fixtures", fixtures, "fixtures directory");

    std::string host = "127.0.0.1", store_spec = "memory";
    int port = 8080;
    bool quiet = false;
    auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
    serve->add_option("--config", config_path);
    serve->add_option("--host", host);
    serve->add_option("--port", port)->check(CLI::Range(0, 65535));
    serve->add_option("--store", store_spec, "memory or dir:PATH");
    serve->add_flag("--quiet", quiet, "disable request logging");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const auto config = config_from(config_path);
        if (*analyze) {
            const auto convs = tca::ingest_dataset(dataset, tca::parse_format(format));
            const auto report = tca::run_batch(convs, config, {parallel});
            write_json(report_path, tca::to_json(report));
            // Keep stdout clean when the JSON report itself goes there.
            if (table) tca::print_table(report, report_path.empty() || report_path == "-" ? std::cerr : std::cout);
            return 0;
        }
        if (*sweep) {
            const auto convs = tca::ingest_dataset(dataset, tca::parse_format(format));
            const auto grid = tca::load_grid(grid_path, config);
            write_json(report_path, tca::to_json(tca::sweep_parameters(convs, config, grid, {parallel})));
            return 0;
        }
        if (*golden) {
            const auto report =
                tca::verify_golden(fixtures.empty() ? tca::default_fixtures_dir() : std::filesystem::path(fixtures), config);
            for (const auto& c : report.checks) {
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            }
            return report.passed() ? 0 : 1;
        }
        if (*serve) {
            auto supervisor = tca::Supervisor::from_config(config, store_from(store_spec));
            tca::Gateway gateway(supervisor);
            gateway.set_request_logging(!quiet);
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            const int bound = gateway.start(host, port);
            std::cerr << "listening on " << host << ':' << bound << '\n';
            while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
            gateway.stop();
            return 0;
        }
    } catch (const tca::Error& e) {
        std::cerr << "error: " << tca::to_string(e.code()) << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
