// Copyright 2026 The mdinew Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mdinew/config.h"
#include "mdinew/error.h"
#include "mdinew/records.h"
#include "mdinew/scenarios.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

int exit_code_for(const mdinew::Error &e) {
    return e.code() == mdinew::ErrorCode::kIo ? kExitIo : kExitConfig;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"mdinew: MDI nonlinear entanglement witness simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format = "csv";

    CLI::App *run = app.add_subcommand("run", "Run a scenario and emit its records");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--out", out_path, "Output path (default: config `out`, else stdout)");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    CLI::App *validate = app.add_subcommand("validate", "Parse and check a config");
    validate->add_option("--config", config_path, "Config file")->required();

    app.add_subcommand("list-scenarios", "Print registered scenario names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    if (app.got_subcommand("list-scenarios")) {
        for (const auto &name : mdinew::registered_scenarios()) {
            std::cout << name << '\n';
        }
        return kExitOk;
    }

    mdinew::ScenarioConfig cfg;
    try {
        cfg = mdinew::load_config_file(config_path);
    } catch (const mdinew::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }

    if (app.got_subcommand("validate")) {
        std::cout << "ok: " << cfg.scenario << '\n';
        return kExitOk;
    }

    if (seed) {
        cfg.seed = *seed;
    }
    if (!out_path.empty()) {
        cfg.out = out_path;
    }

    mdinew::ScenarioResult result;
    try {
        result = mdinew::run_scenario(cfg);
    } catch (const mdinew::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
    for (const auto &msg : result.error_messages) {
        std::cerr << "trial error: " << msg << '\n';
    }

    try {
        const auto fmt = format == "json" ? mdinew::OutputFormat::kJson : mdinew::OutputFormat::kCsv;
        mdinew::emit(result.table, fmt, cfg.out);
    } catch (const mdinew::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitOk;
}
