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

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "mdinew/config.h"
#include "mdinew/error.h"
#include "mdinew/records.h"
#include "mdinew/scenarios.h"

using namespace mdinew;
namespace fs = std::filesystem;

namespace {

ErrorCode parse_error_code(const std::string &text) {
    try {
        parse_config(text);
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::kIo;  // sentinel: no error
}

std::string parse_error_message(const std::string &text) {
    try {
        parse_config(text);
    } catch (const Error &e) {
        return e.what();
    }
    return "";
}

fs::path scratch_dir() {
    fs::path dir = fs::temp_directory_path() / "mdinew_cli_test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string &args) {
    std::string cmd = std::string("\"") + MDINEW_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("call specs and grids") {
    CallSpec s = parse_call_spec("werner(0.7)");
    CHECK(s.name == "werner");
    REQUIRE(s.params.size() == 1);
    CHECK(s.params[0] == 0.7);
    CHECK(parse_call_spec("singlet").params.empty());
    CHECK(parse_call_spec(" depolarizing( 4 , 0.5 ) ").params.size() == 2);
    CHECK_THROWS_AS(parse_call_spec("werner(0.7"), Error);
    CHECK_THROWS_AS(parse_call_spec("werner(x)"), Error);

    auto g = parse_grid("0.5:1.0:6");
    REQUIRE(g.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(std::abs(g[static_cast<std::size_t>(i)] - (0.5 + 0.1 * i)) <= 1e-15);
    }
    CHECK(g.back() == 1.0);
    CHECK(parse_grid("0.8") == std::vector<double>{0.8});
    CHECK_THROWS_AS(parse_grid("0.5:1.0:1"), Error);
    CHECK_THROWS_AS(parse_grid("0.5:1.0"), Error);
}

TEST_CASE("config parsing") {
    ScenarioConfig c = parse_config("# sweep\n"
                                    "scenario = loophole-sweep\n"
                                    "state = singlet\n"
                                    "eta_minus = 0.5:1.0:6   # lost only\n"
                                    "trials = 3\n"
                                    "seed = 18446744073709551615\n");
    CHECK(c.scenario == "loophole-sweep");
    CHECK(c.eta_minus.size() == 6);
    CHECK(c.eta_plus == std::vector<double>{1.0});
    CHECK(c.trials == 3);
    CHECK(c.seed == 18446744073709551615ull);
    CHECK(c.d_a == 2);

    CHECK(parse_error_code("scenario = bogus\n") == ErrorCode::kParse);
    CHECK(parse_error_message("scenario = bogus\n").find("bogus") != std::string::npos);
    CHECK(parse_error_message("scenario = reduction-check\ncolour = red\n").find("colour") != std::string::npos);
    CHECK(parse_error_code("trials = 3\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\ntrials = 3\ntrials = 4\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\ntrials = 0\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\nd_a = 1\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\nd_a = 3\nd_b = 4\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = loophole-sweep\neta_plus = 1.5\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = loophole-sweep\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = mc-events\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\neffects = weird\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\nstate =\n") == ErrorCode::kParse);
    CHECK(parse_error_code("scenario = reduction-check\n") == ErrorCode::kIo);

    for (const auto &name : registered_scenarios()) {
        CHECK_FALSE(scenario_columns(name).empty());
    }
    try {
        load_config_file("/nonexistent/mdinew.cfg");
        FAIL("expected an IO error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kIo);
    }
}

TEST_CASE("records round trip") {
    ResultTable t;
    t.columns = {"a", "b", "c", "d", "e"};
    t.add_row({std::int64_t{-3}, 0.1, true, std::string("x, \"y\""), std::uint64_t{18446744073709551615ull}});
    t.add_row({std::int64_t{7}, 1e-300, false, std::string(""), std::uint64_t{0}});
    t.add_row({std::int64_t{0}, NAN, false, std::string("ok"), std::uint64_t{1}});
    std::string csv = to_csv(t);
    ResultTable back = parse_csv(csv);
    CHECK(back.columns == t.columns);
    CHECK(to_csv(back) == csv);
    CHECK(std::get<double>(back.rows[0][1]) == 0.1);
    CHECK(std::get<std::string>(back.rows[0][3]) == "x, \"y\"");
    CHECK(std::isnan(std::get<double>(back.rows[2][1])));

    ResultTable empty;
    empty.columns = {"x", "y"};
    CHECK(to_csv(empty) == "x,y\n");
    auto doc = nlohmann::json::parse(to_json(empty));
    CHECK(doc["records"].empty());

    auto full = nlohmann::json::parse(to_json(t));
    REQUIRE(full["records"].size() == 3);
    for (const auto &rec : full["records"]) {
        CHECK(rec.size() == t.columns.size());
    }
    CHECK(full["records"][0]["e"].get<std::uint64_t>() == 18446744073709551615ull);
    CHECK_THROWS_AS(t.add_row({std::int64_t{1}}), Error);
}

TEST_CASE("scenario runs are deterministic and complete") {
    const char *configs[] = {
        "scenario = reduction-check\nd_b = 3\nstate = random\ntrials = 5\nseed = 11\n",
        "scenario = separable-positivity\neffects = random\ntrials = 5\nseed = 12\nstate = random\n",
        "scenario = loophole-sweep\neta_plus = 0.6:1.0:3\neta_minus = 0.8:1.0:3\ntrials = 2\nseed = 13\n",
        "scenario = mc-events\nstate = werner(0.9)\neffects = random\nnbar = 10000\ntrials = 3\nseed = 14\n",
        "scenario = noise-sweep\ntrials = 3\nseed = 15\n",
        "scenario = new-vs-ew\ntrials = 3\nseed = 16\n",
    };
    for (const char *text : configs) {
        ScenarioConfig c = parse_config(text);
        CAPTURE(c.scenario);
        ScenarioResult a = run_scenario(c);
        ScenarioResult b = run_scenario(c);
        CHECK(to_csv(a.table) == to_csv(b.table));
        CHECK(to_json(a.table) == to_json(b.table));
        CHECK(a.table.columns == scenario_columns(c.scenario));
        CHECK(a.error_messages.size() == a.error_rows);
        if (c.scenario == "loophole-sweep") {
            CHECK(a.table.rows.size() == static_cast<std::size_t>(c.trials) * 9);
        } else if (c.scenario == "reduction-check" || c.scenario == "separable-positivity" ||
                   c.scenario == "mc-events") {
            CHECK(a.table.rows.size() == static_cast<std::size_t>(c.trials));
        }
        c.seed += 1;
        CHECK(to_csv(run_scenario(c).table) != to_csv(a.table));
    }
}

TEST_CASE("trial failures become error rows") {
    // The singlet has zero outcome probabilities, so event removal is infeasible.
    ScenarioConfig c = parse_config("scenario = mc-events\neta_minus = 0.8\nnbar = 1000\ntrials = 4\n");
    ScenarioResult r = run_scenario(c);
    CHECK(r.table.rows.size() == 4);
    CHECK(r.error_rows == 4);

    // Lost-only certification of the singlet below 3/4 is degenerate.
    ScenarioConfig l = parse_config("scenario = loophole-sweep\neta_minus = 0.5:1.0:6\ntrials = 1\n");
    ScenarioResult lr = run_scenario(l);
    CHECK(lr.table.rows.size() == 6);
    CHECK(lr.error_rows == 3);
    std::size_t certified_col = 7;
    REQUIRE(lr.table.columns[certified_col] == "certified");
    for (std::size_t i = 3; i < 6; ++i) {
        CHECK(std::get<bool>(lr.table.rows[i][certified_col]));
    }
}

TEST_CASE("command line exit codes") {
    fs::path dir = scratch_dir();
    fs::path good = dir / "good.cfg";
    fs::path bad = dir / "bad.cfg";
    fs::path out = dir / "out.csv";
    fs::path out2 = dir / "out2.csv";
    write_file(good, "scenario = reduction-check\ntrials = 3\nseed = 9\n");
    write_file(bad, "scenario = bogus\n");

    CHECK(run_cli("list-scenarios") == 0);
    CHECK(run_cli("validate --config \"" + good.string() + "\"") == 0);
    CHECK(run_cli("validate --config \"" + bad.string() + "\"") == 1);
    CHECK(run_cli("run --config \"" + bad.string() + "\"") == 1);
    CHECK(run_cli("run --config \"" + (dir / "missing.cfg").string() + "\"") == 2);
    CHECK(run_cli("run --config \"" + good.string() + "\" --out /nonexistent/dir/out.csv") == 2);

    CHECK(run_cli("run --config \"" + good.string() + "\" --out \"" + out.string() + "\"") == 0);
    CHECK(run_cli("run --config \"" + good.string() + "\" --out \"" + out2.string() + "\"") == 0);
    std::string first = read_file(out);
    CHECK(first == read_file(out2));
    ResultTable parsed = parse_csv(first);
    CHECK(parsed.rows.size() == 3);

    CHECK(run_cli("run --config \"" + good.string() + "\" --seed 10 --out \"" + out2.string() + "\"") == 0);
    CHECK(read_file(out2) != first);

    fs::path js = dir / "out.json";
    CHECK(run_cli("run --config \"" + good.string() + "\" --format json --out \"" + js.string() + "\"") == 0);
    auto doc = nlohmann::json::parse(read_file(js));
    CHECK(doc["records"].size() == 3);
    CHECK(doc["columns"].get<std::vector<std::string>>() == scenario_columns("reduction-check"));
}
