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

#include "mdinew/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mdinew/error.h"

namespace mdinew {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(std::string_view text, const std::string &what) {
    std::string t = trim(text);
    double v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw Error(ErrorCode::kParse, what + ": '" + t + "' is not a number");
    }
    return v;
}

template <typename Int>
Int parse_integer(std::string_view text, const std::string &what) {
    std::string t = trim(text);
    Int v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw Error(ErrorCode::kParse, what + ": '" + t + "' is not an integer");
    }
    return v;
}

bool has_file_prefix(const std::string &v) {
    return v.rfind("file:", 0) == 0 && v.size() > 5;
}

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys{"scenario", "d_a",   "d_b",  "state",  "psi_choice", "effects", "eta_plus",
                                            "eta_minus", "nbar", "trials", "seed", "noise",      "out"};
    return keys;
}

}  // namespace

CallSpec parse_call_spec(std::string_view text) {
    std::string t = trim(text);
    CallSpec spec;
    const auto open = t.find('(');
    if (open == std::string::npos) {
        spec.name = t;
    } else {
        if (t.back() != ')') {
            throw Error(ErrorCode::kParse, "'" + t + "' is missing a closing parenthesis");
        }
        spec.name = trim(std::string_view(t).substr(0, open));
        std::string inner = t.substr(open + 1, t.size() - open - 2);
        if (!trim(inner).empty()) {
            std::stringstream ss(inner);
            std::string item;
            while (std::getline(ss, item, ',')) {
                spec.params.push_back(parse_number(item, "parameter of " + spec.name));
            }
        }
    }
    if (spec.name.empty()) {
        throw Error(ErrorCode::kParse, "empty name in '" + t + "'");
    }
    return spec;
}

std::vector<double> parse_grid(std::string_view text) {
    std::string t = trim(text);
    if (std::count(t.begin(), t.end(), ':') == 0) {
        return {parse_number(t, "grid")};
    }
    std::vector<std::string> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw Error(ErrorCode::kParse, "grid '" + t + "' must be start:stop:steps");
    }
    const double start = parse_number(parts[0], "grid start");
    const double stop = parse_number(parts[1], "grid stop");
    const int steps = parse_integer<int>(parts[2], "grid steps");
    if (steps < 2) {
        throw Error(ErrorCode::kParse, "grid '" + t + "' needs at least 2 steps");
    }
    std::vector<double> grid(steps);
    for (int k = 0; k < steps; ++k) {
        grid[k] = start + (stop - start) * k / (steps - 1);
    }
    grid.back() = stop;
    return grid;
}

const std::vector<std::string> &registered_scenarios() {
    static const std::vector<std::string> names{"reduction-check", "separable-positivity", "loophole-sweep",
                                                "mc-events",       "noise-sweep",          "new-vs-ew"};
    return names;
}

ScenarioConfig parse_config(std::string_view text) {
    std::map<std::string, std::string> values;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": expected `key = value`");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!known_keys().contains(key)) {
            throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw Error(ErrorCode::kParse, "key '" + key + "' has an empty value");
        }
        if (!values.emplace(key, value).second) {
            throw Error(ErrorCode::kParse, "key '" + key + "' given twice");
        }
    }

    ScenarioConfig cfg;
    auto it = values.find("scenario");
    if (it == values.end()) {
        throw Error(ErrorCode::kParse, "missing required key 'scenario'");
    }
    const auto &names = registered_scenarios();
    if (std::find(names.begin(), names.end(), it->second) == names.end()) {
        throw Error(ErrorCode::kParse, "key 'scenario': unknown scenario '" + it->second + "'");
    }
    cfg.scenario = it->second;

    for (const auto &[key, value] : values) {
        if (key == "d_a") {
            cfg.d_a = parse_integer<int>(value, key);
        } else if (key == "d_b") {
            cfg.d_b = parse_integer<int>(value, key);
        } else if (key == "state") {
            cfg.state = value;
        } else if (key == "psi_choice") {
            cfg.psi_choice = value;
        } else if (key == "effects") {
            cfg.effects = value;
        } else if (key == "eta_plus") {
            cfg.eta_plus = parse_grid(value);
        } else if (key == "eta_minus") {
            cfg.eta_minus = parse_grid(value);
        } else if (key == "nbar") {
            cfg.nbar = parse_integer<std::int64_t>(value, key);
        } else if (key == "trials") {
            cfg.trials = parse_integer<int>(value, key);
        } else if (key == "seed") {
            cfg.seed = parse_integer<std::uint64_t>(value, key);
        } else if (key == "noise") {
            cfg.noise = value;
        } else if (key == "out") {
            cfg.out = value;
        }
    }

    if (cfg.d_a < 2 || cfg.d_b < 2 || cfg.d_a * cfg.d_b > 9) {
        throw Error(ErrorCode::kParse, "d_a and d_b must be >= 2 with d_a * d_b <= 9");
    }
    if (cfg.trials < 1) {
        throw Error(ErrorCode::kParse, "key 'trials' must be >= 1");
    }
    if (cfg.nbar < 0) {
        throw Error(ErrorCode::kParse, "key 'nbar' must be >= 0");
    }
    for (const auto *grid : {&cfg.eta_plus, &cfg.eta_minus}) {
        for (double eta : *grid) {
            if (!(eta > 0.0 && eta <= 1.0)) {
                throw Error(ErrorCode::kParse, "efficiencies must lie in (0, 1]");
            }
        }
    }
    if (cfg.psi_choice != "default" && cfg.psi_choice != "product" && !has_file_prefix(cfg.psi_choice)) {
        throw Error(ErrorCode::kParse, "key 'psi_choice' must be default, product or file:<path>");
    }
    if (cfg.effects != "max_entangled" && cfg.effects != "random" && !has_file_prefix(cfg.effects)) {
        throw Error(ErrorCode::kParse, "key 'effects' must be max_entangled, random or file:<path>");
    }
    if (!has_file_prefix(cfg.state)) {
        parse_call_spec(cfg.state);
    }
    if (cfg.noise != "none" && !has_file_prefix(cfg.noise)) {
        parse_call_spec(cfg.noise);
    }

    if (cfg.scenario == "mc-events" && !values.contains("nbar")) {
        throw Error(ErrorCode::kParse, "scenario mc-events requires key 'nbar'");
    }
    if (cfg.scenario == "mc-events" && cfg.nbar < 1) {
        throw Error(ErrorCode::kParse, "scenario mc-events requires nbar >= 1");
    }
    if (cfg.scenario == "loophole-sweep" && !values.contains("eta_plus") && !values.contains("eta_minus")) {
        throw Error(ErrorCode::kParse, "scenario loophole-sweep requires key 'eta_plus' or 'eta_minus'");
    }
    return cfg;
}

ScenarioConfig load_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mdinew
