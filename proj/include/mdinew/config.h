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

#ifndef MDINEW_CONFIG_H
#define MDINEW_CONFIG_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mdinew {

/// `name` or `name(p1, p2, ...)`, as used for states and channels in configs.
struct CallSpec {
    std::string name;
    std::vector<double> params;
};

CallSpec parse_call_spec(std::string_view text);

/// Scalar `x` or linear grid `start:stop:steps` (steps >= 2).
std::vector<double> parse_grid(std::string_view text);

const std::vector<std::string> &registered_scenarios();

struct ScenarioConfig {
    std::string scenario;
    int d_a = 2;
    int d_b = 2;
    std::string state = "singlet";        // named state, `random`, or `file:<path>`
    std::string psi_choice = "default";   // default | product | file:<path>
    std::string effects = "max_entangled";  // max_entangled | random | file:<path>
    std::vector<double> eta_plus{1.0};
    std::vector<double> eta_minus{1.0};
    std::int64_t nbar = 0;  // 0 selects exact (analytic) counts where allowed
    int trials = 100;
    std::uint64_t seed = 0;
    std::string noise = "none";  // none, a channel call spec, or file:<path>
    std::string out;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, repeated
/// keys, malformed values and missing scenario-specific keys are kParse
/// errors.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string &path);

}  // namespace mdinew

#endif
