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

#ifndef MDINEW_SCENARIOS_H
#define MDINEW_SCENARIOS_H

#include <cstddef>
#include <string>
#include <vector>

#include "mdinew/config.h"
#include "mdinew/records.h"

namespace mdinew {

struct ScenarioResult {
    ResultTable table;
    std::size_t error_rows = 0;
    std::vector<std::string> error_messages;  // one per error row, in row order
};

/// Fixed column set of a scenario's records.
std::vector<std::string> scenario_columns(const std::string &scenario);

/// Runs a validated config. Failures while resolving the state, effects,
/// witness or noise are thrown; failures inside a trial become error rows.
ScenarioResult run_scenario(const ScenarioConfig &config);

}  // namespace mdinew

#endif
