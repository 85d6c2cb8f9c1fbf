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

#ifndef MDINEW_LOOPHOLE_H
#define MDINEW_LOOPHOLE_H

#include <array>
#include <cstdint>

#include "mdinew/protocol.h"
#include "mdinew/rng.h"
#include "mdinew/witness.h"

namespace mdinew {

enum class EfficiencyCase { kLostOnly, kAdditionalOnly, kGeneral };

const char *efficiency_case_name(EfficiencyCase c);

/// Detection efficiencies. eta_plus = N/(N + E+) accounts for additional
/// events, eta_minus = (N - E-)/N for lost ones. nbar is the ideal number of
/// events per input pair; 0 means the model is only used analytically.
class EfficiencyModel {
   public:
    EfficiencyModel(double eta_plus, double eta_minus, std::int64_t nbar, EfficiencyCase kind);

    static EfficiencyModel lost_only(double eta_minus, std::int64_t nbar = 0);
    static EfficiencyModel additional_only(double eta_plus, std::int64_t nbar = 0);
    static EfficiencyModel general(double eta_plus, double eta_minus, std::int64_t nbar = 0);
    /// Picks the narrowest case consistent with the two efficiencies.
    static EfficiencyModel classify(double eta_plus, double eta_minus, std::int64_t nbar = 0);

    double eta_plus() const {
        return eta_plus_;
    }
    double eta_minus() const {
        return eta_minus_;
    }
    std::int64_t nbar() const {
        return nbar_;
    }
    EfficiencyCase kind() const {
        return kind_;
    }

    /// C = (eta_minus + 1/eta_plus - 1)^-1
    double c() const;

   private:
    double eta_plus_;
    double eta_minus_;
    std::int64_t nbar_;
    EfficiencyCase kind_;
};

/// P_m = C [P_i + (eta_minus + 1/eta_plus - 2)/4], i.e. C P_i + (1 - C)/4.
double corrupt_probability(double p_ideal, const EfficiencyModel &model);

/// Lost events only: P_i/eta_minus - (1 - eta_minus)/(4 eta_minus).
double corrupt_lost_only(double p_ideal, double eta_minus);
/// Additional events only: eta_plus [P_i + (1 - eta_plus)/(4 eta_plus)].
double corrupt_additional_only(double p_ideal, double eta_plus);

OutcomeDistribution corrupt_distribution(const OutcomeDistribution &p, const EfficiencyModel &model);

/// Applies the transform to every outcome of every input pair and the mm row.
/// Lost-event corruption of small probabilities can leave [0, 1]; those
/// tables describe removals the counts could not support.
ProbabilityTable corrupt_table(const ProbabilityTable &table, const EfficiencyModel &model);

struct CorruptionOffsets {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
    double c = 1;
};

/// (I_c)_m = C (I_c)_i + offset_c with offset_c = (sum c / 4)(1 - C).
CorruptionOffsets offsets(const CoefficientSums &sums, const EfficiencyModel &model);

/// Right-hand side of the loophole-corrected certification condition
/// N_m < RHS. Throws kDegenerateDenominator when either denominator is not
/// positive.
double certification_bound(const ProbabilityTable &measured, const WitnessBundle &bundle,
                           const EfficiencyModel &model);

struct Verdict {
    double n_measured = 0;
    double bound_rhs = 0;
    bool certified = false;
    double margin = 0;  // bound_rhs - n_measured
};

Verdict certify(const ProbabilityTable &measured, const WitnessBundle &bundle, const EfficiencyModel &model);

struct EventCounts {
    std::array<std::int64_t, 4> ideal{};
    std::array<std::int64_t, 4> counts{};
    std::array<std::int64_t, 4> eps_plus{};
    std::array<std::int64_t, 4> eps_minus{};

    std::int64_t total() const {
        return counts[0] + counts[1] + counts[2] + counts[3];
    }
};

struct EventSimulation {
    EventCounts counts;
    OutcomeDistribution measured{};
};

/// Draws nbar ideal events, removes round((1 - eta_minus) nbar) and adds
/// round(nbar (1 - eta_plus)/eta_plus) events spread evenly over the four
/// outcomes. Remainders go to outcomes chosen at random.
EventSimulation simulate_events(const OutcomeDistribution &ideal, const EfficiencyModel &model, Rng &rng);

/// Event-level counterpart of corrupt_table. Each input pair uses its own
/// substream of `seed`, so the ideal draws are shared between models.
ProbabilityTable simulate_table(const ProbabilityTable &ideal, const EfficiencyModel &model, std::uint64_t seed);

enum class VaryEfficiency { kPlus, kMinus };

struct CountingMode {
    std::int64_t nbar = 0;  // 0: exact analytic corruption
    std::uint64_t seed = 0;
};

struct CriticalEfficiency {
    double value = 1;
    bool monotone = true;
    bool at_floor = false;
};

inline constexpr double kEfficiencyFloor = 1e-4;
inline constexpr double kBisectionTol = 1e-4;
inline constexpr int kCriticalGridPoints = 32;

/// Whether `certify` succeeds for the table corrupted at (eta_plus, eta_minus).
/// Event-level infeasibility and degenerate bounds count as not certified.
bool certified_at(const ProbabilityTable &ideal, const WitnessBundle &bundle, double eta_plus, double eta_minus,
                  const CountingMode &mode);

/// Smallest value of the varied efficiency at which certification still
/// holds, to within kBisectionTol.
CriticalEfficiency critical_efficiency(const ProbabilityTable &ideal, const WitnessBundle &bundle, VaryEfficiency vary,
                                       double fixed_other, const CountingMode &mode);

}  // namespace mdinew

#endif
