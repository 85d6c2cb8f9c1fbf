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

#include "mdinew/loophole.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "mdinew/error.h"

namespace mdinew {

namespace {

bool valid_efficiency(double eta) {
    return eta > 0.0 && eta <= 1.0;
}

std::array<std::int64_t, 4> spread_evenly(std::int64_t total, Rng &rng) {
    std::array<std::int64_t, 4> out;
    out.fill(total / 4);
    std::array<int, 4> order{0, 1, 2, 3};
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::int64_t k = 0; k < total % 4; ++k) {
        out[order[k]] += 1;
    }
    return out;
}

std::array<std::int64_t, 4> multinomial(std::int64_t n, const OutcomeDistribution &p, Rng &rng) {
    std::array<std::int64_t, 4> out{};
    std::int64_t remaining = n;
    double mass = 1.0;
    for (int k = 0; k < 3; ++k) {
        double q = mass > 0 ? std::clamp(std::max(p[k], 0.0) / mass, 0.0, 1.0) : 0.0;
        std::int64_t draw = remaining > 0 ? std::binomial_distribution<std::int64_t>(remaining, q)(rng.engine()) : 0;
        out[k] = draw;
        remaining -= draw;
        mass -= std::max(p[k], 0.0);
    }
    out[3] = remaining;
    return out;
}

}  // namespace

const char *efficiency_case_name(EfficiencyCase c) {
    switch (c) {
        case EfficiencyCase::kLostOnly:
            return "lost_only";
        case EfficiencyCase::kAdditionalOnly:
            return "additional_only";
        case EfficiencyCase::kGeneral:
            return "general";
    }
    return "unknown";
}

EfficiencyModel::EfficiencyModel(double eta_plus, double eta_minus, std::int64_t nbar, EfficiencyCase kind)
    : eta_plus_(eta_plus), eta_minus_(eta_minus), nbar_(nbar), kind_(kind) {
    if (!valid_efficiency(eta_plus_) || !valid_efficiency(eta_minus_)) {
        throw Error(ErrorCode::kInvalidArgument, "efficiencies must lie in (0, 1]");
    }
    if (nbar_ < 0) {
        throw Error(ErrorCode::kInvalidArgument, "nbar must be nonnegative");
    }
    if (kind_ == EfficiencyCase::kLostOnly && eta_plus_ != 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "lost_only model requires eta_plus = 1");
    }
    if (kind_ == EfficiencyCase::kAdditionalOnly && eta_minus_ != 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "additional_only model requires eta_minus = 1");
    }
}

EfficiencyModel EfficiencyModel::lost_only(double eta_minus, std::int64_t nbar) {
    return EfficiencyModel(1.0, eta_minus, nbar, EfficiencyCase::kLostOnly);
}

EfficiencyModel EfficiencyModel::additional_only(double eta_plus, std::int64_t nbar) {
    return EfficiencyModel(eta_plus, 1.0, nbar, EfficiencyCase::kAdditionalOnly);
}

EfficiencyModel EfficiencyModel::general(double eta_plus, double eta_minus, std::int64_t nbar) {
    return EfficiencyModel(eta_plus, eta_minus, nbar, EfficiencyCase::kGeneral);
}

EfficiencyModel EfficiencyModel::classify(double eta_plus, double eta_minus, std::int64_t nbar) {
    if (eta_plus == 1.0) {
        return lost_only(eta_minus, nbar);
    }
    if (eta_minus == 1.0) {
        return additional_only(eta_plus, nbar);
    }
    return general(eta_plus, eta_minus, nbar);
}

double EfficiencyModel::c() const {
    // Grouped so that a unit efficiency drops out exactly.
    return 1.0 / (eta_minus_ + (1.0 / eta_plus_ - 1.0));
}

double corrupt_probability(double p_ideal, const EfficiencyModel &model) {
    const double shift = (model.eta_minus() - 1.0) + (1.0 / model.eta_plus() - 1.0);
    return model.c() * (p_ideal + shift / 4.0);
}

double corrupt_lost_only(double p_ideal, double eta_minus) {
    double p = corrupt_probability(p_ideal, EfficiencyModel::lost_only(eta_minus));
    assert(std::abs(p - (p_ideal / eta_minus - (1.0 - eta_minus) / (4.0 * eta_minus))) <= 1e-14);
    return p;
}

double corrupt_additional_only(double p_ideal, double eta_plus) {
    double p = corrupt_probability(p_ideal, EfficiencyModel::additional_only(eta_plus));
    assert(std::abs(p - eta_plus * (p_ideal + (1.0 - eta_plus) / (4.0 * eta_plus))) <= 1e-14);
    return p;
}

OutcomeDistribution corrupt_distribution(const OutcomeDistribution &p, const EfficiencyModel &model) {
    OutcomeDistribution out;
    for (int k = 0; k < 4; ++k) {
        out[k] = corrupt_probability(p[k], model);
    }
    return out;
}

ProbabilityTable corrupt_table(const ProbabilityTable &table, const EfficiencyModel &model) {
    if (table.provenance() != Provenance::kIdeal) {
        throw Error(ErrorCode::kInvalidArgument, "corrupt_table: input table must be ideal");
    }
    std::vector<OutcomeDistribution> rows;
    rows.reserve(table.rows().size());
    for (const auto &r : table.rows()) {
        rows.push_back(corrupt_distribution(r, model));
    }
    return ProbabilityTable(table.d_a(), table.d_b(), table.size_a(), table.size_b(), std::move(rows),
                            corrupt_distribution(table.mm(), model), Provenance::kCorrupted);
}

CorruptionOffsets offsets(const CoefficientSums &sums, const EfficiencyModel &model) {
    const double c = model.c();
    const double scale = (1.0 - c) / 4.0;
    return {sums.alpha * scale, sums.beta * scale, sums.gamma * scale, c};
}

double certification_bound(const ProbabilityTable &measured, const WitnessBundle &bundle,
                           const EfficiencyModel &model) {
    const CorruptionOffsets off = offsets(bundle.coeff_sums, model);
    const double pmm = measured.p11_mm();
    const double first_den = bundle.k * (pmm - (1.0 - off.c) / 4.0);
    const double second_den = bundle.k * pmm;
    if (!(first_den > kDegenerateTol)) {
        throw Error(ErrorCode::kDegenerateDenominator,
                    "K [(P11^mm)_m - (1 - C)/4] = " + std::to_string(first_den) + " is not positive");
    }
    if (!(second_den > kDegenerateTol)) {
        throw Error(ErrorCode::kDegenerateDenominator,
                    "K (P11^mm)_m = " + std::to_string(second_den) + " is not positive");
    }
    const double ib = i_alpha(measured, bundle.beta);
    const double ig = i_alpha(measured, bundle.gamma);
    const double shifted = (ib - off.beta) * (ib - off.beta) + (ig - off.gamma) * (ig - off.gamma);
    const double rhs = shifted / first_den - (ib * ib + ig * ig) / second_den + off.alpha;

    if (model.kind() == EfficiencyCase::kLostOnly) {
        const double em = model.eta_minus();
        const double lost_form =
            em / (bundle.k * (em * pmm + (1.0 - em) / 4.0)) * shifted - (ib * ib + ig * ig) / second_den + off.alpha;
        if (std::abs(lost_form - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
            throw Error(ErrorCode::kResidualTooLarge, "lost-event bound disagrees with general form");
        }
    }
    return rhs;
}

Verdict certify(const ProbabilityTable &measured, const WitnessBundle &bundle, const EfficiencyModel &model) {
    Verdict v;
    v.bound_rhs = certification_bound(measured, bundle, model);
    v.n_measured = n_phi(measured, bundle);
    v.certified = v.n_measured < v.bound_rhs;
    v.margin = v.bound_rhs - v.n_measured;
    return v;
}

EventSimulation simulate_events(const OutcomeDistribution &ideal, const EfficiencyModel &model, Rng &rng) {
    if (model.nbar() <= 0) {
        throw Error(ErrorCode::kInvalidArgument, "simulate_events: nbar must be positive");
    }
    const double sum = ideal[0] + ideal[1] + ideal[2] + ideal[3];
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorCode::kInvalidArgument, "simulate_events: ideal distribution is not normalized");
    }
    const std::int64_t nbar = model.nbar();
    EventSimulation sim;
    EventCounts &ec = sim.counts;
    ec.ideal = multinomial(nbar, ideal, rng);

    const auto lost = static_cast<std::int64_t>(std::llround((1.0 - model.eta_minus()) * static_cast<double>(nbar)));
    const auto added = static_cast<std::int64_t>(
        std::llround(static_cast<double>(nbar) * (1.0 - model.eta_plus()) / model.eta_plus()));

    bool feasible = false;
    for (int attempt = 0; attempt < 100 && !feasible; ++attempt) {
        ec.eps_minus = spread_evenly(lost, rng);
        feasible = true;
        for (int k = 0; k < 4; ++k) {
            feasible = feasible && ec.eps_minus[k] <= ec.ideal[k];
        }
    }
    if (!feasible) {
        throw Error(ErrorCode::kInfeasibleRemoval,
                    "cannot remove " + std::to_string(lost) + " events evenly from ideal counts");
    }
    ec.eps_plus = spread_evenly(added, rng);
    for (int k = 0; k < 4; ++k) {
        ec.counts[k] = ec.ideal[k] + ec.eps_plus[k] - ec.eps_minus[k];
    }
    const std::int64_t total = ec.total();
    if (total <= 0) {
        throw Error(ErrorCode::kInfeasibleRemoval, "no events left after removal");
    }
    for (int k = 0; k < 4; ++k) {
        sim.measured[k] = static_cast<double>(ec.counts[k]) / static_cast<double>(total);
    }
    return sim;
}

ProbabilityTable simulate_table(const ProbabilityTable &ideal, const EfficiencyModel &model, std::uint64_t seed) {
    std::vector<OutcomeDistribution> rows;
    rows.reserve(ideal.rows().size());
    std::uint64_t index = 0;
    for (const auto &r : ideal.rows()) {
        Rng rng = Rng::substream(seed, {index++});
        rows.push_back(simulate_events(r, model, rng).measured);
    }
    Rng rng = Rng::substream(seed, {index});
    OutcomeDistribution mm = simulate_events(ideal.mm(), model, rng).measured;
    return ProbabilityTable(ideal.d_a(), ideal.d_b(), ideal.size_a(), ideal.size_b(), std::move(rows), mm,
                            Provenance::kMeasured);
}

bool certified_at(const ProbabilityTable &ideal, const WitnessBundle &bundle, double eta_plus, double eta_minus,
                  const CountingMode &mode) {
    try {
        EfficiencyModel model = EfficiencyModel::classify(eta_plus, eta_minus, mode.nbar);
        ProbabilityTable measured =
            mode.nbar > 0 ? simulate_table(ideal, model, mode.seed) : corrupt_table(ideal, model);
        return certify(measured, bundle, model).certified;
    } catch (const Error &e) {
        if (e.code() == ErrorCode::kInfeasibleRemoval || e.code() == ErrorCode::kDegenerateDenominator) {
            return false;
        }
        throw;
    }
}

CriticalEfficiency critical_efficiency(const ProbabilityTable &ideal, const WitnessBundle &bundle, VaryEfficiency vary,
                                       double fixed_other, const CountingMode &mode) {
    if (!valid_efficiency(fixed_other)) {
        throw Error(ErrorCode::kInvalidArgument, "critical_efficiency: fixed efficiency must lie in (0, 1]");
    }
    auto check = [&](double eta) {
        return vary == VaryEfficiency::kPlus ? certified_at(ideal, bundle, eta, fixed_other, mode)
                                             : certified_at(ideal, bundle, fixed_other, eta, mode);
    };

    std::array<double, kCriticalGridPoints> grid;
    std::array<bool, kCriticalGridPoints> ok;
    for (int k = 0; k < kCriticalGridPoints; ++k) {
        grid[k] = kEfficiencyFloor + (1.0 - kEfficiencyFloor) * k / (kCriticalGridPoints - 1);
    }
    grid[kCriticalGridPoints - 1] = 1.0;
    for (int k = 0; k < kCriticalGridPoints; ++k) {
        ok[k] = check(grid[k]);
    }
    if (!ok[kCriticalGridPoints - 1]) {
        throw Error(ErrorCode::kNeverCertified, "state is not certified at unit efficiency");
    }

    // Last grid index that fails; everything above it certifies.
    int last_fail = -1;
    int fail_count = 0;
    for (int k = 0; k < kCriticalGridPoints; ++k) {
        if (!ok[k]) {
            last_fail = k;
            ++fail_count;
        }
    }
    CriticalEfficiency out;
    if (last_fail < 0) {
        out.value = kEfficiencyFloor;
        out.at_floor = true;
        return out;
    }
    out.monotone = fail_count == last_fail + 1;
    if (!out.monotone) {
        out.value = grid[last_fail + 1];
        return out;
    }
    double lo = grid[last_fail];
    double hi = grid[last_fail + 1];
    while (hi - lo > kBisectionTol) {
        double mid = 0.5 * (lo + hi);
        if (check(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.value = hi;
    return out;
}

}  // namespace mdinew
