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

#include "mdinew/error.h"
#include "mdinew/loophole.h"
#include "mdinew/protocol.h"
#include "mdinew/rng.h"
#include "mdinew/states.h"
#include "mdinew/witness.h"

using namespace mdinew;

namespace {

// Specialized transforms written out independently.
double lost_form(double p, double em) {
    return p / em - (1.0 - em) / (4.0 * em);
}

double additional_form(double p, double ep) {
    return ep * (p + (1.0 - ep) / (4.0 * ep));
}

WitnessBundle random_bundle(const DimSpec &dims, const InputBasis &basis, Rng &rng) {
    for (;;) {
        DensityMatrix rt = random_density(dims, rng);
        if (min_pt_eigenvalue(rt.mat(), dims) < -kNptTol) {
            return make_bundle(rt, PsiChoice{}, basis);
        }
    }
}

EfficiencyModel random_model(int which, Rng &rng) {
    const double ep = rng.uniform(0.3, 1.0);
    const double em = rng.uniform(0.3, 1.0);
    switch (which % 3) {
        case 0:
            return EfficiencyModel::lost_only(em);
        case 1:
            return EfficiencyModel::additional_only(ep);
        default:
            return EfficiencyModel::general(ep, em);
    }
}

double sigma_of(double p, std::int64_t nbar, std::int64_t total) {
    return std::sqrt(static_cast<double>(nbar) * p * (1.0 - p)) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("efficiency model validation") {
    CHECK_THROWS_AS(EfficiencyModel::lost_only(0.0), Error);
    CHECK_THROWS_AS(EfficiencyModel::lost_only(1.2), Error);
    CHECK_THROWS_AS(EfficiencyModel(0.9, 0.9, 0, EfficiencyCase::kLostOnly), Error);
    CHECK_THROWS_AS(EfficiencyModel(0.9, 0.9, 0, EfficiencyCase::kAdditionalOnly), Error);
    CHECK_THROWS_AS(EfficiencyModel::general(0.9, 0.9, -1), Error);
    CHECK(EfficiencyModel::classify(1.0, 0.7).kind() == EfficiencyCase::kLostOnly);
    CHECK(EfficiencyModel::classify(0.7, 1.0).kind() == EfficiencyCase::kAdditionalOnly);
    CHECK(EfficiencyModel::classify(0.7, 0.7).kind() == EfficiencyCase::kGeneral);

    CHECK(EfficiencyModel::lost_only(0.8).c() == doctest::Approx(1.25));
    CHECK(EfficiencyModel::additional_only(0.8).c() == doctest::Approx(0.8));
    CHECK(EfficiencyModel::general(0.5, 0.5).c() == doctest::Approx(2.0 / 3.0));
    // C exceeds 1 whenever only events are lost.
    CHECK(EfficiencyModel::lost_only(0.5).c() > 1.0);
}

TEST_CASE("corrupt probability anchors") {
    for (double p : {0.0, 0.1, 0.5, 1.0}) {
        CHECK(corrupt_probability(p, EfficiencyModel::general(1.0, 1.0)) == p);
    }
    Rng rng(1);
    for (int k = 0; k < 50; ++k) {
        EfficiencyModel m = random_model(k, rng);
        CHECK(corrupt_probability(0.25, m) == doctest::Approx(0.25).epsilon(1e-14));
    }
    CHECK(corrupt_probability(0.5, EfficiencyModel::lost_only(0.8)) == doctest::Approx(0.5625).epsilon(1e-15));
    CHECK(corrupt_lost_only(0.5, 0.8) == doctest::Approx(0.5625).epsilon(1e-15));
}

TEST_CASE("general transform specializes exactly") {
    Rng rng(2);
    double worst_lost = 0;
    double worst_add = 0;
    for (int k = 0; k < 1000; ++k) {
        const double p = rng.uniform();
        const double eta = rng.uniform(0.5, 1.0);
        worst_lost = std::max(worst_lost,
                              std::abs(corrupt_probability(p, EfficiencyModel::general(1.0, eta)) - lost_form(p, eta)));
        worst_add = std::max(
            worst_add, std::abs(corrupt_probability(p, EfficiencyModel::general(eta, 1.0)) - additional_form(p, eta)));
        CHECK(corrupt_additional_only(p, eta) == doctest::Approx(additional_form(p, eta)).epsilon(1e-14));
    }
    CHECK(worst_lost <= 1e-15);
    CHECK(worst_add <= 1e-15);
}

TEST_CASE("offsets") {
    CoefficientSums sums{0.7, -0.3, 1.9};
    CorruptionOffsets zero = offsets(sums, EfficiencyModel::lost_only(1.0));
    CHECK(zero.alpha == 0.0);
    CHECK(zero.beta == 0.0);
    CHECK(zero.gamma == 0.0);

    Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const double em = rng.uniform(0.05, 1.0);
        CorruptionOffsets g = offsets(sums, EfficiencyModel::general(1.0, em));
        const double pc = (em - 1.0) / (4.0 * em);
        CHECK(std::abs(g.alpha - pc * sums.alpha) <= 1e-15 * std::max(1.0, std::abs(pc * sums.alpha)) * 4);
        CHECK(std::abs(g.gamma - pc * sums.gamma) <= 1e-15 * std::max(1.0, std::abs(pc * sums.gamma)) * 4);

        const double ep = rng.uniform(0.05, 1.0);
        CorruptionOffsets a = offsets(sums, EfficiencyModel::additional_only(ep));
        CHECK(a.beta == doctest::Approx((1.0 - ep) / 4.0 * sums.beta).epsilon(1e-13));
    }
    CorruptionOffsets none = offsets(CoefficientSums{}, EfficiencyModel::general(0.4, 0.6));
    CHECK(none.alpha == 0.0);
    CHECK(none.beta == 0.0);
    CHECK(none.gamma == 0.0);
}

TEST_CASE("corrupt table") {
    Rng rng(4);
    InputBasis basis = standard_input_basis(2, 2);
    DensityMatrix rho = random_density(DimSpec{2, 2}, rng);
    PovmEffect a1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
    PovmEffect b1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
    ProbabilityTable ideal = build_table(rho, basis, a1, b1);
    WitnessBundle bundle = random_bundle(DimSpec{2, 2}, basis, rng);

    ProbabilityTable same = corrupt_table(ideal, EfficiencyModel::general(1.0, 1.0));
    CHECK(same.provenance() == Provenance::kCorrupted);
    for (std::size_t r = 0; r < ideal.rows().size(); ++r) {
        CHECK(same.rows()[r] == ideal.rows()[r]);
    }
    CHECK_THROWS_AS(corrupt_table(same, EfficiencyModel::general(1.0, 1.0)), Error);

    for (int k = 0; k < 60; ++k) {
        EfficiencyModel m = random_model(k, rng);
        ProbabilityTable c = corrupt_table(ideal, m);
        CHECK(c.normalization_defect() <= 1e-12);
        CorruptionOffsets off = offsets(bundle.coeff_sums, m);
        // Linearity against a direct summation over the corrupted grid.
        for (auto [grid, o] : {std::pair{&bundle.alpha, off.alpha}, {&bundle.beta, off.beta},
                               {&bundle.gamma, off.gamma}}) {
            double direct = 0;
            for (int s = 0; s < 4; ++s) {
                for (int t = 0; t < 4; ++t) {
                    direct += (*grid)(s, t) * c.p11(s, t);
                }
            }
            CHECK(std::abs(direct - (m.c() * i_alpha(ideal, *grid) + o)) <= 1e-12);
        }
        // Entries stay in [0,1] whenever the model never removes more than it adds.
        if (m.c() <= 1.0) {
            for (const auto &row : c.rows()) {
                for (double p : row) {
                    CHECK(p >= -1e-12);
                    CHECK(p <= 1.0 + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("bound anchors") {
    Rng rng(5);
    InputBasis basis = standard_input_basis(2, 2);
    for (int k = 0; k < 20; ++k) {
        DensityMatrix rho = random_density(DimSpec{2, 2}, rng);
        PovmEffect a1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
        PovmEffect b1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
        ProbabilityTable ideal = build_table(rho, basis, a1, b1);
        WitnessBundle bundle = random_bundle(DimSpec{2, 2}, basis, rng);
        EfficiencyModel unit = EfficiencyModel::general(1.0, 1.0);
        CHECK(std::abs(certification_bound(corrupt_table(ideal, unit), bundle, unit)) <= 1e-12);

        WitnessBundle flat = bundle;
        flat.beta.setZero();
        flat.gamma.setZero();
        flat.coeff_sums.beta = flat.coeff_sums.gamma = 0;
        EfficiencyModel m = EfficiencyModel::general(0.7, 0.8);
        CHECK(certification_bound(corrupt_table(ideal, m), flat, m) ==
              doctest::Approx(offsets(flat.coeff_sums, m).alpha).epsilon(1e-12));
    }
}

TEST_CASE("sign preservation identity") {
    Rng rng(6);
    int checked = 0;
    int degenerate = 0;
    for (int k = 0; checked < 300; ++k) {
        const DimSpec dims = k % 2 ? DimSpec{2, 3} : DimSpec{2, 2};
        InputBasis basis = standard_input_basis(dims[0], dims[1]);
        DensityMatrix rho = random_density(dims, rng);
        PovmEffect a1 = random_dichotomic_effect(DimSpec{dims[0], dims[0]}, rng);
        PovmEffect b1 = random_dichotomic_effect(DimSpec{dims[1], dims[1]}, rng);
        ProbabilityTable ideal = build_table(rho, basis, a1, b1);
        WitnessBundle bundle = random_bundle(dims, basis, rng);
        EfficiencyModel m = random_model(k, rng);
        ProbabilityTable measured = corrupt_table(ideal, m);
        try {
            Verdict v = certify(measured, bundle, m);
            const double n_ideal = n_phi(ideal, bundle);
            CHECK(std::abs((v.n_measured - v.bound_rhs) - m.c() * n_ideal) <= 1e-10);
            CHECK(v.certified == (n_ideal < 0.0));
            CHECK(v.margin == doctest::Approx(v.bound_rhs - v.n_measured));
            ++checked;
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::kDegenerateDenominator);
            ++degenerate;
        }
    }
    CHECK(checked == 300);
    MESSAGE("degenerate models skipped: " << degenerate);
}

TEST_CASE("lost-event bound form agrees with the general form") {
    Rng rng(7);
    InputBasis basis = standard_input_basis(2, 2);
    PovmEffect me = max_entangled_effect(2);
    DensityMatrix singlet = named_state("singlet");
    WitnessBundle bundle = make_bundle(singlet, PsiChoice{}, basis);
    ProbabilityTable ideal = build_table(singlet, basis, me, me);
    for (double em : {0.8, 0.9, 0.95, 1.0}) {
        EfficiencyModel m = EfficiencyModel::lost_only(em);
        CHECK_NOTHROW(certification_bound(corrupt_table(ideal, m), bundle, m));
    }
}

TEST_CASE("certify examples") {
    InputBasis basis = standard_input_basis(2, 2);
    PovmEffect me = max_entangled_effect(2);
    DensityMatrix singlet = named_state("singlet");
    WitnessBundle bundle = make_bundle(singlet, PsiChoice{}, basis);
    ProbabilityTable ideal = build_table(singlet, basis, me, me);

    EfficiencyModel unit = EfficiencyModel::general(1.0, 1.0);
    Verdict v = certify(corrupt_table(ideal, unit), bundle, unit);
    CHECK(v.certified);
    CHECK(v.margin >= 0.125);
    CHECK(v.margin == doctest::Approx(0.25).epsilon(1e-12));

    EfficiencyModel half = EfficiencyModel::general(0.5, 0.5);
    CHECK(certify(corrupt_table(ideal, half), bundle, half).certified);

    // Lost-only below 0.75 removes more maximally-mixed (1,1) events than exist.
    EfficiencyModel too_lossy = EfficiencyModel::lost_only(0.5);
    try {
        certify(corrupt_table(ideal, too_lossy), bundle, too_lossy);
        FAIL("expected DegenerateDenominator");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kDegenerateDenominator);
    }

    Rng rng(8);
    int false_positives = 0;
    int evaluated = 0;
    for (int k = 0; k < 1000; ++k) {
        DensityMatrix sigma = random_separable(DimSpec{2, 2}, 1 + k % 4, rng).assemble();
        PovmEffect a1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
        PovmEffect b1 = random_dichotomic_effect(DimSpec{2, 2}, rng);
        ProbabilityTable t = build_table(sigma, basis, a1, b1);
        WitnessBundle wb = random_bundle(DimSpec{2, 2}, basis, rng);
        for (int j = 0; j < 10; ++j) {
            EfficiencyModel m = random_model(j, rng);
            try {
                false_positives += certify(corrupt_table(t, m), wb, m).certified ? 1 : 0;
                ++evaluated;
            } catch (const Error &e) {
                CHECK(e.code() == ErrorCode::kDegenerateDenominator);
            }
        }
    }
    CHECK(false_positives == 0);
    CHECK(evaluated > 5000);
}

TEST_CASE("event simulation") {
    Rng rng(9);
    const std::int64_t nbar = 1000000;
    OutcomeDistribution ideal{0.2, 0.15, 0.15, 0.5};

    EventSimulation clean = simulate_events(ideal, EfficiencyModel::general(1.0, 1.0, nbar), rng);
    CHECK(clean.counts.total() == nbar);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(clean.measured[k] - ideal[k]) <= 5 * sigma_of(ideal[k], nbar, nbar));
    }

    OutcomeDistribution uniform{0.25, 0.25, 0.25, 0.25};
    EfficiencyModel lossy = EfficiencyModel::general(0.7, 0.8, nbar);
    EventSimulation u = simulate_events(uniform, lossy, rng);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(u.measured[k] - 0.25) <= 5 * sigma_of(0.25, nbar, u.counts.total()));
    }

    EventSimulation spot = simulate_events(ideal, EfficiencyModel::lost_only(0.8, nbar), rng);
    CHECK(spot.counts.total() == 800000);
    CHECK(std::abs(spot.measured[3] - 0.5625) <= 5 * sigma_of(0.5, nbar, spot.counts.total()));

    EventSimulation g = simulate_events(ideal, EfficiencyModel::general(0.9, 0.95, 1003), rng);
    std::int64_t eps_minus = 0;
    std::int64_t eps_plus = 0;
    for (int k = 0; k < 4; ++k) {
        CHECK(g.counts.counts[k] == g.counts.ideal[k] + g.counts.eps_plus[k] - g.counts.eps_minus[k]);
        CHECK(g.counts.counts[k] >= 0);
        eps_minus += g.counts.eps_minus[k];
        eps_plus += g.counts.eps_plus[k];
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(g.counts.eps_minus[k] - g.counts.eps_minus[j]) <= 1);
            CHECK(std::abs(g.counts.eps_plus[k] - g.counts.eps_plus[j]) <= 1);
        }
    }
    CHECK(eps_minus == std::llround(0.05 * 1003));
    CHECK(eps_plus == std::llround(1003 * 0.1 / 0.9));

    OutcomeDistribution sparse{0.0, 0.0, 0.0, 1.0};
    try {
        simulate_events(sparse, EfficiencyModel::lost_only(0.9, 1000), rng);
        FAIL("expected InfeasibleRemoval");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kInfeasibleRemoval);
    }

    Rng s1(77);
    Rng s2(77);
    CHECK(simulate_events(ideal, lossy, s1).counts.counts == simulate_events(ideal, lossy, s2).counts.counts);
}

TEST_CASE("critical efficiency") {
    InputBasis basis = standard_input_basis(2, 2);
    PovmEffect me = max_entangled_effect(2);
    DensityMatrix singlet = named_state("singlet");
    WitnessBundle bundle = make_bundle(singlet, PsiChoice{}, basis);
    ProbabilityTable ideal = build_table(singlet, basis, me, me);

    CriticalEfficiency plus = critical_efficiency(ideal, bundle, VaryEfficiency::kPlus, 1.0, CountingMode{});
    CHECK(plus.at_floor);
    CHECK(plus.value == doctest::Approx(kEfficiencyFloor));

    // Exact lost-only counts fail only where the removal is infeasible (below 3/4).
    CriticalEfficiency minus = critical_efficiency(ideal, bundle, VaryEfficiency::kMinus, 1.0, CountingMode{});
    CHECK(minus.monotone);
    CHECK(minus.value == doctest::Approx(0.75).epsilon(2e-4));

    const double p[] = {0.9};
    DensityMatrix werner = named_state("werner", p);
    ProbabilityTable wt = build_table(werner, basis, me, me);
    CountingMode mc{10000, 5};
    CriticalEfficiency w1 = critical_efficiency(wt, bundle, VaryEfficiency::kMinus, 1.0, mc);
    CriticalEfficiency w2 = critical_efficiency(wt, bundle, VaryEfficiency::kMinus, 1.0, mc);
    CHECK(w1.value > 0.0);
    CHECK(w1.value < 1.0);
    CHECK(w1.value == w2.value);

    // |00> sits on the witness boundary (N = 0 up to rounding), so use an interior point.
    DensityMatrix boundary(basis_vector(4, 0) * basis_vector(4, 0).adjoint(), DimSpec{2, 2});
    CHECK(std::abs(n_phi(build_table(boundary, basis, me, me), bundle)) <= 1e-12);
    DensityMatrix sep(identity(4) / 4.0, DimSpec{2, 2});
    ProbabilityTable st = build_table(sep, basis, me, me);
    try {
        critical_efficiency(st, bundle, VaryEfficiency::kMinus, 1.0, CountingMode{});
        FAIL("expected NeverCertified");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kNeverCertified);
    }
}
