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

#ifndef MDINEW_PROTOCOL_H
#define MDINEW_PROTOCOL_H

#include <array>
#include <iosfwd>
#include <vector>

#include "mdinew/linalg.h"
#include "mdinew/states.h"
#include "mdinew/witness.h"

namespace mdinew {

inline constexpr double kProbabilityTol = 1e-10;
inline constexpr double kDegenerateTol = 1e-12;

/// Four-outcome distribution, index 2a + b: {p00, p01, p10, p11}.
using OutcomeDistribution = std::array<double, 4>;

enum class Provenance { kIdeal, kMeasured, kCorrupted };

const char *provenance_name(Provenance p);

/// Outcome statistics for every input pair (tau_s, omega_t) plus the
/// maximally mixed pair (m_A, m_B).
class ProbabilityTable {
   public:
    ProbabilityTable(int d_a, int d_b, int size_a, int size_b, std::vector<OutcomeDistribution> full,
                     OutcomeDistribution mm, Provenance provenance);

    int d_a() const {
        return d_a_;
    }
    int d_b() const {
        return d_b_;
    }
    int size_a() const {
        return size_a_;
    }
    int size_b() const {
        return size_b_;
    }
    Provenance provenance() const {
        return provenance_;
    }

    const OutcomeDistribution &full(int s, int t) const {
        return full_[static_cast<std::size_t>(s * size_b_ + t)];
    }
    double p11(int s, int t) const {
        return full(s, t)[3];
    }
    const OutcomeDistribution &mm() const {
        return mm_;
    }
    double p11_mm() const {
        return mm_[3];
    }
    const std::vector<OutcomeDistribution> &rows() const {
        return full_;
    }

    RealMatrix p11_grid() const;

    /// Largest deviation of any row sum from 1 (the mm row included).
    double normalization_defect() const;

   private:
    int d_a_;
    int d_b_;
    int size_a_;
    int size_b_;
    std::vector<OutcomeDistribution> full_;
    OutcomeDistribution mm_;
    Provenance provenance_;
};

/// Alice's effect A1 acts on (A_in, A), Bob's B1 on (B, B_in). With the global
/// ordering (A_in, A, B, B_in) the product A_a (x) B_b needs no reordering.
class DichotomicMeasurement {
   public:
    DichotomicMeasurement(PovmEffect a1, PovmEffect b1);

    const PovmEffect &a1() const {
        return a1_;
    }
    const PovmEffect &b1() const {
        return b1_;
    }
    int d_a() const {
        return a1_.dims()[1];
    }
    int d_b() const {
        return b1_.dims()[0];
    }

    /// Distribution for a four-party operator ordered (A_in, A, B, B_in).
    OutcomeDistribution distribution(const Matrix &four_party) const;

   private:
    PovmEffect a1_;
    PovmEffect b1_;
    std::array<Matrix, 4> effects_t_;  // transposes of A_a (x) B_b
};

/// tr[(tau (x) rho (x) omega)(A_a (x) B_b)] for a, b in {0, 1}.
OutcomeDistribution joint_distribution(const DensityMatrix &rho, const DensityMatrix &tau,
                                       const DensityMatrix &omega, const PovmEffect &a1, const PovmEffect &b1);

/// |Phi><Phi| on C^d (x) C^d.
PovmEffect max_entangled_effect(int d);

ProbabilityTable build_table(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                             const PovmEffect &b1);

/// sum_st c_st P11^st
double i_alpha(const ProbabilityTable &table, const CoefficientGrid &coeffs);

/// I_alpha - [(sum beta P)^2 + (sum gamma P)^2] / (K P11^mm).
double n_phi(const ProbabilityTable &table, const WitnessBundle &bundle);

enum class Side { kA, kB };

/// Side A: (tr_A[E (I (x) sigma)])^T on A_in. Side B: (tr_B[E (sigma (x) I)])^T
/// on B_in.
Matrix effective_effect(const PovmEffect &e, const DensityMatrix &sigma_local, Side side);

struct ReductionReport {
    double t_q = 0;
    double f_of_q = 0;
    double n_direct = 0;
    double abs_error = 0;  // |n_direct - t_q f_of_q|
    bool degenerate = false;
};

/// Evaluates N on the table of the assembled separable state and, separately,
/// T_Q F(Q) from the effective effects.
ReductionReport reduction_check(const SeparableEnsemble &ensemble, const PovmEffect &a1, const PovmEffect &b1,
                                const WitnessBundle &bundle, const InputBasis &basis);

/// CSV with columns s,t,p00,p01,p10,p11 and a final `mm` row.
void write_table_csv(std::ostream &out, const ProbabilityTable &table);

}  // namespace mdinew

#endif
