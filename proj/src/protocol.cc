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

#include "mdinew/protocol.h"

#include <cmath>
#include <ostream>
#include <string>

#include "mdinew/error.h"
#include "mdinew/state_io.h"

namespace mdinew {

namespace {

void check_distribution(const OutcomeDistribution &p) {
    double sum = 0;
    for (double v : p) {
        if (v < -kProbabilityTol || v > 1.0 + kProbabilityTol) {
            throw Error(ErrorCode::kInvalidState, "probability " + std::to_string(v) + " outside [0,1]");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilityTol) {
        throw Error(ErrorCode::kInvalidState, "outcome probabilities sum to " + std::to_string(sum));
    }
}

void check_grid_shape(const ProbabilityTable &table, const CoefficientGrid &coeffs) {
    if (coeffs.rows() != table.size_a() || coeffs.cols() != table.size_b()) {
        throw Error(ErrorCode::kDimensionMismatch, "coefficient grid shape does not match table");
    }
}

}  // namespace

const char *provenance_name(Provenance p) {
    switch (p) {
        case Provenance::kIdeal:
            return "ideal";
        case Provenance::kMeasured:
            return "measured";
        case Provenance::kCorrupted:
            return "corrupted";
    }
    return "unknown";
}

ProbabilityTable::ProbabilityTable(int d_a, int d_b, int size_a, int size_b, std::vector<OutcomeDistribution> full,
                                   OutcomeDistribution mm, Provenance provenance)
    : d_a_(d_a), d_b_(d_b), size_a_(size_a), size_b_(size_b), full_(std::move(full)), mm_(mm), provenance_(provenance) {
    if (static_cast<int>(full_.size()) != size_a_ * size_b_) {
        throw Error(ErrorCode::kDimensionMismatch, "ProbabilityTable: row count does not match grid");
    }
}

RealMatrix ProbabilityTable::p11_grid() const {
    RealMatrix g(size_a_, size_b_);
    for (int s = 0; s < size_a_; ++s) {
        for (int t = 0; t < size_b_; ++t) {
            g(s, t) = p11(s, t);
        }
    }
    return g;
}

double ProbabilityTable::normalization_defect() const {
    auto defect = [](const OutcomeDistribution &p) { return std::abs(p[0] + p[1] + p[2] + p[3] - 1.0); };
    double worst = defect(mm_);
    for (const auto &row : full_) {
        worst = std::max(worst, defect(row));
    }
    return worst;
}

DichotomicMeasurement::DichotomicMeasurement(PovmEffect a1, PovmEffect b1) : a1_(std::move(a1)), b1_(std::move(b1)) {
    if (a1_.dims().size() != 2 || b1_.dims().size() != 2 || a1_.dims()[0] != a1_.dims()[1] ||
        b1_.dims()[0] != b1_.dims()[1]) {
        throw Error(ErrorCode::kDimensionMismatch, "effects must act on (input, system) pairs of equal dimension");
    }
    const Matrix a[2] = {identity(a1_.dims().total()) - a1_.mat(), a1_.mat()};
    const Matrix b[2] = {identity(b1_.dims().total()) - b1_.mat(), b1_.mat()};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            effects_t_[2 * i + j] = kron(a[i], b[j]).transpose();
        }
    }
}

OutcomeDistribution DichotomicMeasurement::distribution(const Matrix &four_party) const {
    if (four_party.rows() != effects_t_[0].rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "four-party operator does not match effects");
    }
    OutcomeDistribution p{};
    for (int k = 0; k < 4; ++k) {
        p[k] = four_party.cwiseProduct(effects_t_[k]).sum().real();
    }
    check_distribution(p);
    return p;
}

OutcomeDistribution joint_distribution(const DensityMatrix &rho, const DensityMatrix &tau,
                                       const DensityMatrix &omega, const PovmEffect &a1, const PovmEffect &b1) {
    DichotomicMeasurement m(a1, b1);
    if (rho.dims().size() != 2 || rho.dims()[0] != m.d_a() || rho.dims()[1] != m.d_b() || tau.dim() != m.d_a() ||
        omega.dim() != m.d_b()) {
        throw Error(ErrorCode::kDimensionMismatch, "joint_distribution: state, inputs and effects disagree");
    }
    return m.distribution(kron({tau.mat(), rho.mat(), omega.mat()}));
}

PovmEffect max_entangled_effect(int d) {
    if (d < 2) {
        throw Error(ErrorCode::kInvalidArgument, "max_entangled_effect: d must be >= 2");
    }
    Vector v = max_entangled_vector(d);
    return PovmEffect(v * v.adjoint(), DimSpec{d, d});
}

ProbabilityTable build_table(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                             const PovmEffect &b1) {
    DichotomicMeasurement m(a1, b1);
    const int da = basis.d_a();
    const int db = basis.d_b();
    if (rho.dims().size() != 2 || rho.dims()[0] != da || rho.dims()[1] != db || m.d_a() != da || m.d_b() != db) {
        throw Error(ErrorCode::kDimensionMismatch, "build_table: state, basis and effects disagree");
    }
    std::vector<OutcomeDistribution> full;
    full.reserve(static_cast<std::size_t>(basis.size_a() * basis.size_b()));
    for (const auto &tau : basis.side_a()) {
        Matrix left = kron(tau.mat(), rho.mat());
        for (const auto &omega : basis.side_b()) {
            full.push_back(m.distribution(kron(left, omega.mat())));
        }
    }
    Matrix m_a = identity(da) / static_cast<double>(da);
    Matrix m_b = identity(db) / static_cast<double>(db);
    OutcomeDistribution mm = m.distribution(kron({m_a, rho.mat(), m_b}));
    return ProbabilityTable(da, db, basis.size_a(), basis.size_b(), std::move(full), mm, Provenance::kIdeal);
}

double i_alpha(const ProbabilityTable &table, const CoefficientGrid &coeffs) {
    check_grid_shape(table, coeffs);
    double sum = 0;
    for (int s = 0; s < table.size_a(); ++s) {
        for (int t = 0; t < table.size_b(); ++t) {
            sum += coeffs(s, t) * table.p11(s, t);
        }
    }
    return sum;
}

double n_phi(const ProbabilityTable &table, const WitnessBundle &bundle) {
    if (table.p11_mm() <= kDegenerateTol) {
        throw Error(ErrorCode::kDegenerateDenominator,
                    "n_phi: P11 for maximally mixed inputs is " + std::to_string(table.p11_mm()));
    }
    double ia = i_alpha(table, bundle.alpha);
    double ib = i_alpha(table, bundle.beta);
    double ig = i_alpha(table, bundle.gamma);
    return ia - (ib * ib + ig * ig) / (bundle.k * table.p11_mm());
}

Matrix effective_effect(const PovmEffect &e, const DensityMatrix &sigma_local, Side side) {
    const DimSpec &dims = e.dims();
    if (dims.size() != 2) {
        throw Error(ErrorCode::kDimensionMismatch, "effective_effect: effect must act on two subsystems");
    }
    // Side A: E on (A_in, A), sigma on A. Side B: E on (B, B_in), sigma on B.
    const int sys = side == Side::kA ? 1 : 0;
    const int input = 1 - sys;
    if (sigma_local.dim() != dims[sys]) {
        throw Error(ErrorCode::kDimensionMismatch, "effective_effect: local state does not match effect");
    }
    Matrix lifted = side == Side::kA ? kron(identity(dims[0]), sigma_local.mat())
                                     : kron(sigma_local.mat(), identity(dims[1]));
    Matrix reduced = partial_trace(e.mat() * lifted, dims, {input});
    return Matrix(reduced.transpose());
}

ReductionReport reduction_check(const SeparableEnsemble &ensemble, const PovmEffect &a1, const PovmEffect &b1,
                                const WitnessBundle &bundle, const InputBasis &basis) {
    ReductionReport report;
    const DimSpec dims = ensemble.dims();
    Matrix g = Matrix::Zero(dims.total(), dims.total());
    for (std::size_t i = 0; i < ensemble.weights().size(); ++i) {
        const auto &f = ensemble.factors()[i];
        g += ensemble.weights()[i] * kron(effective_effect(a1, f.a, Side::kA), effective_effect(b1, f.b, Side::kB));
    }
    report.t_q = g.trace().real();
    ProbabilityTable table = build_table(ensemble.assemble(), basis, a1, b1);
    if (report.t_q <= kDegenerateTol) {
        report.degenerate = true;
        report.f_of_q = NAN;
        report.n_direct = table.p11_mm() > kDegenerateTol ? n_phi(table, bundle) : NAN;
        report.abs_error = NAN;
        return report;
    }
    report.f_of_q = nonlinear_value(bundle, g / report.t_q);
    report.n_direct = n_phi(table, bundle);
    report.abs_error = std::abs(report.n_direct - report.t_q * report.f_of_q);
    return report;
}

void write_table_csv(std::ostream &out, const ProbabilityTable &table) {
    out << "s,t,p00,p01,p10,p11\n";
    auto row = [&](const OutcomeDistribution &p) {
        for (double v : p) {
            out << ',' << format_double(v);
        }
        out << '\n';
    };
    for (int s = 0; s < table.size_a(); ++s) {
        for (int t = 0; t < table.size_b(); ++t) {
            out << s << ',' << t;
            row(table.full(s, t));
        }
    }
    out << "mm,mm";
    row(table.mm());
}

}  // namespace mdinew
