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

#ifndef MDINEW_WITNESS_H
#define MDINEW_WITNESS_H

#include <iosfwd>
#include <optional>
#include <vector>

#include "mdinew/linalg.h"
#include "mdinew/states.h"

namespace mdinew {

inline constexpr double kNptTol = 1e-9;
inline constexpr double kMaxGramCondition = 1e6;
inline constexpr double kDecompositionResidualTol = 1e-8;

/// Local input states {tau_s} for Alice and {omega_t} for Bob. Each side must
/// span the real space of Hermitian operators on its factor.
class InputBasis {
   public:
    InputBasis(std::vector<DensityMatrix> side_a, std::vector<DensityMatrix> side_b);

    const std::vector<DensityMatrix> &side_a() const {
        return side_a_;
    }
    const std::vector<DensityMatrix> &side_b() const {
        return side_b_;
    }
    int d_a() const {
        return side_a_.front().dim();
    }
    int d_b() const {
        return side_b_.front().dim();
    }
    int size_a() const {
        return static_cast<int>(side_a_.size());
    }
    int size_b() const {
        return static_cast<int>(side_b_.size());
    }
    double gram_condition() const {
        return gram_condition_;
    }

    // Columns are the orthonormal-Hermitian-basis coordinates of tau_s^T
    // (resp. omega_t^T).
    const RealMatrix &transposed_coords_a() const {
        return coords_a_;
    }
    const RealMatrix &transposed_coords_b() const {
        return coords_b_;
    }

   private:
    std::vector<DensityMatrix> side_a_;
    std::vector<DensityMatrix> side_b_;
    RealMatrix coords_a_;
    RealMatrix coords_b_;
    double gram_condition_ = 1.0;
};

/// {|j><j|} u {|e+_jk><e+_jk|} u {|ei_jk><ei_jk|}, j < k. For d = 2 this is
/// {|0>, |1>, |+>, |y+>}.
std::vector<DensityMatrix> standard_basis(int d);
InputBasis standard_input_basis(int d_a, int d_b);

/// Orthonormal (Hilbert-Schmidt) basis of d x d Hermitian matrices:
/// generalized Gell-Mann matrices plus I/sqrt(d).
std::vector<Matrix> hermitian_operator_basis(int d);
RealVector hermitian_coordinates(const Matrix &h, const std::vector<Matrix> &basis);

struct LinearWitness {
    Matrix w;
    PureState phi;
    double pt_min_eigenvalue;
};

/// W = (|phi><phi|)^{T_B} with phi the eigenvector of the most negative
/// eigenvalue of rho^{T_B}. Throws kNotNpt on PPT input.
LinearWitness witness_from_npt(const DensityMatrix &rho_tilde);

struct NonlinearParts {
    Matrix x;     // |phi><psi|
    Matrix x_tb;  // X^{T_B} = H1 + i H2
    Matrix h1;
    Matrix h2;
    double s_x;  // largest squared Schmidt coefficient of psi
};

NonlinearParts build_nonlinear(const PureState &phi, const PureState &psi);

enum class PsiKind {
    kMaxEntangledSchmidt,  // maximally entangled in the Schmidt basis of phi
    kProduct,              // |00>
    kCustom,
};

struct PsiChoice {
    PsiKind kind = PsiKind::kMaxEntangledSchmidt;
    std::optional<PureState> custom;

    static PsiChoice custom_state(PureState psi) {
        return {PsiKind::kCustom, std::move(psi)};
    }
};

PureState resolve_psi(const PsiChoice &choice, const PureState &phi);

/// Grid indexed (s, t) over the input basis.
using CoefficientGrid = RealMatrix;

CoefficientGrid decompose(const Matrix &h, const InputBasis &basis);
Matrix reconstruct(const CoefficientGrid &coeffs, const InputBasis &basis);

struct CoefficientSums {
    double alpha = 0;
    double beta = 0;
    double gamma = 0;
};

struct WitnessBundle {
    DimSpec dims;
    Matrix w;
    PureState phi;
    PureState psi;
    NonlinearParts parts;
    CoefficientGrid alpha;
    CoefficientGrid beta;
    CoefficientGrid gamma;
    CoefficientSums coeff_sums;
    double k;  // s(X) d_A d_B

    double s_x() const {
        return parts.s_x;
    }
};

/// Builds the witness from phi and psi and decomposes W, H1, H2.
WitnessBundle bundle_from_vectors(const PureState &phi, const PureState &psi, const InputBasis &basis);
WitnessBundle make_bundle(const DensityMatrix &rho_tilde, const PsiChoice &psi_choice, const InputBasis &basis);

/// tr(W rho); throws kImaginaryValue if the trace is not real.
double linear_value(const Matrix &w, const Matrix &rho);

/// tr(W rho) - |tr(X^{T_B} rho)|^2 / s(X). Also accepts unnormalized
/// operators.
double nonlinear_value(const WitnessBundle &bundle, const Matrix &rho);

// Text export: dims, s_x, phi, psi, then `s t value` triples for alpha, beta,
// gamma.
void write_bundle(std::ostream &out, const WitnessBundle &bundle);
WitnessBundle read_bundle(std::istream &in);

}  // namespace mdinew

#endif
