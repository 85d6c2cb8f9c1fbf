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

#ifndef MDINEW_STATES_H
#define MDINEW_STATES_H

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mdinew/linalg.h"
#include "mdinew/rng.h"

namespace mdinew {

inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kNormTol = 1e-12;

/// Hermitian, positive semidefinite, unit-trace matrix. Construction validates.
class DensityMatrix {
   public:
    DensityMatrix(Matrix mat, DimSpec dims);

    const Matrix &mat() const {
        return mat_;
    }
    const DimSpec &dims() const {
        return dims_;
    }
    int dim() const {
        return dims_.total();
    }

   private:
    Matrix mat_;
    DimSpec dims_;
};

/// Unit vector with declared subsystem structure.
class PureState {
   public:
    PureState(Vector vec, DimSpec dims);

    /// Rescales a nonzero vector to unit norm.
    static PureState normalized(const Vector &vec, DimSpec dims);

    const Vector &vec() const {
        return vec_;
    }
    const DimSpec &dims() const {
        return dims_;
    }
    Matrix projector() const {
        return vec_ * vec_.adjoint();
    }
    DensityMatrix density() const {
        return DensityMatrix(projector(), dims_);
    }

   private:
    Vector vec_;
    DimSpec dims_;
};

/// Outcome-1 effect of a dichotomic POVM; the outcome-0 effect is I - E.
class PovmEffect {
   public:
    PovmEffect(Matrix mat, DimSpec dims);

    const Matrix &mat() const {
        return mat_;
    }
    const DimSpec &dims() const {
        return dims_;
    }
    PovmEffect complement() const;

   private:
    Matrix mat_;
    DimSpec dims_;
};

struct ProductTerm {
    DensityMatrix a;
    DensityMatrix b;
};

/// sigma = sum_i p_i sigma_A^i (x) sigma_B^i
class SeparableEnsemble {
   public:
    SeparableEnsemble(std::vector<double> weights, std::vector<ProductTerm> factors);

    const std::vector<double> &weights() const {
        return weights_;
    }
    const std::vector<ProductTerm> &factors() const {
        return factors_;
    }
    DimSpec dims() const;
    DensityMatrix assemble() const;

   private:
    std::vector<double> weights_;
    std::vector<ProductTerm> factors_;
};

Vector basis_vector(int d, int k);

/// (1/sqrt d) sum_i |ii>
Vector max_entangled_vector(int d);

/// Ginibre-induced (Hilbert-Schmidt) random density matrix.
DensityMatrix random_density(int d, Rng &rng);
DensityMatrix random_density(const DimSpec &dims, Rng &rng);

/// Haar-random unit vector.
Vector random_pure_vector(int d, Rng &rng);
Matrix random_unitary(int d, Rng &rng);

/// K Haar pure product terms with weights drawn uniform and normalized.
SeparableEnsemble random_separable(const DimSpec &bipartite, int terms, Rng &rng);

/// E = R / (lambda_max(R) (1 + u)) for a random Gram matrix R.
PovmEffect random_dichotomic_effect(const DimSpec &dims, Rng &rng);

/// singlet, bell_phi_plus, werner(p), maximally_mixed(d) or (dA, dB),
/// isotropic(p, d).
DensityMatrix named_state(std::string_view name, std::span<const double> params = {});

}  // namespace mdinew

#endif
