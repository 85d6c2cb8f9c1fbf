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

#ifndef MDINEW_LINALG_H
#define MDINEW_LINALG_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mdinew {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;

/// Ordered subsystem dimensions of a tensor-product space. Subsystem 0 is the
/// most significant digit of a flattened index.
class DimSpec {
   public:
    DimSpec() = default;
    DimSpec(std::initializer_list<int> dims);
    explicit DimSpec(std::vector<int> dims);

    std::size_t size() const {
        return dims_.size();
    }
    int operator[](std::size_t k) const {
        return dims_[k];
    }
    int total() const {
        return total_;
    }
    const std::vector<int> &dims() const {
        return dims_;
    }

    /// Dimensions reordered so that position i holds old subsystem perm[i].
    DimSpec permuted(std::span<const int> perm) const;
    DimSpec subset(std::span<const int> keep) const;

    bool operator==(const DimSpec &other) const = default;

   private:
    std::vector<int> dims_;
    int total_ = 1;
};

Matrix kron(const Matrix &a, const Matrix &b);
Vector kron(const Vector &a, const Vector &b);
Matrix kron(std::initializer_list<Matrix> factors);

Matrix identity(int d);
Matrix dagger(const Matrix &m);

/// Transposes subsystem `target` in the computational basis.
Matrix partial_transpose(const Matrix &m, const DimSpec &dims, int target);

/// Traces out every subsystem not listed in `keep`. The result is ordered like
/// `dims.subset(keep)` (ascending subsystem index, regardless of the order
/// given in `keep`).
Matrix partial_trace(const Matrix &m, const DimSpec &dims, std::vector<int> keep);

/// Similarity transform by the subsystem permutation: output subsystem i is
/// input subsystem perm[i]. Output dimensions are `dims.permuted(perm)`.
Matrix permute_subsystems(const Matrix &m, const DimSpec &dims, std::span<const int> perm);

std::vector<int> inverse_permutation(std::span<const int> perm);

double max_abs(const Matrix &m);
double hermiticity_defect(const Matrix &m);
bool is_hermitian(const Matrix &m, double tol = kHermitianTol);
Matrix hermitian_part(const Matrix &m);

struct EigenSystem {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns
};

/// Eigendecomposition of a Hermitian matrix. Inputs within tolerance are
/// symmetrized first; anything further from Hermitian is rejected.
EigenSystem herm_eig(const Matrix &m);
double min_eigenvalue(const Matrix &m);
double max_eigenvalue(const Matrix &m);

/// Minimum eigenvalue of the partial transpose on subsystem 1 of a bipartite
/// operator.
double min_pt_eigenvalue(const Matrix &m, const DimSpec &bipartite);

/// Descending Schmidt coefficients of a bipartite pure state.
std::vector<double> schmidt_coefficients(const Vector &psi, const DimSpec &bipartite);

/// tr(a * b) without forming the product.
cplx trace_product(const Matrix &a, const Matrix &b);

}  // namespace mdinew

#endif
