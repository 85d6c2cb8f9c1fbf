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

#include "mdinew/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mdinew/error.h"

namespace mdinew {

namespace {

// Splits a flat index into per-subsystem digits (subsystem 0 most significant).
void to_digits(int index, const std::vector<int> &dims, std::vector<int> &digits) {
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
}

int from_digits(const std::vector<int> &digits, const std::vector<int> &dims) {
    int index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        index = index * dims[k] + digits[k];
    }
    return index;
}

void require_square(const Matrix &m, const DimSpec &dims, const char *op) {
    if (m.rows() != m.cols() || m.rows() != dims.total()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()) + " but dims total " + std::to_string(dims.total()));
    }
}

void require_permutation(std::span<const int> perm, std::size_t n) {
    if (perm.size() != n) {
        throw Error(ErrorCode::kInvalidArgument, "permutation has wrong length");
    }
    std::vector<bool> seen(n, false);
    for (int p : perm) {
        if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) {
            throw Error(ErrorCode::kInvalidArgument, "malformed permutation");
        }
        seen[p] = true;
    }
}

}  // namespace

DimSpec::DimSpec(std::initializer_list<int> dims) : DimSpec(std::vector<int>(dims)) {
}

DimSpec::DimSpec(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_) {
        if (d < 1) {
            throw Error(ErrorCode::kInvalidArgument, "subsystem dimension must be positive");
        }
        total_ *= d;
    }
}

DimSpec DimSpec::permuted(std::span<const int> perm) const {
    require_permutation(perm, dims_.size());
    std::vector<int> out(dims_.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        out[i] = dims_[perm[i]];
    }
    return DimSpec(std::move(out));
}

DimSpec DimSpec::subset(std::span<const int> keep) const {
    std::vector<int> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> out;
    for (int k : sorted) {
        out.push_back(dims_.at(k));
    }
    return DimSpec(std::move(out));
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector kron(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

Matrix kron(std::initializer_list<Matrix> factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto &f : factors) {
        out = kron(out, f);
    }
    return out;
}

Matrix identity(int d) {
    return Matrix::Identity(d, d);
}

Matrix dagger(const Matrix &m) {
    return m.adjoint();
}

Matrix partial_transpose(const Matrix &m, const DimSpec &dims, int target) {
    require_square(m, dims, "partial_transpose");
    if (target < 0 || static_cast<std::size_t>(target) >= dims.size()) {
        throw Error(ErrorCode::kInvalidArgument, "partial_transpose: target subsystem out of range");
    }
    const int n = dims.total();
    Matrix out(n, n);
    std::vector<int> rd(dims.size()), cd(dims.size());
    for (int r = 0; r < n; ++r) {
        to_digits(r, dims.dims(), rd);
        for (int c = 0; c < n; ++c) {
            to_digits(c, dims.dims(), cd);
            std::swap(rd[target], cd[target]);
            out(from_digits(rd, dims.dims()), from_digits(cd, dims.dims())) = m(r, c);
            std::swap(rd[target], cd[target]);
        }
    }
    return out;
}

Matrix partial_trace(const Matrix &m, const DimSpec &dims, std::vector<int> keep) {
    require_square(m, dims, "partial_trace");
    if (keep.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "partial_trace: keep set is empty");
    }
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end() || keep.front() < 0 ||
        static_cast<std::size_t>(keep.back()) >= dims.size()) {
        throw Error(ErrorCode::kInvalidArgument, "partial_trace: invalid subsystem set");
    }
    std::vector<bool> kept(dims.size(), false);
    for (int k : keep) {
        kept[k] = true;
    }
    DimSpec out_dims = dims.subset(keep);
    Matrix out = Matrix::Zero(out_dims.total(), out_dims.total());

    const int n = dims.total();
    std::vector<int> rd(dims.size()), cd(dims.size());
    std::vector<int> ro(keep.size()), co(keep.size());
    for (int r = 0; r < n; ++r) {
        to_digits(r, dims.dims(), rd);
        for (int c = 0; c < n; ++c) {
            to_digits(c, dims.dims(), cd);
            bool diagonal_on_traced = true;
            std::size_t j = 0;
            for (std::size_t k = 0; k < dims.size(); ++k) {
                if (kept[k]) {
                    ro[j] = rd[k];
                    co[j] = cd[k];
                    ++j;
                } else if (rd[k] != cd[k]) {
                    diagonal_on_traced = false;
                    break;
                }
            }
            if (diagonal_on_traced) {
                out(from_digits(ro, out_dims.dims()), from_digits(co, out_dims.dims())) += m(r, c);
            }
        }
    }
    return out;
}

Matrix permute_subsystems(const Matrix &m, const DimSpec &dims, std::span<const int> perm) {
    require_square(m, dims, "permute_subsystems");
    DimSpec out_dims = dims.permuted(perm);
    const int n = dims.total();
    // map[old flat index] = new flat index
    std::vector<int> map(n);
    std::vector<int> od(dims.size()), nd(dims.size());
    for (int i = 0; i < n; ++i) {
        to_digits(i, dims.dims(), od);
        for (std::size_t k = 0; k < perm.size(); ++k) {
            nd[k] = od[perm[k]];
        }
        map[i] = from_digits(nd, out_dims.dims());
    }
    Matrix out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            out(map[r], map[c]) = m(r, c);
        }
    }
    return out;
}

std::vector<int> inverse_permutation(std::span<const int> perm) {
    require_permutation(perm, perm.size());
    std::vector<int> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        inv[perm[i]] = static_cast<int>(i);
    }
    return inv;
}

double max_abs(const Matrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix &m) {
    if (m.rows() != m.cols()) {
        return INFINITY;
    }
    return max_abs(m - m.adjoint());
}

bool is_hermitian(const Matrix &m, double tol) {
    return hermiticity_defect(m) <= tol * std::max(1.0, max_abs(m));
}

Matrix hermitian_part(const Matrix &m) {
    return (m + m.adjoint()) / 2.0;
}

EigenSystem herm_eig(const Matrix &m) {
    if (!is_hermitian(m)) {
        throw Error(ErrorCode::kNotHermitian,
                    "herm_eig: hermiticity defect " + std::to_string(hermiticity_defect(m)));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::kNotHermitian, "herm_eig: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix &m) {
    return herm_eig(m).values(0);
}

double max_eigenvalue(const Matrix &m) {
    auto eig = herm_eig(m);
    return eig.values(eig.values.size() - 1);
}

double min_pt_eigenvalue(const Matrix &m, const DimSpec &bipartite) {
    if (bipartite.size() != 2) {
        throw Error(ErrorCode::kDimensionMismatch, "min_pt_eigenvalue: expected two subsystems");
    }
    return min_eigenvalue(partial_transpose(m, bipartite, 1));
}

std::vector<double> schmidt_coefficients(const Vector &psi, const DimSpec &bipartite) {
    if (bipartite.size() != 2 || psi.size() != bipartite.total()) {
        throw Error(ErrorCode::kDimensionMismatch, "schmidt_coefficients: vector length does not match dims");
    }
    const int da = bipartite[0];
    const int db = bipartite[1];
    Matrix amp(da, db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < db; ++j) {
            amp(i, j) = psi(i * db + j);
        }
    }
    Eigen::JacobiSVD<Matrix> svd(amp);
    const auto &sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

cplx trace_product(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw Error(ErrorCode::kDimensionMismatch, "trace_product: incompatible shapes");
    }
    return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace mdinew
