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

#include "mdinew/states.h"

#include <cmath>
#include <string>

#include "mdinew/error.h"

namespace mdinew {

namespace {

Matrix ginibre(int rows, int cols, Rng &rng) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    }
    return g;
}

void require_param_count(std::string_view name, std::span<const double> params, std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
        throw Error(ErrorCode::kInvalidArgument, "named_state " + std::string(name) + ": wrong parameter count");
    }
}

double probability_param(std::string_view name, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "named_state " + std::string(name) + ": parameter " + std::to_string(p) + " outside [0,1]");
    }
    return p;
}

int dimension_param(std::string_view name, double d) {
    if (!(d >= 2.0) || d != std::floor(d) || d > 16) {
        throw Error(ErrorCode::kInvalidArgument, "named_state " + std::string(name) + ": bad dimension");
    }
    return static_cast<int>(d);
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix mat, DimSpec dims) : dims_(std::move(dims)) {
    if (mat.rows() != mat.cols() || mat.rows() != dims_.total()) {
        throw Error(ErrorCode::kDimensionMismatch, "DensityMatrix: shape does not match dims");
    }
    if (hermiticity_defect(mat) > kHermitianTol) {
        throw Error(ErrorCode::kInvalidState, "DensityMatrix: not Hermitian");
    }
    mat_ = hermitian_part(mat);
    double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw Error(ErrorCode::kInvalidState, "DensityMatrix: trace " + std::to_string(tr));
    }
    double lo = min_eigenvalue(mat_);
    if (lo < -kPsdTol) {
        throw Error(ErrorCode::kInvalidState, "DensityMatrix: negative eigenvalue " + std::to_string(lo));
    }
}

PureState::PureState(Vector vec, DimSpec dims) : vec_(std::move(vec)), dims_(std::move(dims)) {
    if (vec_.size() != dims_.total()) {
        throw Error(ErrorCode::kDimensionMismatch, "PureState: length does not match dims");
    }
    if (std::abs(vec_.norm() - 1.0) > kNormTol) {
        throw Error(ErrorCode::kInvalidState, "PureState: not normalized");
    }
}

PureState PureState::normalized(const Vector &vec, DimSpec dims) {
    double n = vec.norm();
    if (n < 1e-14) {
        throw Error(ErrorCode::kInvalidArgument, "PureState: zero vector");
    }
    return PureState(vec / n, std::move(dims));
}

PovmEffect::PovmEffect(Matrix mat, DimSpec dims) : dims_(std::move(dims)) {
    if (mat.rows() != mat.cols() || mat.rows() != dims_.total()) {
        throw Error(ErrorCode::kDimensionMismatch, "PovmEffect: shape does not match dims");
    }
    if (hermiticity_defect(mat) > kHermitianTol) {
        throw Error(ErrorCode::kInvalidState, "PovmEffect: not Hermitian");
    }
    mat_ = hermitian_part(mat);
    auto eig = herm_eig(mat_);
    if (eig.values(0) < -kPsdTol || eig.values(eig.values.size() - 1) > 1.0 + kPsdTol) {
        throw Error(ErrorCode::kInvalidState, "PovmEffect: eigenvalues outside [0,1]");
    }
}

PovmEffect PovmEffect::complement() const {
    return PovmEffect(identity(dims_.total()) - mat_, dims_);
}

SeparableEnsemble::SeparableEnsemble(std::vector<double> weights, std::vector<ProductTerm> factors)
    : weights_(std::move(weights)), factors_(std::move(factors)) {
    if (weights_.empty() || weights_.size() != factors_.size()) {
        throw Error(ErrorCode::kInvalidArgument, "SeparableEnsemble: weights and factors differ in length");
    }
    double sum = 0;
    for (double w : weights_) {
        if (w < 0) {
            throw Error(ErrorCode::kInvalidArgument, "SeparableEnsemble: negative weight");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::kInvalidArgument, "SeparableEnsemble: weights do not sum to 1");
    }
    for (const auto &f : factors_) {
        if (f.a.dim() != factors_[0].a.dim() || f.b.dim() != factors_[0].b.dim()) {
            throw Error(ErrorCode::kDimensionMismatch, "SeparableEnsemble: inconsistent factor dims");
        }
    }
}

DimSpec SeparableEnsemble::dims() const {
    return DimSpec{factors_[0].a.dim(), factors_[0].b.dim()};
}

DensityMatrix SeparableEnsemble::assemble() const {
    DimSpec d = dims();
    Matrix sum = Matrix::Zero(d.total(), d.total());
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        sum += weights_[i] * kron(factors_[i].a.mat(), factors_[i].b.mat());
    }
    return DensityMatrix(sum, d);
}

Vector basis_vector(int d, int k) {
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return v;
}

Vector max_entangled_vector(int d) {
    Vector v = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) {
        v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return v;
}

DensityMatrix random_density(int d, Rng &rng) {
    return random_density(DimSpec{d}, rng);
}

DensityMatrix random_density(const DimSpec &dims, Rng &rng) {
    const int d = dims.total();
    Matrix g = ginibre(d, d, rng);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitian_part(rho), dims);
}

Vector random_pure_vector(int d, Rng &rng) {
    Vector v = ginibre(d, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_unitary(int d, Rng &rng) {
    Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar.
    for (int k = 0; k < d; ++k) {
        cplx diag = r(k, k);
        double mag = std::abs(diag);
        if (mag > 0) {
            q.col(k) *= diag / mag;
        }
    }
    return q;
}

SeparableEnsemble random_separable(const DimSpec &bipartite, int terms, Rng &rng) {
    if (bipartite.size() != 2 || terms < 1) {
        throw Error(ErrorCode::kInvalidArgument, "random_separable: need two subsystems and K >= 1");
    }
    std::vector<double> weights(terms);
    double sum = 0;
    for (auto &w : weights) {
        w = rng.uniform();
        sum += w;
    }
    for (auto &w : weights) {
        w /= sum;
    }
    std::vector<ProductTerm> factors;
    factors.reserve(terms);
    for (int i = 0; i < terms; ++i) {
        Vector a = random_pure_vector(bipartite[0], rng);
        Vector b = random_pure_vector(bipartite[1], rng);
        factors.push_back({DensityMatrix(a * a.adjoint(), DimSpec{bipartite[0]}),
                           DensityMatrix(b * b.adjoint(), DimSpec{bipartite[1]})});
    }
    return SeparableEnsemble(std::move(weights), std::move(factors));
}

PovmEffect random_dichotomic_effect(const DimSpec &dims, Rng &rng) {
    const int d = dims.total();
    if (d < 2) {
        throw Error(ErrorCode::kInvalidArgument, "random_dichotomic_effect: dimension must be >= 2");
    }
    Matrix g = ginibre(d, d, rng);
    Matrix r = hermitian_part(g * g.adjoint());
    double top = max_eigenvalue(r);
    double u = rng.uniform();
    return PovmEffect(r / (top * (1.0 + u)), dims);
}

DensityMatrix named_state(std::string_view name, std::span<const double> params) {
    if (name == "singlet") {
        require_param_count(name, params, 0, 0);
        Vector v = Vector::Zero(4);
        v(1) = 1.0 / std::sqrt(2.0);
        v(2) = -1.0 / std::sqrt(2.0);
        return DensityMatrix(v * v.adjoint(), DimSpec{2, 2});
    }
    if (name == "bell_phi_plus") {
        require_param_count(name, params, 0, 0);
        Vector v = max_entangled_vector(2);
        return DensityMatrix(v * v.adjoint(), DimSpec{2, 2});
    }
    if (name == "werner") {
        require_param_count(name, params, 1, 1);
        double p = probability_param(name, params[0]);
        Matrix singlet = named_state("singlet").mat();
        return DensityMatrix(p * singlet + (1.0 - p) * identity(4) / 4.0, DimSpec{2, 2});
    }
    if (name == "maximally_mixed") {
        require_param_count(name, params, 1, 2);
        if (params.size() == 1) {
            int d = dimension_param(name, params[0]);
            return DensityMatrix(identity(d) / static_cast<double>(d), DimSpec{d});
        }
        int da = dimension_param(name, params[0]);
        int db = dimension_param(name, params[1]);
        return DensityMatrix(identity(da * db) / static_cast<double>(da * db), DimSpec{da, db});
    }
    if (name == "isotropic") {
        require_param_count(name, params, 2, 2);
        double p = probability_param(name, params[0]);
        int d = dimension_param(name, params[1]);
        Vector v = max_entangled_vector(d);
        Matrix rho = p * v * v.adjoint() + (1.0 - p) * identity(d * d) / static_cast<double>(d * d);
        return DensityMatrix(rho, DimSpec{d, d});
    }
    throw Error(ErrorCode::kInvalidArgument, "named_state: unknown state '" + std::string(name) + "'");
}

}  // namespace mdinew
