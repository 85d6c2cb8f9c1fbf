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

#include "mdinew/witness.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "mdinew/error.h"
#include "mdinew/state_io.h"

namespace mdinew {

namespace {

RealMatrix transposed_coords(const std::vector<DensityMatrix> &states, int d) {
    const auto herm = hermitian_operator_basis(d);
    RealMatrix coords(d * d, static_cast<Eigen::Index>(states.size()));
    for (std::size_t s = 0; s < states.size(); ++s) {
        coords.col(static_cast<Eigen::Index>(s)) = hermitian_coordinates(states[s].mat().transpose(), herm);
    }
    return coords;
}

double gram_condition_of(const RealMatrix &coords) {
    Eigen::JacobiSVD<RealMatrix> svd(coords);
    const auto &sv = svd.singularValues();
    double lo = sv(sv.size() - 1);
    if (lo <= 0) {
        return INFINITY;
    }
    double ratio = sv(0) / lo;
    return ratio * ratio;
}

void check_side(const std::vector<DensityMatrix> &states, const char *label) {
    if (states.empty()) {
        throw Error(ErrorCode::kInvalidArgument, std::string("InputBasis: side ") + label + " is empty");
    }
    const int d = states.front().dim();
    if (static_cast<int>(states.size()) != d * d) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string("InputBasis: side ") + label + " needs exactly d^2 = " + std::to_string(d * d) +
                        " states");
    }
    for (const auto &s : states) {
        if (s.dim() != d) {
            throw Error(ErrorCode::kDimensionMismatch, std::string("InputBasis: side ") + label + " mixes dimensions");
        }
    }
}

Vector fix_phase(Vector v) {
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    cplx ref = v(k);
    return v * (std::abs(ref) / ref);
}

void write_grid(std::ostream &out, const char *name, const CoefficientGrid &g) {
    out << name << ' ' << g.rows() << ' ' << g.cols() << '\n';
    for (Eigen::Index s = 0; s < g.rows(); ++s) {
        for (Eigen::Index t = 0; t < g.cols(); ++t) {
            out << s << ' ' << t << ' ' << format_double(g(s, t)) << '\n';
        }
    }
}

CoefficientGrid read_grid(std::istream &in, const char *name) {
    std::string tag;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    if (!(in >> tag >> rows >> cols) || tag != name || rows < 1 || cols < 1) {
        throw Error(ErrorCode::kParse, std::string("bundle: expected `") + name + " rows cols`");
    }
    CoefficientGrid g(rows, cols);
    for (Eigen::Index s = 0; s < rows; ++s) {
        for (Eigen::Index t = 0; t < cols; ++t) {
            Eigen::Index rs = 0;
            Eigen::Index rt = 0;
            double v = 0;
            if (!(in >> rs >> rt >> v) || rs != s || rt != t) {
                throw Error(ErrorCode::kParse, std::string("bundle: malformed ") + name + " entry");
            }
            g(s, t) = v;
        }
    }
    return g;
}

Vector read_vector(std::istream &in, const char *name, int n) {
    std::string tag;
    if (!(in >> tag) || tag != name) {
        throw Error(ErrorCode::kParse, std::string("bundle: expected `") + name + "`");
    }
    Vector v(n);
    for (int i = 0; i < n; ++i) {
        double re = 0;
        double im = 0;
        if (!(in >> re >> im)) {
            throw Error(ErrorCode::kParse, std::string("bundle: malformed ") + name + " entry");
        }
        v(i) = cplx(re, im);
    }
    return v;
}

}  // namespace

InputBasis::InputBasis(std::vector<DensityMatrix> side_a, std::vector<DensityMatrix> side_b)
    : side_a_(std::move(side_a)), side_b_(std::move(side_b)) {
    check_side(side_a_, "A");
    check_side(side_b_, "B");
    coords_a_ = transposed_coords(side_a_, d_a());
    coords_b_ = transposed_coords(side_b_, d_b());
    gram_condition_ = std::max(gram_condition_of(coords_a_), gram_condition_of(coords_b_));
    if (!(gram_condition_ <= kMaxGramCondition)) {
        throw Error(ErrorCode::kIllConditioned,
                    "InputBasis: Gram condition " + std::to_string(gram_condition_) + " exceeds 1e6");
    }
}

std::vector<DensityMatrix> standard_basis(int d) {
    if (d < 2) {
        throw Error(ErrorCode::kInvalidArgument, "standard_basis: d must be >= 2");
    }
    std::vector<DensityMatrix> out;
    const DimSpec dims{d};
    auto push = [&](const Vector &v) { out.emplace_back(v * v.adjoint(), dims); };
    for (int j = 0; j < d; ++j) {
        push(basis_vector(d, j));
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            push(r * (basis_vector(d, j) + basis_vector(d, k)));
        }
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            push(r * (basis_vector(d, j) + cplx(0, 1) * basis_vector(d, k)));
        }
    }
    return out;
}

InputBasis standard_input_basis(int d_a, int d_b) {
    return InputBasis(standard_basis(d_a), standard_basis(d_b));
}

std::vector<Matrix> hermitian_operator_basis(int d) {
    std::vector<Matrix> out;
    out.push_back(identity(d) / std::sqrt(static_cast<double>(d)));
    for (int l = 1; l < d; ++l) {
        Matrix g = Matrix::Zero(d, d);
        for (int j = 0; j < l; ++j) {
            g(j, j) = 1.0;
        }
        g(l, l) = -static_cast<double>(l);
        out.push_back(g / std::sqrt(static_cast<double>(l * (l + 1))));
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) {
            Matrix sym = Matrix::Zero(d, d);
            sym(j, k) = r;
            sym(k, j) = r;
            out.push_back(sym);
            Matrix anti = Matrix::Zero(d, d);
            anti(j, k) = cplx(0, -r);
            anti(k, j) = cplx(0, r);
            out.push_back(anti);
        }
    }
    return out;
}

RealVector hermitian_coordinates(const Matrix &h, const std::vector<Matrix> &basis) {
    RealVector x(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) {
        x(static_cast<Eigen::Index>(k)) = trace_product(basis[k], h).real();
    }
    return x;
}

LinearWitness witness_from_npt(const DensityMatrix &rho_tilde) {
    const DimSpec &dims = rho_tilde.dims();
    if (dims.size() != 2) {
        throw Error(ErrorCode::kDimensionMismatch, "witness_from_npt: state must be bipartite");
    }
    auto eig = herm_eig(partial_transpose(rho_tilde.mat(), dims, 1));
    const double lowest = eig.values(0);
    if (lowest >= -kNptTol) {
        throw Error(ErrorCode::kNotNpt,
                    "minimum partial-transpose eigenvalue " + std::to_string(lowest) + " is not negative");
    }
    PureState phi = PureState::normalized(fix_phase(eig.vectors.col(0)), dims);
    Matrix w = partial_transpose(phi.projector(), dims, 1);
    return {hermitian_part(w), std::move(phi), lowest};
}

NonlinearParts build_nonlinear(const PureState &phi, const PureState &psi) {
    if (phi.dims() != psi.dims() || phi.dims().size() != 2) {
        throw Error(ErrorCode::kDimensionMismatch, "build_nonlinear: phi and psi must share bipartite dims");
    }
    NonlinearParts parts;
    parts.x = phi.vec() * psi.vec().adjoint();
    parts.x_tb = partial_transpose(parts.x, phi.dims(), 1);
    parts.h1 = (parts.x_tb + parts.x_tb.adjoint()) / 2.0;
    parts.h2 = (parts.x_tb - parts.x_tb.adjoint()) / cplx(0, 2);
    double top = schmidt_coefficients(psi.vec(), psi.dims()).front();
    parts.s_x = top * top;
    return parts;
}

PureState resolve_psi(const PsiChoice &choice, const PureState &phi) {
    const DimSpec &dims = phi.dims();
    switch (choice.kind) {
        case PsiKind::kCustom:
            if (!choice.custom || choice.custom->dims() != dims) {
                throw Error(ErrorCode::kDimensionMismatch, "custom psi missing or dims differ from phi");
            }
            return *choice.custom;
        case PsiKind::kProduct:
            return PureState(basis_vector(dims.total(), 0), dims);
        case PsiKind::kMaxEntangledSchmidt:
            break;
    }
    const int da = dims[0];
    const int db = dims[1];
    Matrix amp(da, db);
    for (int i = 0; i < da; ++i) {
        for (int j = 0; j < db; ++j) {
            amp(i, j) = phi.vec()(i * db + j);
        }
    }
    // amp = U S V^dagger, so phi = sum_k s_k u_k (x) conj(v_k).
    Eigen::JacobiSVD<Matrix> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const int r = std::min(da, db);
    Vector psi = Vector::Zero(dims.total());
    for (int k = 0; k < r; ++k) {
        psi += kron(Vector(svd.matrixU().col(k)), Vector(svd.matrixV().col(k).conjugate()));
    }
    return PureState::normalized(psi, dims);
}

CoefficientGrid decompose(const Matrix &h, const InputBasis &basis) {
    const int da = basis.d_a();
    const int db = basis.d_b();
    if (h.rows() != da * db || h.cols() != da * db) {
        throw Error(ErrorCode::kDimensionMismatch, "decompose: operator does not match basis dims");
    }
    if (hermiticity_defect(h) > kHermitianTol * std::max(1.0, max_abs(h))) {
        throw Error(ErrorCode::kNotHermitian, "decompose: operator is not Hermitian");
    }
    if (!(basis.gram_condition() <= kMaxGramCondition)) {
        throw Error(ErrorCode::kIllConditioned, "decompose: input basis Gram condition exceeds 1e6");
    }
    const auto ga = hermitian_operator_basis(da);
    const auto gb = hermitian_operator_basis(db);
    RealMatrix hc(da * da, db * db);
    for (int k = 0; k < da * da; ++k) {
        for (int l = 0; l < db * db; ++l) {
            hc(k, l) = trace_product(kron(ga[k], gb[l]), h).real();
        }
    }
    // Solve coords_a * C * coords_b^T = hc in the least-squares sense.
    RealMatrix left = basis.transposed_coords_a().colPivHouseholderQr().solve(hc);
    RealMatrix c = basis.transposed_coords_b().colPivHouseholderQr().solve(left.transpose()).transpose();

    double residual = max_abs(reconstruct(c, basis) - h);
    if (residual > kDecompositionResidualTol) {
        throw Error(ErrorCode::kResidualTooLarge, "decompose: reconstruction residual " + std::to_string(residual));
    }
    return c;
}

Matrix reconstruct(const CoefficientGrid &coeffs, const InputBasis &basis) {
    if (coeffs.rows() != basis.size_a() || coeffs.cols() != basis.size_b()) {
        throw Error(ErrorCode::kDimensionMismatch, "reconstruct: grid shape does not match basis");
    }
    const int n = basis.d_a() * basis.d_b();
    Matrix sum = Matrix::Zero(n, n);
    for (int s = 0; s < basis.size_a(); ++s) {
        Matrix ta = basis.side_a()[s].mat().transpose();
        for (int t = 0; t < basis.size_b(); ++t) {
            sum += coeffs(s, t) * kron(ta, Matrix(basis.side_b()[t].mat().transpose()));
        }
    }
    return sum;
}

WitnessBundle bundle_from_vectors(const PureState &phi, const PureState &psi, const InputBasis &basis) {
    const DimSpec &dims = phi.dims();
    if (dims.size() != 2 || dims[0] != basis.d_a() || dims[1] != basis.d_b()) {
        throw Error(ErrorCode::kDimensionMismatch, "bundle: phi dims do not match input basis");
    }
    Matrix w = hermitian_part(partial_transpose(phi.projector(), dims, 1));
    NonlinearParts parts = build_nonlinear(phi, psi);
    CoefficientGrid alpha = decompose(w, basis);
    CoefficientGrid beta = decompose(parts.h1, basis);
    CoefficientGrid gamma = decompose(parts.h2, basis);
    CoefficientSums sums{alpha.sum(), beta.sum(), gamma.sum()};
    double k = parts.s_x * dims[0] * dims[1];
    return WitnessBundle{dims, std::move(w), phi, psi, std::move(parts), std::move(alpha), std::move(beta),
                         std::move(gamma), sums, k};
}

WitnessBundle make_bundle(const DensityMatrix &rho_tilde, const PsiChoice &psi_choice, const InputBasis &basis) {
    LinearWitness lw = witness_from_npt(rho_tilde);
    PureState psi = resolve_psi(psi_choice, lw.phi);
    return bundle_from_vectors(lw.phi, psi, basis);
}

double linear_value(const Matrix &w, const Matrix &rho) {
    if (w.rows() != rho.rows() || w.cols() != rho.cols()) {
        throw Error(ErrorCode::kDimensionMismatch, "linear_value: operator and state differ in size");
    }
    cplx v = trace_product(w, rho);
    if (std::abs(v.imag()) > 1e-10) {
        throw Error(ErrorCode::kImaginaryValue, "linear_value: tr(W rho) has imaginary part " + std::to_string(v.imag()));
    }
    return v.real();
}

double nonlinear_value(const WitnessBundle &bundle, const Matrix &rho) {
    double lin = linear_value(bundle.w, rho);
    if (rho.rows() != bundle.parts.x_tb.rows()) {
        throw Error(ErrorCode::kDimensionMismatch, "nonlinear_value: state does not match bundle dims");
    }
    cplx x = trace_product(bundle.parts.x_tb, rho);
    return lin - std::norm(x) / bundle.parts.s_x;
}

void write_bundle(std::ostream &out, const WitnessBundle &b) {
    out << "mdinew-witness-bundle 1\n";
    out << "dims " << b.dims[0] << ' ' << b.dims[1] << '\n';
    out << "s_x " << format_double(b.parts.s_x) << '\n';
    out << "phi\n";
    for (Eigen::Index i = 0; i < b.phi.vec().size(); ++i) {
        out << format_double(b.phi.vec()(i).real()) << ' ' << format_double(b.phi.vec()(i).imag()) << '\n';
    }
    out << "psi\n";
    for (Eigen::Index i = 0; i < b.psi.vec().size(); ++i) {
        out << format_double(b.psi.vec()(i).real()) << ' ' << format_double(b.psi.vec()(i).imag()) << '\n';
    }
    write_grid(out, "alpha", b.alpha);
    write_grid(out, "beta", b.beta);
    write_grid(out, "gamma", b.gamma);
}

WitnessBundle read_bundle(std::istream &in) {
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "mdinew-witness-bundle" || version != 1) {
        throw Error(ErrorCode::kParse, "bundle: bad header");
    }
    int da = 0;
    int db = 0;
    if (!(in >> tag >> da >> db) || tag != "dims" || da < 1 || db < 1) {
        throw Error(ErrorCode::kParse, "bundle: expected `dims d_A d_B`");
    }
    double s_x = 0;
    if (!(in >> tag >> s_x) || tag != "s_x") {
        throw Error(ErrorCode::kParse, "bundle: expected `s_x value`");
    }
    DimSpec dims{da, db};
    PureState phi = PureState::normalized(read_vector(in, "phi", da * db), dims);
    PureState psi = PureState::normalized(read_vector(in, "psi", da * db), dims);
    CoefficientGrid alpha = read_grid(in, "alpha");
    CoefficientGrid beta = read_grid(in, "beta");
    CoefficientGrid gamma = read_grid(in, "gamma");

    NonlinearParts parts = build_nonlinear(phi, psi);
    if (std::abs(parts.s_x - s_x) > 1e-12) {
        throw Error(ErrorCode::kParse, "bundle: stored s_x disagrees with psi");
    }
    parts.s_x = s_x;
    Matrix w = hermitian_part(partial_transpose(phi.projector(), dims, 1));
    CoefficientSums sums{alpha.sum(), beta.sum(), gamma.sum()};
    double k = s_x * da * db;
    return WitnessBundle{dims, std::move(w), std::move(phi), std::move(psi), std::move(parts), std::move(alpha),
                         std::move(beta), std::move(gamma), sums, k};
}

}  // namespace mdinew
