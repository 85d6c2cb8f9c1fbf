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
#include <sstream>

#include "mdinew/error.h"
#include "mdinew/linalg.h"
#include "mdinew/rng.h"
#include "mdinew/states.h"
#include "mdinew/witness.h"
#include "test_util.h"

using namespace mdinew;

namespace {

Matrix random_hermitian(int n, Rng &rng) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    return (g + g.adjoint()) / 2.0;
}

// Sum_st c_st tau_s^T (x) omega_t^T with the oracle Kronecker product.
Matrix reassemble(const CoefficientGrid &c, const InputBasis &basis) {
    const int n = basis.d_a() * basis.d_b();
    Matrix out = Matrix::Zero(n, n);
    for (int s = 0; s < basis.size_a(); ++s) {
        for (int t = 0; t < basis.size_b(); ++t) {
            Matrix ta = basis.side_a()[s].mat().transpose();
            Matrix tb = basis.side_b()[t].mat().transpose();
            out += c(s, t) * oracle::kron(ta, tb);
        }
    }
    return out;
}

Matrix projector(const Vector &v) {
    return v * v.adjoint();
}

}  // namespace

TEST_CASE("witness from the singlet is SWAP/2") {
    DensityMatrix singlet = named_state("singlet");
    LinearWitness lw = witness_from_npt(singlet);
    CHECK(oracle::max_abs_diff(lw.w, oracle::swap_operator(2) / 2.0) < 1e-12);
    CHECK(linear_value(lw.w, singlet.mat()) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(lw.pt_min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));

    LinearWitness again = witness_from_npt(singlet);
    CHECK(again.phi.vec() == lw.phi.vec());
}

TEST_CASE("PPT inputs have no witness") {
    const double p[] = {0.2};
    try {
        witness_from_npt(named_state("werner", p));
        FAIL("expected NotNpt");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kNotNpt);
    }
    Rng rng(1);
    for (int k = 0; k < 10; ++k) {
        Vector prod = kron(random_pure_vector(2, rng), random_pure_vector(3, rng));
        CHECK_THROWS_AS(witness_from_npt(DensityMatrix(projector(prod), DimSpec{2, 3})), Error);
    }
}

TEST_CASE("linear value closed forms") {
    Matrix w = oracle::swap_operator(2) / 2.0;
    CHECK(linear_value(w, named_state("singlet").mat()) == doctest::Approx(-0.5));
    CHECK(linear_value(w, projector(basis_vector(4, 0))) == doctest::Approx(0.5));
    for (int k = 0; k <= 10; ++k) {
        const double p[] = {k / 10.0};
        CHECK(linear_value(w, named_state("werner", p).mat()) ==
              doctest::Approx((1.0 - 3.0 * p[0]) / 4.0).epsilon(1e-12));
    }
    const double third[] = {1.0 / 3.0};
    CHECK(std::abs(linear_value(w, named_state("werner", third).mat())) < 1e-15);

    Matrix anti = Matrix::Zero(4, 4);
    anti(0, 0) = cplx(0, 1);
    CHECK_THROWS_AS(linear_value(anti, identity(4) / 4.0), Error);
}

TEST_CASE("nonlinear parts") {
    PureState phi(max_entangled_vector(2), DimSpec{2, 2});
    NonlinearParts prod = build_nonlinear(phi, PureState(basis_vector(4, 0), DimSpec{2, 2}));
    CHECK(prod.s_x == doctest::Approx(1.0));
    NonlinearParts ent = build_nonlinear(phi, phi);
    CHECK(ent.s_x == doctest::Approx(0.5));

    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        PureState a(random_pure_vector(6, rng), DimSpec{2, 3});
        PureState b(random_pure_vector(6, rng), DimSpec{2, 3});
        NonlinearParts parts = build_nonlinear(a, b);
        Matrix x = a.vec() * b.vec().adjoint();
        Matrix x_tb = oracle::partial_transpose(x, {2, 3}, 1);
        CHECK(oracle::max_abs_diff(parts.h1 + cplx(0, 1) * parts.h2, x_tb) <= 1e-12);
        CHECK(hermiticity_defect(parts.h1) <= 1e-12);
        CHECK(hermiticity_defect(parts.h2) <= 1e-12);
    }
}

TEST_CASE("standard bases") {
    auto b2 = standard_basis(2);
    REQUIRE(b2.size() == 4);
    const double r = 1.0 / std::sqrt(2.0);
    Vector plus(2);
    plus << r, r;
    Vector yplus(2);
    yplus << r, cplx(0, r);
    CHECK(oracle::max_abs_diff(b2[0].mat(), projector(basis_vector(2, 0))) < 1e-15);
    CHECK(oracle::max_abs_diff(b2[1].mat(), projector(basis_vector(2, 1))) < 1e-15);
    CHECK(oracle::max_abs_diff(b2[2].mat(), projector(plus)) < 1e-15);
    CHECK(oracle::max_abs_diff(b2[3].mat(), projector(yplus)) < 1e-15);

    // Gram matrix of tr(tau_i tau_j) is nonsingular.
    Eigen::Matrix4d gram;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            gram(i, j) = oracle::trace_of_product(b2[i].mat(), b2[j].mat()).real();
        }
    }
    CHECK(std::abs(gram.determinant()) > 1e-3);

    auto b3 = standard_basis(3);
    CHECK(b3.size() == 9);
    for (const auto &s : b3) {
        CHECK(std::abs(s.mat().trace().real() - 1.0) < 1e-12);
        CHECK(min_eigenvalue(s.mat()) >= -1e-12);
    }
    CHECK(standard_input_basis(2, 3).gram_condition() <= kMaxGramCondition);
}

TEST_CASE("ill-conditioned bases are rejected") {
    auto side = standard_basis(2);
    const double eps = 1e-4;
    Vector near_plus(2);
    near_plus << 1.0, std::polar(1.0, eps);
    near_plus /= std::sqrt(2.0);
    side[3] = DensityMatrix(projector(near_plus), DimSpec{2});
    try {
        InputBasis bad(side, standard_basis(2));
        FAIL("expected IllConditioned");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::kIllConditioned);
    }
    CHECK_THROWS_AS(InputBasis(standard_basis(2), std::vector<DensityMatrix>(3, standard_basis(2)[0])), Error);
}

TEST_CASE("decompose examples") {
    InputBasis basis = standard_input_basis(2, 2);
    Matrix h = kron(Matrix(basis.side_a()[0].mat().transpose()), Matrix(basis.side_b()[0].mat().transpose()));
    CoefficientGrid c = decompose(h, basis);
    for (int s = 0; s < 4; ++s) {
        for (int t = 0; t < 4; ++t) {
            CHECK(c(s, t) == doctest::Approx(s == 0 && t == 0 ? 1.0 : 0.0).epsilon(1e-12));
        }
    }
    CoefficientGrid ci = decompose(identity(4), basis);
    CHECK(oracle::max_abs_diff(reassemble(ci, basis), identity(4)) <= 1e-10);

    Matrix w = oracle::swap_operator(2) / 2.0;
    CoefficientGrid cw = decompose(w, basis);
    CHECK(cw.cwiseAbs().maxCoeff() > 0.1);
    CHECK(oracle::max_abs_diff(reassemble(cw, basis), w) <= 1e-8);
}

TEST_CASE("decompose then reconstruct on random Hermitian operators") {
    Rng rng(3);
    for (auto [da, db] : {std::pair{2, 2}, std::pair{2, 3}}) {
        InputBasis basis = standard_input_basis(da, db);
        for (int k = 0; k < 100; ++k) {
            Matrix h = random_hermitian(da * db, rng);
            CoefficientGrid c = decompose(h, basis);
            CHECK(oracle::max_abs_diff(reassemble(c, basis), h) <= 1e-8);
            CHECK(oracle::max_abs_diff(reconstruct(c, basis), h) <= 1e-8);
        }
    }
}

TEST_CASE("bundles") {
    InputBasis basis = standard_input_basis(2, 2);
    DensityMatrix singlet = named_state("singlet");
    WitnessBundle def = make_bundle(singlet, PsiChoice{}, basis);
    CHECK(def.s_x() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(def.k == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(def.coeff_sums.alpha == doctest::Approx(def.alpha.sum()));
    CHECK(def.coeff_sums.beta == doctest::Approx(def.beta.sum()));
    CHECK(def.coeff_sums.gamma == doctest::Approx(def.gamma.sum()));
    CHECK(oracle::max_abs_diff(reassemble(def.alpha, basis), def.w) <= 1e-8);
    CHECK(oracle::max_abs_diff(reassemble(def.beta, basis), def.parts.h1) <= 1e-8);
    CHECK(oracle::max_abs_diff(reassemble(def.gamma, basis), def.parts.h2) <= 1e-8);

    WitnessBundle prod = make_bundle(singlet, PsiChoice{PsiKind::kProduct, std::nullopt}, basis);
    CHECK(prod.s_x() == doctest::Approx(1.0));
    CHECK(prod.k == doctest::Approx(4.0));

    const double p[] = {0.3};
    CHECK_THROWS_AS(make_bundle(named_state("werner", p), PsiChoice{}, basis), Error);

    // F(singlet) = -1/2 - |tr(X^TB rho)|^2 / sX <= -1/2; here X^TB = W so F = -1/2 - 1/2.
    CHECK(nonlinear_value(def, singlet.mat()) <= -0.5);
    CHECK(nonlinear_value(def, singlet.mat()) == doctest::Approx(-1.0).epsilon(1e-12));

    Rng rng(4);
    PureState psi(random_pure_vector(4, rng), DimSpec{2, 2});
    WitnessBundle custom = make_bundle(singlet, PsiChoice::custom_state(psi), basis);
    PureState rotated(kron(random_unitary(2, rng), random_unitary(2, rng)) * psi.vec(), DimSpec{2, 2});
    WitnessBundle custom_rot = make_bundle(singlet, PsiChoice::custom_state(rotated), basis);
    CHECK(std::abs(custom.s_x() - custom_rot.s_x()) <= 1e-9);
    auto sc = schmidt_coefficients(psi.vec(), DimSpec{2, 2});
    CHECK(custom.s_x() == doctest::Approx(sc[0] * sc[0]).epsilon(1e-12));
}

TEST_CASE("nonlinear value never exceeds linear value") {
    Rng rng(5);
    for (auto dims : {DimSpec{2, 2}, DimSpec{2, 3}}) {
        InputBasis basis = standard_input_basis(dims[0], dims[1]);
        for (int k = 0; k < 50; ++k) {
            DensityMatrix rt = random_density(dims, rng);
            if (min_pt_eigenvalue(rt.mat(), dims) > -kNptTol) {
                continue;
            }
            WitnessBundle b = make_bundle(rt, PsiChoice{}, basis);
            CHECK(linear_value(b.w, rt.mat()) < 0.0);
            DensityMatrix rho = random_density(dims, rng);
            CHECK(nonlinear_value(b, rho.mat()) <= linear_value(b.w, rho.mat()) + 1e-10);
        }
    }
}

TEST_CASE("witnesses are nonnegative on separable states") {
    Rng rng(6);
    InputBasis basis = standard_input_basis(2, 2);
    std::vector<WitnessBundle> bundles;
    while (bundles.size() < 10) {
        DensityMatrix rt = random_density(DimSpec{2, 2}, rng);
        if (min_pt_eigenvalue(rt.mat(), DimSpec{2, 2}) < -kNptTol) {
            bundles.push_back(make_bundle(rt, PsiChoice{}, basis));
        }
    }
    double worst_w = 1;
    double worst_f = 1;
    for (int k = 0; k < 10000; ++k) {
        const WitnessBundle &b = bundles[k % bundles.size()];
        Matrix sigma = random_separable(DimSpec{2, 2}, 1 + k % 4, rng).assemble().mat();
        worst_w = std::min(worst_w, linear_value(b.w, sigma));
        worst_f = std::min(worst_f, nonlinear_value(b, sigma));
    }
    CHECK(worst_w >= -1e-9);
    CHECK(worst_f >= -1e-9);
}

TEST_CASE("bundle text round trip") {
    Rng rng(7);
    InputBasis basis = standard_input_basis(2, 3);
    DensityMatrix rt = random_density(DimSpec{2, 3}, rng);
    while (min_pt_eigenvalue(rt.mat(), DimSpec{2, 3}) > -kNptTol) {
        rt = random_density(DimSpec{2, 3}, rng);
    }
    WitnessBundle b = make_bundle(rt, PsiChoice{}, basis);
    std::stringstream ss;
    write_bundle(ss, b);
    WitnessBundle back = read_bundle(ss);
    CHECK(back.dims == b.dims);
    CHECK(std::abs(back.s_x() - b.s_x()) <= 1e-12);
    CHECK((back.alpha - b.alpha).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((back.beta - b.beta).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((back.gamma - b.gamma).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((back.phi.vec() - b.phi.vec()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((back.psi.vec() - b.psi.vec()).cwiseAbs().maxCoeff() <= 1e-12);
}
