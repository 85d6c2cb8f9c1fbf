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

#include "mdinew/noise.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "mdinew/error.h"
#include "mdinew/state_io.h"
#include "mdinew/states.h"

namespace mdinew {

namespace {

Matrix kraus_sum(const std::vector<Matrix> &kraus, bool dagger_first) {
    const auto d = kraus.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &k : kraus) {
        sum += dagger_first ? Matrix(k.adjoint() * k) : Matrix(k * k.adjoint());
    }
    return sum;
}

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must lie in [0, 1]");
    }
}

int int_param(double v, const char *what) {
    if (!(v >= 1.0) || v != std::floor(v)) {
        throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be a positive integer");
    }
    return static_cast<int>(v);
}

Matrix swap_operator(int d) {
    Matrix s = Matrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            s(j * d + i, i * d + j) = 1.0;
        }
    }
    return s;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<Matrix> kraus, std::string label)
    : kraus_(std::move(kraus)), label_(std::move(label)) {
    if (kraus_.empty()) {
        throw Error(ErrorCode::kInvalidChannel, "channel needs at least one Kraus operator");
    }
    dim_ = static_cast<int>(kraus_.front().rows());
    for (const auto &k : kraus_) {
        if (k.rows() != dim_ || k.cols() != dim_) {
            throw Error(ErrorCode::kInvalidChannel, "Kraus operators must be square and of equal size");
        }
    }
}

KrausChannel KrausChannel::from_kraus(std::vector<Matrix> kraus, std::string label) {
    KrausChannel ch(std::move(kraus), std::move(label));
    if (!ch.is_trace_preserving()) {
        throw Error(ErrorCode::kInvalidChannel,
                    "Kraus completeness violated by " +
                        std::to_string(max_abs(kraus_sum(ch.kraus_, true) - identity(ch.dim_))) + " for '" +
                        ch.label_ + "'");
    }
    return ch;
}

Matrix KrausChannel::apply(const Matrix &m) const {
    if (m.rows() != dim_ || m.cols() != dim_) {
        throw Error(ErrorCode::kDimensionMismatch, "channel '" + label_ + "' applied to operator of wrong size");
    }
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto &k : kraus_) {
        out.noalias() += k * m * k.adjoint();
    }
    return out;
}

bool KrausChannel::is_trace_preserving(double tol) const {
    return max_abs(kraus_sum(kraus_, true) - identity(dim_)) <= tol;
}

bool KrausChannel::is_unital(double tol) const {
    return max_abs(kraus_sum(kraus_, false) - identity(dim_)) <= tol;
}

Matrix apply_channel(const Matrix &m, const KrausChannel &ch) {
    return ch.apply(m);
}

KrausChannel adjoint_channel(const KrausChannel &ch) {
    std::vector<Matrix> adj;
    adj.reserve(ch.kraus().size());
    for (const auto &k : ch.kraus()) {
        adj.push_back(k.adjoint());
    }
    return KrausChannel(std::move(adj), ch.label() + "^+");
}

Matrix apply_on_subsystems(const Matrix &m, const DimSpec &dims, std::vector<int> targets, const KrausChannel &ch) {
    if (targets.empty() || targets.size() > dims.size()) {
        throw Error(ErrorCode::kInvalidArgument, "apply_on_subsystems: bad target set");
    }
    int target_dim = 1;
    std::vector<bool> used(dims.size(), false);
    for (int t : targets) {
        if (t < 0 || static_cast<std::size_t>(t) >= dims.size() || used[t]) {
            throw Error(ErrorCode::kInvalidArgument, "apply_on_subsystems: bad target set");
        }
        used[t] = true;
        target_dim *= dims[t];
    }
    if (target_dim != ch.dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "apply_on_subsystems: channel dimension does not match targets");
    }
    std::vector<int> perm = targets;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (!used[k]) {
            perm.push_back(static_cast<int>(k));
        }
    }
    Matrix moved = permute_subsystems(m, dims, perm);
    const int rest = dims.total() / target_dim;
    Matrix out = Matrix::Zero(dims.total(), dims.total());
    for (const auto &k : ch.kraus()) {
        Matrix lifted = kron(k, identity(rest));
        out.noalias() += lifted * moved * lifted.adjoint();
    }
    return permute_subsystems(out, dims.permuted(perm), inverse_permutation(perm));
}

KrausChannel identity_channel(int d) {
    return KrausChannel::from_kraus({identity(d)}, "identity(" + std::to_string(d) + ")");
}

KrausChannel depolarizing(int d, double p) {
    if (d < 2) {
        throw Error(ErrorCode::kInvalidArgument, "depolarizing: d must be >= 2");
    }
    check_probability(p, "depolarizing p");
    const double pi = std::numbers::pi;
    Matrix shift = Matrix::Zero(d, d);
    Matrix clock = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        shift((j + 1) % d, j) = 1.0;
        clock(j, j) = std::polar(1.0, 2.0 * pi * j / d);
    }
    const double dd = static_cast<double>(d) * d;
    std::vector<Matrix> kraus;
    Matrix xa = identity(d);
    for (int a = 0; a < d; ++a) {
        Matrix u = xa;
        for (int b = 0; b < d; ++b) {
            double w = (a == 0 && b == 0) ? 1.0 - p + p / dd : p / dd;
            if (w > 0) {
                kraus.push_back(std::sqrt(w) * u);
            }
            u = u * clock;
        }
        xa = shift * xa;
    }
    std::ostringstream label;
    label << "depolarizing(" << d << "," << format_double(p) << ")";
    return KrausChannel::from_kraus(std::move(kraus), label.str());
}

KrausChannel amplitude_damping(double gamma) {
    check_probability(gamma, "amplitude damping gamma");
    Matrix k0 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    Matrix k1 = Matrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    return KrausChannel::from_kraus({k0, k1}, "amplitude_damping(" + format_double(gamma) + ")");
}

KrausChannel local_pair(const KrausChannel &a, const KrausChannel &b) {
    std::vector<Matrix> kraus;
    kraus.reserve(a.kraus().size() * b.kraus().size());
    for (const auto &ka : a.kraus()) {
        for (const auto &kb : b.kraus()) {
            kraus.push_back(kron(ka, kb));
        }
    }
    return KrausChannel::from_kraus(std::move(kraus), a.label() + "*" + b.label());
}

KrausChannel global_from_kraus(std::vector<Matrix> kraus, std::string label) {
    return KrausChannel::from_kraus(std::move(kraus), std::move(label));
}

KrausChannel swap_rotation(int d, double theta, double q) {
    check_probability(q, "swap_rotation q");
    Matrix u = std::cos(theta) * identity(d * d) - cplx(0, std::sin(theta)) * swap_operator(d);
    std::vector<Matrix> kraus{std::sqrt(q) * u};
    if (q < 1.0) {
        kraus.insert(kraus.begin(), std::sqrt(1.0 - q) * identity(d * d));
    }
    return KrausChannel::from_kraus(std::move(kraus), "swap_rotation(" + std::to_string(d) + "," +
                                                          format_double(theta) + "," + format_double(q) + ")");
}

KrausChannel random_channel(int d, int n_kraus, Rng &rng) {
    if (d < 1 || n_kraus < 1) {
        throw Error(ErrorCode::kInvalidArgument, "random_channel: bad sizes");
    }
    Matrix g(n_kraus * d, d);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cplx(re, im);
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix iso = qr.householderQ() * Matrix::Identity(n_kraus * d, d);
    std::vector<Matrix> kraus;
    for (int k = 0; k < n_kraus; ++k) {
        kraus.push_back(iso.block(k * d, 0, d, d));
    }
    return KrausChannel::from_kraus(std::move(kraus), "random(" + std::to_string(d) + "," + std::to_string(n_kraus) + ")");
}

KrausChannel standard_channel(const std::string &name, const std::vector<double> &params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n) {
            throw Error(ErrorCode::kInvalidArgument, "channel '" + name + "' takes " + std::to_string(n) + " parameters");
        }
    };
    if (name == "identity") {
        need(1);
        return identity_channel(int_param(params[0], "identity d"));
    }
    if (name == "depolarizing") {
        need(2);
        return depolarizing(int_param(params[0], "depolarizing d"), params[1]);
    }
    if (name == "amplitude_damping") {
        need(1);
        return amplitude_damping(params[0]);
    }
    if (name == "swap_rotation") {
        need(3);
        return swap_rotation(int_param(params[0], "swap_rotation d"), params[1], params[2]);
    }
    if (name == "local_depolarizing") {
        need(4);
        return local_pair(depolarizing(int_param(params[0], "d_A"), params[2]),
                          depolarizing(int_param(params[1], "d_B"), params[3]));
    }
    if (name == "local_amplitude_damping") {
        need(2);
        return local_pair(amplitude_damping(params[0]), amplitude_damping(params[1]));
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown channel '" + name + "'");
}

KrausChannel read_channel_spec(std::istream &in) {
    std::string name;
    if (!(in >> name)) {
        throw Error(ErrorCode::kParse, "channel spec is empty");
    }
    if (name == "kraus") {
        int n = 0;
        int d = 0;
        if (!(in >> n >> d) || n < 1 || d < 1) {
            throw Error(ErrorCode::kParse, "expected `kraus n d`");
        }
        std::vector<Matrix> kraus;
        for (int k = 0; k < n; ++k) {
            kraus.push_back(read_matrix_entries(in, d));
        }
        return global_from_kraus(std::move(kraus), "kraus(" + std::to_string(n) + "," + std::to_string(d) + ")");
    }
    std::vector<double> params;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t used = 0;
            params.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception &) {
            throw Error(ErrorCode::kParse, "channel parameter '" + tok + "' is not a number");
        }
    }
    return standard_channel(name, params);
}

KrausChannel load_channel_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open channel file " + path.string());
    }
    return read_channel_spec(in);
}

ProbabilityTable noisy_table(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                             const PovmEffect &b1, const KrausChannel &input_noise) {
    DichotomicMeasurement m(a1, b1);
    const int da = basis.d_a();
    const int db = basis.d_b();
    if (rho.dims().size() != 2 || rho.dims()[0] != da || rho.dims()[1] != db || m.d_a() != da || m.d_b() != db) {
        throw Error(ErrorCode::kDimensionMismatch, "noisy_table: state, basis and effects disagree");
    }
    if (input_noise.dim() != da * db) {
        throw Error(ErrorCode::kDimensionMismatch, "noisy_table: noise must act on A_in (x) B_in");
    }
    // (A_in, B_in, A, B) -> (A_in, A, B, B_in)
    const DimSpec staged{da, db, da, db};
    const int perm[] = {0, 2, 3, 1};
    auto distribution = [&](const Matrix &inputs) {
        Matrix noisy = input_noise.apply(inputs);
        return m.distribution(permute_subsystems(kron(noisy, rho.mat()), staged, perm));
    };

    std::vector<OutcomeDistribution> full;
    full.reserve(static_cast<std::size_t>(basis.size_a() * basis.size_b()));
    for (const auto &tau : basis.side_a()) {
        for (const auto &omega : basis.side_b()) {
            full.push_back(distribution(kron(tau.mat(), omega.mat())));
        }
    }
    OutcomeDistribution mm = distribution(identity(da * db) / static_cast<double>(da * db));
    return ProbabilityTable(da, db, basis.size_a(), basis.size_b(), std::move(full), mm, Provenance::kMeasured);
}

const char *preservation_status_name(PreservationStatus s) {
    switch (s) {
        case PreservationStatus::kPreserves:
            return "preserves";
        case PreservationStatus::kViolated:
            return "violated";
        case PreservationStatus::kInconclusive:
            return "inconclusive";
    }
    return "unknown";
}

PreservationReport preservation_probe(const KrausChannel &ch, const DimSpec &input_dims, int n_samples, Rng &rng) {
    if (input_dims.size() != 2 || input_dims.total() != ch.dim()) {
        throw Error(ErrorCode::kDimensionMismatch, "preservation_probe: input dims do not match channel");
    }
    const KrausChannel adj = adjoint_channel(ch);
    const int lo = std::min(input_dims[0], input_dims[1]);
    const int hi = std::max(input_dims[0], input_dims[1]);
    const bool ppt_exact = lo == 2 && (hi == 2 || hi == 3);

    PreservationReport report;
    report.worst_pt_eigenvalue = INFINITY;
    for (int i = 0; i < n_samples; ++i) {
        const int terms = 1 + static_cast<int>(rng.uniform_int(3));
        Matrix input = random_separable(input_dims, terms, rng).assemble().mat() * rng.uniform(0.1, 10.0);
        Matrix output = adj.apply(input);
        double scale = std::max(1.0, output.trace().real());
        double lowest = min_pt_eigenvalue(output, input_dims) / scale;
        report.worst_pt_eigenvalue = std::min(report.worst_pt_eigenvalue, lowest);
        report.samples_tested = i + 1;
        if (lowest < -kPsdTol) {
            report.status = PreservationStatus::kViolated;
            report.counterexample = std::make_pair(input, output);
            return report;
        }
    }
    report.status = ppt_exact ? PreservationStatus::kPreserves : PreservationStatus::kInconclusive;
    return report;
}

std::vector<NoiseComparison> compare_ew_new(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                                            const PovmEffect &b1, const std::vector<KrausChannel> &noise_sweep,
                                            const WitnessBundle &bundle) {
    std::vector<NoiseComparison> out;
    out.reserve(noise_sweep.size());
    for (const auto &ch : noise_sweep) {
        NoiseComparison rec;
        rec.label = ch.label();
        ProbabilityTable table = noisy_table(rho, basis, a1, b1, ch);
        rec.i_value = i_alpha(table, bundle.alpha);
        rec.i_misdetects = rec.i_value < 0;
        try {
            rec.n_value = n_phi(table, bundle);
            rec.n_misdetects = rec.n_value < 0;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::kDegenerateDenominator) {
                throw;
            }
            rec.error = e.what();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace mdinew
