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

#ifndef MDINEW_NOISE_H
#define MDINEW_NOISE_H

#include <cmath>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdinew/linalg.h"
#include "mdinew/protocol.h"
#include "mdinew/rng.h"
#include "mdinew/witness.h"

namespace mdinew {

inline constexpr double kCompletenessTol = 1e-10;

/// Completely positive map in Kraus form, M -> sum_k K_k M K_k^dagger.
/// Channels built through `from_kraus` are trace preserving; adjoints are
/// unital instead.
class KrausChannel {
   public:
    /// Validates sum_k K_k^dagger K_k = I.
    static KrausChannel from_kraus(std::vector<Matrix> kraus, std::string label);

    const std::vector<Matrix> &kraus() const {
        return kraus_;
    }
    int dim() const {
        return dim_;
    }
    const std::string &label() const {
        return label_;
    }

    Matrix apply(const Matrix &m) const;
    bool is_trace_preserving(double tol = kCompletenessTol) const;
    bool is_unital(double tol = kCompletenessTol) const;

   private:
    KrausChannel(std::vector<Matrix> kraus, std::string label);
    friend KrausChannel adjoint_channel(const KrausChannel &ch);

    std::vector<Matrix> kraus_;
    int dim_ = 0;
    std::string label_;
};

Matrix apply_channel(const Matrix &m, const KrausChannel &ch);

/// M -> sum_k K_k^dagger M K_k, the trace dual of `ch`.
KrausChannel adjoint_channel(const KrausChannel &ch);

/// Applies `ch` to the listed subsystems (in the listed order) of a
/// multi-party operator, identity elsewhere.
Matrix apply_on_subsystems(const Matrix &m, const DimSpec &dims, std::vector<int> targets, const KrausChannel &ch);

KrausChannel identity_channel(int d);
/// rho -> (1 - p) rho + p tr(rho) I/d, via the Weyl-Heisenberg operators.
KrausChannel depolarizing(int d, double p);
KrausChannel amplitude_damping(double gamma);
/// Lambda_A (x) Lambda_B
KrausChannel local_pair(const KrausChannel &a, const KrausChannel &b);
KrausChannel global_from_kraus(std::vector<Matrix> kraus, std::string label = "global");
/// Kraus pair {sqrt(1-q) I, sqrt(q) (cos(theta) I - i sin(theta) SWAP)} on
/// C^d (x) C^d. Entangling for theta away from multiples of pi/2.
KrausChannel swap_rotation(int d, double theta, double q);
/// Random channel with `n_kraus` operators from a Haar isometry.
KrausChannel random_channel(int d, int n_kraus, Rng &rng);

/// identity(d), depolarizing(d, p), amplitude_damping(gamma),
/// swap_rotation(d, theta, q).
KrausChannel standard_channel(const std::string &name, const std::vector<double> &params);

// Channel spec file: a channel name line followed by one parameter per line,
// or `kraus n d` followed by n matrices as d*d `re im` lines each. Names also
// include local_depolarizing (dA dB pA pB) and local_amplitude_damping
// (gammaA gammaB).
KrausChannel read_channel_spec(std::istream &in);
KrausChannel load_channel_file(const std::filesystem::path &path);

/// Inputs (tau_s, omega_t) and (m_A, m_B) pass through `input_noise`, a
/// channel on A_in (x) B_in, before the four-party trace.
ProbabilityTable noisy_table(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                             const PovmEffect &b1, const KrausChannel &input_noise);

enum class PreservationStatus { kPreserves, kViolated, kInconclusive };

const char *preservation_status_name(PreservationStatus s);

struct PreservationReport {
    PreservationStatus status = PreservationStatus::kInconclusive;
    int samples_tested = 0;
    std::optional<std::pair<Matrix, Matrix>> counterexample;  // (input, adjoint output)
    double worst_pt_eigenvalue = 0;
};

/// Pushes random separable PSD operators on A_in (x) B_in through the adjoint
/// of `ch` and tests the outputs with the PPT criterion. Only 2x2 and 2x3 can
/// return kPreserves.
PreservationReport preservation_probe(const KrausChannel &ch, const DimSpec &input_dims, int n_samples, Rng &rng);

struct NoiseComparison {
    std::string label;
    double i_value = NAN;
    double n_value = NAN;
    bool i_misdetects = false;  // I < 0; a misdetection when rho is separable
    bool n_misdetects = false;
    std::string error;  // nonempty when N could not be evaluated
};

std::vector<NoiseComparison> compare_ew_new(const DensityMatrix &rho, const InputBasis &basis, const PovmEffect &a1,
                                            const PovmEffect &b1, const std::vector<KrausChannel> &noise_sweep,
                                            const WitnessBundle &bundle);

}  // namespace mdinew

#endif
