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

#include "mdinew/state_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mdinew/error.h"

namespace mdinew {

std::string format_double(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

Matrix read_matrix_entries(std::istream &in, int n) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            double re = 0;
            double im = 0;
            if (!(in >> re >> im)) {
                throw Error(ErrorCode::kParse,
                            "matrix entry (" + std::to_string(r) + "," + std::to_string(c) + ") missing or malformed");
            }
            m(r, c) = cplx(re, im);
        }
    }
    return m;
}

void write_matrix_entries(std::ostream &out, const Matrix &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out << format_double(m(r, c).real()) << ' ' << format_double(m(r, c).imag()) << '\n';
        }
    }
}

DensityMatrix read_state(std::istream &in) {
    std::string tag;
    int da = 0;
    int db = 0;
    if (!(in >> tag >> da >> db) || tag != "dims" || da < 1 || db < 1) {
        throw Error(ErrorCode::kParse, "state file must start with `dims d_A d_B`");
    }
    Matrix m = read_matrix_entries(in, da * db);
    std::string extra;
    if (in >> extra) {
        throw Error(ErrorCode::kParse, "trailing content in state file");
    }
    return DensityMatrix(m, DimSpec{da, db});
}

void write_state(std::ostream &out, const DensityMatrix &rho) {
    const auto &dims = rho.dims();
    if (dims.size() != 2) {
        throw Error(ErrorCode::kDimensionMismatch, "state files hold bipartite states");
    }
    out << "dims " << dims[0] << ' ' << dims[1] << '\n';
    write_matrix_entries(out, rho.mat());
}

DensityMatrix load_state_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIo, "cannot open state file " + path.string());
    }
    return read_state(in);
}

void save_state_file(const std::filesystem::path &path, const DensityMatrix &rho) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::kIo, "cannot write state file " + path.string());
    }
    write_state(out, rho);
}

}  // namespace mdinew
