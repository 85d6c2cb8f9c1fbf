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

#ifndef MDINEW_TESTS_TEST_UTIL_H
#define MDINEW_TESTS_TEST_UTIL_H

// Independent reference implementations used as oracles. They index tensors
// by explicit digit loops and never call the library routines they check.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline std::vector<int> digits(int index, const std::vector<int> &dims) {
    std::vector<int> out(dims.size());
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

inline int undigits(const std::vector<int> &d, const std::vector<int> &dims) {
    int index = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        index = index * dims[k] + d[k];
    }
    return index;
}

inline int total(const std::vector<int> &dims) {
    int t = 1;
    for (int d : dims) {
        t *= d;
    }
    return t;
}

inline Mat partial_transpose(const Mat &m, const std::vector<int> &dims, int target) {
    const int n = total(dims);
    Mat out(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            auto dr = digits(r, dims);
            auto dc = digits(c, dims);
            std::swap(dr[target], dc[target]);
            out(undigits(dr, dims), undigits(dc, dims)) = m(r, c);
        }
    }
    return out;
}

inline Mat partial_trace(const Mat &m, const std::vector<int> &dims, const std::vector<bool> &keep) {
    std::vector<int> kept;
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (keep[k]) {
            kept.push_back(dims[k]);
        }
    }
    const int n = total(dims);
    const int nk = total(kept);
    Mat out = Mat::Zero(nk, nk);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            auto dr = digits(r, dims);
            auto dc = digits(c, dims);
            bool diagonal = true;
            std::vector<int> kr;
            std::vector<int> kc;
            for (std::size_t k = 0; k < dims.size(); ++k) {
                if (keep[k]) {
                    kr.push_back(dr[k]);
                    kc.push_back(dc[k]);
                } else if (dr[k] != dc[k]) {
                    diagonal = false;
                }
            }
            if (diagonal) {
                out(undigits(kr, kept), undigits(kc, kept)) += m(r, c);
            }
        }
    }
    return out;
}

inline Mat kron(const Mat &a, const Mat &b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            for (int k = 0; k < b.rows(); ++k) {
                for (int l = 0; l < b.cols(); ++l) {
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return out;
}

// tr(A B) by explicit double sum.
inline cplx trace_of_product(const Mat &a, const Mat &b) {
    cplx s = 0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            s += a(i, j) * b(j, i);
        }
    }
    return s;
}

inline Mat swap_operator(int d) {
    Mat s = Mat::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            s(j * d + i, i * d + j) = 1.0;
        }
    }
    return s;
}

inline double max_abs_diff(const Mat &a, const Mat &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace oracle

#endif
