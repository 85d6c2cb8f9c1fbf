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

#ifndef MDINEW_STATE_IO_H
#define MDINEW_STATE_IO_H

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mdinew/linalg.h"
#include "mdinew/states.h"

namespace mdinew {

/// %.17g-style text; parses back to the identical double.
std::string format_double(double x);

/// Reads n*n `re im` lines in row-major order.
Matrix read_matrix_entries(std::istream &in, int n);
void write_matrix_entries(std::ostream &out, const Matrix &m);

// State file: `dims d_A d_B`, then (d_A d_B)^2 lines of `re im`, row-major.
DensityMatrix read_state(std::istream &in);
void write_state(std::ostream &out, const DensityMatrix &rho);
DensityMatrix load_state_file(const std::filesystem::path &path);
void save_state_file(const std::filesystem::path &path, const DensityMatrix &rho);

}  // namespace mdinew

#endif
