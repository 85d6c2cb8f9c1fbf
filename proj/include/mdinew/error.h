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

#ifndef MDINEW_ERROR_H
#define MDINEW_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdinew {

enum class ErrorCode {
    kDimensionMismatch,
    kInvalidArgument,
    kNotHermitian,
    kInvalidState,
    kNotNpt,
    kIllConditioned,
    kResidualTooLarge,
    kDegenerateDenominator,
    kImaginaryValue,
    kInfeasibleRemoval,
    kNeverCertified,
    kInvalidChannel,
    kParse,
    kIo,
};

std::string_view error_code_name(ErrorCode code);

/// Exception thrown by every fallible operation in the library. The code lets
/// callers (notably the scenario runner) distinguish recoverable per-trial
/// failures from configuration problems without string matching.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace mdinew

#endif
