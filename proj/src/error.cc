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

#include "mdinew/error.h"

namespace mdinew {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kDimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::kInvalidArgument:
            return "InvalidArgument";
        case ErrorCode::kNotHermitian:
            return "NotHermitian";
        case ErrorCode::kInvalidState:
            return "InvalidState";
        case ErrorCode::kNotNpt:
            return "NotNPT";
        case ErrorCode::kIllConditioned:
            return "IllConditioned";
        case ErrorCode::kResidualTooLarge:
            return "ResidualTooLarge";
        case ErrorCode::kDegenerateDenominator:
            return "DegenerateDenominator";
        case ErrorCode::kImaginaryValue:
            return "ImaginaryValue";
        case ErrorCode::kInfeasibleRemoval:
            return "InfeasibleRemoval";
        case ErrorCode::kNeverCertified:
            return "NeverCertified";
        case ErrorCode::kInvalidChannel:
            return "InvalidChannel";
        case ErrorCode::kParse:
            return "ParseError";
        case ErrorCode::kIo:
            return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

}  // namespace mdinew
