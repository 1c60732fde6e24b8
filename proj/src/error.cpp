// Copyright 2026 The gsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsep/error.hpp"

namespace gsep {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::PairingFailure: return "PairingFailure";
    case ErrorCode::SingularBlock: return "SingularBlock";
    case ErrorCode::NotSymplectic: return "NotSymplectic";
    case ErrorCode::InvalidSplit: return "InvalidSplit";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::InvalidSampleCount: return "InvalidSampleCount";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BadPlane: return "BadPlane";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace gsep
