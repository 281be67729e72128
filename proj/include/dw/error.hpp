// Copyright 2026 The dwtk Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace dw {

enum class ErrorCode {
  kInvalidArgument,
  kAgreementViolated,
  kReconstructionMismatch,
  kInfeasible,
  kDimensionMismatch,
  kPovmIncomplete,
  kAgreementPrecondition,
  kNoConvergence,
  kMaxIters,
  kStage1Failed,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kAgreementViolated: return "AGREEMENT_VIOLATED";
    case ErrorCode::kReconstructionMismatch: return "RECONSTRUCTION_MISMATCH";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kPovmIncomplete: return "POVM_INCOMPLETE";
    case ErrorCode::kAgreementPrecondition: return "AGREEMENT_PRECONDITION";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kMaxIters: return "MAX_ITERS";
    case ErrorCode::kStage1Failed: return "STAGE1_FAILED";
  }
  return "UNKNOWN";
}

/// Exception carrying a stable machine-readable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dw
