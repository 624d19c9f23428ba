// Copyright 2026 The SeedForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEEDFORGE_ERROR_HPP_
#define SEEDFORGE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace seedforge {

enum class ErrorCode {
  kUnknownSymbol,
  kCodeOutOfRange,
  kElementOutOfRange,
  kCapacityExceeded,
  kNoSuchDirectory,
  kEmptyHarvest,
  kDigestMismatch,
  kDimensionMismatch,
  kShapeMismatch,
  kNonFiniteGradient,
  kNonFiniteLoss,
  kInvalidCount,
  kCorruptCheckpoint,
  kPoolTooSmall,
  kCoverageUnavailable,
  kTargetFailure,
  kBudgetTooSmall,
  kIoFailure,
  kMissingSummary,
  kInvalidArgument,
};

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSymbol: return "UnknownSymbol";
    case ErrorCode::kCodeOutOfRange: return "CodeOutOfRange";
    case ErrorCode::kElementOutOfRange: return "ElementOutOfRange";
    case ErrorCode::kCapacityExceeded: return "CapacityExceeded";
    case ErrorCode::kNoSuchDirectory: return "NoSuchDirectory";
    case ErrorCode::kEmptyHarvest: return "EmptyHarvest";
    case ErrorCode::kDigestMismatch: return "DigestMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonFiniteGradient: return "NonFiniteGradient";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kInvalidCount: return "InvalidCount";
    case ErrorCode::kCorruptCheckpoint: return "CorruptCheckpoint";
    case ErrorCode::kPoolTooSmall: return "PoolTooSmall";
    case ErrorCode::kCoverageUnavailable: return "CoverageUnavailable";
    case ErrorCode::kTargetFailure: return "TargetFailure";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMissingSummary: return "MissingSummary";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All domain failures surface as this exception; `code()` distinguishes them.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seedforge

#endif  // SEEDFORGE_ERROR_HPP_
