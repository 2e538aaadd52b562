// Copyright 2026 The qdarwin Authors
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

#ifndef QDARWIN_ERROR_HPP
#define QDARWIN_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdarwin {

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  TraceNotOne,
  DimensionMismatch,
  NonFinite,
  InvalidLayout,
  UnknownLabel,
  DuplicateLabel,
  OverlappingParts,
  NotOrthonormal,
  OptimizerDidNotConverge,
  OverlappingSubfragments,
  NeedTwoSubenvironments,
  DegenerateSystemEntropy,
  DeltaOutOfRange,
  OverlappingSupports,
  DimensionTooSmall,
  DimensionTooLarge,
  InvalidArgument,
  MalformedFile,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidLayout: return "InvalidLayout";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::DuplicateLabel: return "DuplicateLabel";
    case ErrorCode::OverlappingParts: return "OverlappingParts";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::OptimizerDidNotConverge: return "OptimizerDidNotConverge";
    case ErrorCode::OverlappingSubfragments: return "OverlappingSubfragments";
    case ErrorCode::NeedTwoSubenvironments: return "NeedTwoSubenvironments";
    case ErrorCode::DegenerateSystemEntropy: return "DegenerateSystemEntropy";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::OverlappingSupports: return "OverlappingSupports";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so that
/// callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdarwin

#endif  // QDARWIN_ERROR_HPP
