// src/errors.cpp

// Copyright 2026  The spdot Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spdot/errors.hpp"

namespace spdot {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "InvalidInput";
    case ErrorKind::kNotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorKind::kNumericalFailure:
      return "NumericalFailure";
    case ErrorKind::kConvergenceFailure:
      return "ConvergenceFailure";
    case ErrorKind::kUnsupportedInstance:
      return "UnsupportedInstance";
    case ErrorKind::kDegeneratePlan:
      return "DegeneratePlan";
  }
  return "Unknown";
}

}  // namespace spdot
