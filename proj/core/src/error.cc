// Copyright 2026 The Wardflow Authors
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

#include "wardflow/error.h"

namespace wardflow {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
      return "parse_error";
    case ErrorCode::kValidation:
      return "validation_error";
    case ErrorCode::kUnknownDiagnosis:
      return "unknown_diagnosis";
    case ErrorCode::kDuplicateId:
      return "duplicate_id";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kVersionConflict:
      return "version_conflict";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kBoundExceeded:
      return "bound_exceeded";
    case ErrorCode::kBudgetExceeded:
      return "budget_exceeded";
    case ErrorCode::kDisjointPlans:
      return "disjoint_plans";
  }
  return "unknown";
}

}  // namespace wardflow
