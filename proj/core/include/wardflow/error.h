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

#ifndef WARDFLOW_ERROR_H_
#define WARDFLOW_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace wardflow {

// Machine-readable error codes. The HTTP layer maps these onto status codes.
enum class ErrorCode {
  kParse,
  kValidation,
  kUnknownDiagnosis,
  kDuplicateId,
  kNotFound,
  kVersionConflict,
  kOutOfRange,
  kBoundExceeded,
  kBudgetExceeded,
  kDisjointPlans,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the text readers. `line` is 1-based; 0 when not applicable.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(ErrorCode::kParse, Format(line, message)), line_(line) {}

  int line() const { return line_; }

 private:
  static std::string Format(int line, const std::string& message) {
    if (line <= 0) return message;
    return "line " + std::to_string(line) + ": " + message;
  }

  int line_;
};

class NotFoundError : public Error {
 public:
  NotFoundError(std::string kind, const std::string& id)
      : Error(ErrorCode::kNotFound, kind + " '" + id + "' not found"),
        kind_(std::move(kind)) {}

  // "ward", "scenario", "plan", "job".
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace wardflow

#endif  // WARDFLOW_ERROR_H_
