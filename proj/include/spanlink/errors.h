// Copyright 2026 The Spanlink Authors.
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

#ifndef SPANLINK_ERRORS_H_
#define SPANLINK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace spanlink {

// Process exit codes used by the command-line tool. Every error class below
// maps onto exactly one of them.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kData = 2,
  kNumeric = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Bad configuration or arguments.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &what)
      : Error(ExitCode::kValidation, what) {}
};

// Malformed input files.
class DataError : public Error {
 public:
  explicit DataError(const std::string &what)
      : Error(ExitCode::kData, what) {}
};

class ParseError : public DataError {
 public:
  ParseError(int line, const std::string &what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Gold mention offsets that do not agree with the text they point into.
class AlignmentError : public DataError {
 public:
  explicit AlignmentError(const std::string &what) : DataError(what) {}
};

// Non-finite values during training or scoring.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string &what)
      : Error(ExitCode::kNumeric, what) {}
};

}  // namespace spanlink

#endif  // SPANLINK_ERRORS_H_
