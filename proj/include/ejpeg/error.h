// Copyright 2026 The ejpeg Authors. All Rights Reserved.
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

#ifndef EJPEG_ERROR_H_
#define EJPEG_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ejpeg {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kUnsupportedFormat,
  kParseError,
  kNotFound,
  kConflict,
  kNumerical,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code is what
// front-ends map onto exit statuses and HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A malformed bitstream. offset is the byte position where decoding stopped.
class ParseError : public Error {
 public:
  ParseError(size_t offset, const std::string& message)
      : Error(ErrorCode::kParseError,
              message + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace ejpeg

#endif  // EJPEG_ERROR_H_
