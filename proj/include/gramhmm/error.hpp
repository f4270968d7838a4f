// Copyright 2026 The gramhmm Authors
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

#ifndef GRAMHMM_ERROR_HPP_
#define GRAMHMM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gramhmm {

// Failure categories; the C API maps each one to a status code.
enum class ErrorKind {
  kInvalidArgument,  // caller-side precondition (range, missing flag)
  kParse,            // malformed input text
  kValidation,       // well-formed input violating a model invariant
  kNumerical,        // consistency or numerical failure during a computation
  kGuard,            // brute-force enumeration limit exceeded
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace gramhmm

#endif  // GRAMHMM_ERROR_HPP_
