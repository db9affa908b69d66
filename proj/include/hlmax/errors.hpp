// Copyright 2026 The hlmax Authors
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
#ifndef HLMAX_ERRORS_HPP
#define HLMAX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hlmax {

/// Malformed or out-of-domain input (bad spec, invalid weight, bad exponent).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Valid input that violates an operation's precondition (e.g. a CZ level
/// below the base-ball average).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A single failed assertion reported by one of the checkers.
struct Violation {
  std::string check;
  std::string detail;
};

}  // namespace hlmax

#endif  // HLMAX_ERRORS_HPP
