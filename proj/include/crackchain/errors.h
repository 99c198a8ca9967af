// Copyright 2026 The crackchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRACKCHAIN_ERRORS_H_
#define CRACKCHAIN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace crackchain {

// Raised for malformed arguments: non-positive lengths, empty tables, bad
// config keys and similar caller mistakes.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when the requested parameters leave the regime in which a quantity
// is defined, for example zero pressure for the crack activity or a mean
// spacing below the lattice constant for the dilute-crack formulas.
class RegimeError : public std::domain_error {
 public:
  explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

// Raised when a numerical procedure cannot certify its own output, for
// example a missing sign change of W' or a non-converged eigenpair.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace crackchain

#endif  // CRACKCHAIN_ERRORS_H_
