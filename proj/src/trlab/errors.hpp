// Copyright 2026 The trlab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace trlab {

// Base class of every error raised by the library. The C API maps each
// subclass to its own status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something malformed (bad group spec, mismatched groups, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Inputs are well formed but violate a mathematical precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configured budget (ball vertices, oracle atoms) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An iterative solver stopped before reaching its tolerance.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

}  // namespace trlab
