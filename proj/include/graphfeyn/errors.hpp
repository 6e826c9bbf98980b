// Copyright 2026 The graphfeyn Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace graphfeyn {

/// Process exit codes shared by every command of the CLI.
enum class ExitCode : int {
  ok = 0,
  input_error = 2,
  parse_error = 3,
  resource_cap = 4,
  acceptance_failure = 5,
};

/// Bad user input: unknown vertex, empty set, invalid instance, domain error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical self-check failed (e.g. a non-Hermitian symmetrized operator).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A caller broke a documented precondition of a pure function.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace graphfeyn
