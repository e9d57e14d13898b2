// Copyright 2026 The Authors.
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

namespace submod_pricing {

// Malformed or out-of-domain input (unknown item, bad probability, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exact/enumerative routine was asked to run beyond its size limits.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration the solvers deliberately do not handle.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A violated internal invariant, with diagnostics.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace submod_pricing
