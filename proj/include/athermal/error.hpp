// Copyright 2026 The athermal-markov Authors
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

namespace athermal {

enum class Errc {
  bad_factorization,
  not_hermitian,
  invalid_state,
  not_unitary,
  not_energy_preserving,
  ambiguous_zero_temperature,
  degenerate_spectrum,
  perturbation_too_strong,
  undefined_quantity,
  singular_matrix,
  unsupported_dimension,
  inconsistent_relation,
  invalid_argument,
  config,
  io,
};

const char* to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C boundary can map it onto a status value without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace athermal
