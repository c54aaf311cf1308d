// Copyright 2026 The GQT Authors
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

#ifndef GQT_CHECK_HPP
#define GQT_CHECK_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gqt/core.hpp"

namespace gqt::check {

struct GeneratorParams {
  std::size_t n_states = 4;
  std::size_t n_props = 2;
  std::size_t n_obs = 1;
  std::size_t max_spectrum = 3;
  std::uint64_t seed = 0;

  /// Throws DomainError when a field is out of range.
  void validate() const;
};

/// Random valid model, deterministic in params. Propositions are built from
/// an eigen-partition of the states, so validity holds by construction.
Model generate_model(const GeneratorParams& params);

/// The closed list of law ids check_laws can emit.
inline constexpr std::array<std::string_view, 15> kLawIds = {
    "PP=P",
    "negPnegP=negP",
    "P\xC2\xB7negP=0",
    "consistency",
    "0P=P0=0",
    "1P=P1=P",
    "PQ=QP",
    "1ANDP=P",
    "PANDnegP=0",
    "exclusion",
    "completeness",
    "compat-implies-joint-eigenstate",
    "strongcomp-implies-comp",
    "order-independence",
    "structure",
};

bool is_law_id(std::string_view law);

/// Exhaustive check of the proposition laws, composition and conjunction
/// identities, observable laws, and the pair theorems. Each entry's
/// witness reproduces the failure through `reproduces`.
std::vector<Violation> check_laws(const Model& model);

/// Re-evaluates a single violation (from check_laws or validate_model)
/// against the model. True when the law still fails on the witness.
bool reproduces(const Model& model, const Violation& violation);

/// Restricts the model to the states reachable from the witness states.
/// Returns the model unchanged when the violation has no witness.
Model minimize(const Model& model, const Violation& violation);

struct Counterexample {
  std::uint64_t seed;
  Violation violation;
  Model model;
};

struct FuzzSummary {
  std::size_t models_checked = 0;
  std::size_t violations = 0;
  std::map<std::string, Counterexample> first_by_law;
};

/// Runs generate_model + check_laws over seeds seed, seed+1, ... The sizes
/// in `maxima` are upper bounds; each model draws its own sizes from its
/// seed.
FuzzSummary fuzz(const GeneratorParams& maxima, std::size_t n_models);

}  // namespace gqt::check

#endif  // GQT_CHECK_HPP
