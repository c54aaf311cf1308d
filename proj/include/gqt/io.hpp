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

// JSON model documents and quantum input documents.
//
// Model document:
//   { "states": [...],
//     "propositions": { name: { "yes": {state: state|null, ...}, "no": {...} } },
//     "observables": { name: { "spectrum": [...], "family": {label: proposition} } },
//     "partition": { "subsystems": [...], "local": {obs: subsystem}, "global": [...] } }
// Every map lists every state exactly once; null is the zero state. ONE,
// ZERO and "¬"-prefixed names are resolved, never declared.

#ifndef GQT_IO_HPP
#define GQT_IO_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "gqt/core.hpp"
#include "gqt/quantum.hpp"

namespace gqt::io {

class ParseError : public Error {
 public:
  ParseError(std::string field, const std::string& message, std::optional<std::size_t> line = {});

  const std::string& field() const { return field_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  std::string field_;
  std::optional<std::size_t> line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Structural parse only; laws are not checked here.
Model parse_model(std::string_view text);

/// Canonical form: states in declaration order, proposition and observable
/// names sorted, map keys in state order, two-space indent, trailing newline.
std::string serialize_model(const Model& model);

struct QuantumOverrides {
  std::optional<std::size_t> cap;
  std::optional<double> tol;
};

/// Fields: dimension, seeds {name: vector|matrix}, optional labels
/// {name: vector|matrix} naming states the orbit may reach, propositions
/// {name: vector|matrix}, observables {name: {spectrum, family}}, optional
/// partition, cap, tolerance. Complex entries are [re, im]. A vector v
/// stands for vv† as a state and for the projector onto span{v} as a
/// proposition.
quantum::QuantumSystem<double> parse_quantum_document(std::string_view text,
                                                      const QuantumOverrides& overrides = {});

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

}  // namespace gqt::io

#endif  // GQT_IO_HPP
