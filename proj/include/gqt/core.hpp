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

#ifndef GQT_CORE_HPP
#define GQT_CORE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gqt {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unknown names, non-total maps, space mismatches.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IncompatibleOperands : public Error {
 public:
  using Error::Error;
};

inline constexpr std::string_view kOneName = "ONE";
inline constexpr std::string_view kZeroName = "ZERO";
/// Prefix carried by the name of a negated proposition.
inline constexpr std::string_view kNegationPrefix = "\xC2\xAC";  // U+00AC

/// Ordered, non-empty set of proper state names.
class StateSpace {
 public:
  explicit StateSpace(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::span<const std::string> names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const StateSpace& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

bool same_space(const SpacePtr& a, const SpacePtr& b);

/// A proper state (by index into its space) or the improper zero state.
class StateRef {
 public:
  static constexpr StateRef zero() { return StateRef(-1); }
  static constexpr StateRef proper(std::size_t index) {
    return StateRef(static_cast<std::int64_t>(index));
  }

  constexpr bool is_zero() const { return index_ < 0; }
  constexpr bool is_proper() const { return index_ >= 0; }
  /// Precondition: is_proper().
  constexpr std::size_t index() const { return static_cast<std::size_t>(index_); }

  constexpr auto operator<=>(const StateRef&) const = default;

 private:
  constexpr explicit StateRef(std::int64_t index) : index_(index) {}
  std::int64_t index_;
};

/// Total map on StateRef over one space. Zero is always sent to Zero.
class PropMap {
 public:
  /// images[i] is the image of proper state i. Throws StructuralError when
  /// the image list is not total or points outside the space.
  PropMap(SpacePtr space, std::vector<StateRef> images);

  static PropMap identity(SpacePtr space);
  static PropMap constant_zero(SpacePtr space);

  StateRef operator()(StateRef z) const {
    return z.is_zero() ? z : images_[z.index()];
  }

  const SpacePtr& space() const { return space_; }
  std::span<const StateRef> images() const { return images_; }

  bool is_constant_zero() const;
  bool is_idempotent() const;

  bool operator==(const PropMap& other) const;

 private:
  SpacePtr space_;
  std::vector<StateRef> images_;
};

/// Pointwise f∘g, i.e. g applied first.
PropMap compose(const PropMap& f, const PropMap& g);

enum class Outcome { Yes, No };

std::string_view to_string(Outcome outcome);

/// A yes/no question, stored as the pair of state maps for both answers.
class Proposition {
 public:
  Proposition(std::string name, PropMap yes, PropMap no);

  const std::string& name() const { return name_; }
  const PropMap& yes() const { return yes_; }
  const PropMap& no() const { return no_; }
  const PropMap& map(Outcome outcome) const { return outcome == Outcome::Yes ? yes_ : no_; }
  const SpacePtr& space() const { return yes_.space(); }

  bool operator==(const Proposition& other) const = default;

 private:
  std::string name_;
  PropMap yes_;
  PropMap no_;
};

Proposition one_proposition(SpacePtr space);
Proposition zero_proposition(SpacePtr space);

/// Swaps the two maps. "P" becomes "¬P"; "¬P" becomes "P"; ONE and ZERO
/// trade names.
Proposition negate(const Proposition& p);

/// One failed law or structural check. `subjects` names what was checked
/// (propositions, observables, values), `witnesses` the state names that
/// exhibit the failure.
struct Violation {
  std::string law;
  std::vector<std::string> subjects;
  std::vector<std::string> witnesses;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

using Report = std::vector<Violation>;

/// Checks idempotence of both maps, mutual annihilation, and that no proper
/// state is sent to zero by both maps.
Report validate_proposition(const Proposition& p, const StateSpace& space);

StateRef apply(const Proposition& p, Outcome outcome, StateRef z);

enum class ModalStatus { Impossible, Possible, Certain };

std::string_view to_string(ModalStatus status);

/// Throws DomainError for the zero state.
ModalStatus modal_status(const Proposition& p, StateRef z);

struct PropositionEigenstate {
  StateRef state;
  Outcome outcome;

  bool operator==(const PropositionEigenstate&) const = default;
};

/// Fixed points of either map, ordered by state name then outcome.
std::vector<PropositionEigenstate> eigenstates_of_proposition(const Proposition& p);

/// A state on which `left∘right` and `right∘left` disagree. Names carry the
/// negation prefix when the no-map was involved.
struct CommutationWitness {
  std::string left;
  std::string right;
  StateRef state;

  bool operator==(const CommutationWitness&) const = default;
};

struct Compatibility {
  bool compatible = true;
  std::optional<CommutationWitness> witness;

  explicit operator bool() const { return compatible; }
};

/// True iff P, ¬P, Q, ¬Q commute pairwise across the two propositions.
Compatibility is_compatible_propositions(const Proposition& p, const Proposition& q);

/// Result of AND/OR: only one of the two maps is determined.
struct DerivedProposition {
  Outcome known_side;
  PropMap known_map;
  std::string provenance;
};

/// Yes-map PQ. Throws IncompatibleOperands unless P and Q are compatible.
DerivedProposition conjunction(const Proposition& p, const Proposition& q);

/// No-map (¬P)(¬Q). Throws IncompatibleOperands unless P and Q are compatible.
DerivedProposition adjunction(const Proposition& p, const Proposition& q);

/// Spectrum plus one proposition per value.
class Observable {
 public:
  /// Throws StructuralError for an empty or duplicated spectrum. The family
  /// may be incomplete; validate_observable reports that.
  Observable(std::string name, std::vector<std::string> spectrum,
             std::map<std::string, Proposition> family);

  const std::string& name() const { return name_; }
  std::span<const std::string> spectrum() const { return spectrum_; }
  const std::map<std::string, Proposition>& family() const { return family_; }

  /// Throws StructuralError when the value has no family member.
  const Proposition& member(std::string_view value) const;
  bool has_value(std::string_view value) const;

 private:
  std::string name_;
  std::vector<std::string> spectrum_;
  std::map<std::string, Proposition> family_;
};

/// Observable {yes ↦ P, no ↦ ¬P}.
Observable observable_from_proposition(std::string name, const Proposition& p);

/// Mutual exclusion and completeness. Throws StructuralError if the family
/// does not match the spectrum or lives on a different space.
Report validate_observable(const Observable& a, const StateSpace& space);

struct ObservableEigenstate {
  StateRef state;
  std::string value;

  bool operator==(const ObservableEigenstate&) const = default;
};

std::vector<ObservableEigenstate> eigenstates_of_observable(const Observable& a);

struct CommonEigenstate {
  StateRef state;
  std::string a;
  std::string b;

  bool operator==(const CommonEigenstate&) const = default;
};

std::vector<CommonEigenstate> common_eigenstates(const Observable& a, const Observable& b);

enum class PairClass { Compatible, Complementary, StronglyComplementary };

std::string_view to_string(PairClass cls);

struct PairClassification {
  PairClass cls = PairClass::Compatible;
  std::optional<CommutationWitness> witness;
  std::vector<CommonEigenstate> common;
};

PairClassification classify_pair(const Observable& a, const Observable& b);

struct Partition {
  std::vector<std::string> subsystems;
  std::map<std::string, std::string> local_tags;
  std::vector<std::string> global_tags;
};

/// A finite GQT model. Immutable after construction.
class Model {
 public:
  /// Throws StructuralError on duplicate or reserved names, or when any
  /// proposition or observable lives on another space.
  Model(SpacePtr space, std::vector<Proposition> propositions,
        std::vector<Observable> observables, std::optional<Partition> partition = {});

  const SpacePtr& space() const { return space_; }
  const StateSpace& states() const { return *space_; }
  const std::map<std::string, Proposition, std::less<>>& propositions() const {
    return propositions_;
  }
  const std::map<std::string, Observable, std::less<>>& observables() const {
    return observables_;
  }
  const std::optional<Partition>& partition() const { return partition_; }

  const Proposition& one() const { return one_; }
  const Proposition& zero() const { return zero_; }

  /// Resolves ONE, ZERO, declared names, and "¬"-prefixed forms of those.
  std::optional<Proposition> find_proposition(std::string_view name) const;
  const Observable& observable(std::string_view name) const;
  StateRef state(std::string_view name) const;
  /// State name, or "null" for the zero state.
  std::string state_name(StateRef z) const;

 private:
  SpacePtr space_;
  std::map<std::string, Proposition, std::less<>> propositions_;
  std::map<std::string, Observable, std::less<>> observables_;
  std::optional<Partition> partition_;
  Proposition one_;
  Proposition zero_;
};

/// Returns the unique proposition among ONE, ZERO and the model's own whose
/// map on the known side equals d's. Throws AmbiguousRealization when
/// several match.
std::optional<Proposition> realize(const Model& model, const DerivedProposition& d);

class AmbiguousRealization : public Error {
 public:
  explicit AmbiguousRealization(std::vector<std::string> candidates);
  const std::vector<std::string>& candidates() const { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

struct MeasurementStep {
  std::string observable;
  std::string value;
};

/// Left fold of the selected family yes-maps over z.
StateRef measure_sequence(const Model& model, StateRef z, std::span<const MeasurementStep> steps);

/// Locals on different subsystems must be compatible; the global must be
/// complementary to each local. Throws StructuralError on missing partition
/// or inconsistent tags.
Report check_entanglement_preconditions(const Model& model, std::string_view global_name,
                                        std::span<const std::string> local_names);

class EntanglementPrecondition : public Error {
 public:
  explicit EntanglementPrecondition(Report report);
  const Report& report() const { return report_; }

 private:
  Report report_;
};

/// Eigenstates of the global observable that are eigenstates of none of
/// the listed locals, ordered by name.
std::vector<StateRef> entangled_states(const Model& model, std::string_view global_name,
                                       std::span<const std::string> local_names);

/// Every law and referential check over the model. Never throws.
Report validate_model(const Model& model);

}  // namespace gqt

#endif  // GQT_CORE_HPP
