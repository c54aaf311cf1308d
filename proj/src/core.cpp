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

#include "gqt/core.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace gqt {

namespace {

std::string negated_name(std::string_view name) {
  if (name == kOneName) return std::string(kZeroName);
  if (name == kZeroName) return std::string(kOneName);
  if (name.starts_with(kNegationPrefix)) return std::string(name.substr(kNegationPrefix.size()));
  return std::string(kNegationPrefix) + std::string(name);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b, std::string_view what) {
  if (!same_space(a, b)) {
    throw StructuralError(std::string(what) + ": operands live on different state spaces");
  }
}

void require_in_space(const StateSpace& space, StateRef z) {
  if (z.is_proper() && z.index() >= space.size()) {
    throw StructuralError("state index " + std::to_string(z.index()) + " outside the state space");
  }
}

// First proper state on which f and g differ.
std::optional<StateRef> first_difference(const PropMap& f, const PropMap& g) {
  auto fi = f.images();
  auto gi = g.images();
  for (std::size_t i = 0; i < fi.size(); ++i) {
    if (fi[i] != gi[i]) return StateRef::proper(i);
  }
  return std::nullopt;
}

std::optional<StateRef> first_nonzero(const PropMap& f) {
  auto fi = f.images();
  for (std::size_t i = 0; i < fi.size(); ++i) {
    if (fi[i].is_proper()) return StateRef::proper(i);
  }
  return std::nullopt;
}

template <typename T, typename Key>
void sort_by_state_name(std::vector<T>& items, const StateSpace& space, Key secondary) {
  std::stable_sort(items.begin(), items.end(), [&](const T& x, const T& y) {
    const auto& nx = space.name(x.state.index());
    const auto& ny = space.name(y.state.index());
    if (nx != ny) return nx < ny;
    return secondary(x) < secondary(y);
  });
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw StructuralError("state space must contain at least one state");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw StructuralError("state names must be non-empty");
    if (!index_.emplace(names_[i], i).second) {
      throw StructuralError("duplicate state name '" + names_[i] + "'");
    }
  }
}

std::optional<std::size_t> StateSpace::find(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  return a == b || (a && b && *a == *b);
}

PropMap::PropMap(SpacePtr space, std::vector<StateRef> images)
    : space_(std::move(space)), images_(std::move(images)) {
  if (!space_) throw StructuralError("map without a state space");
  if (images_.size() != space_->size()) {
    throw StructuralError("map is not total: " + std::to_string(images_.size()) + " images for " +
                          std::to_string(space_->size()) + " states");
  }
  for (auto z : images_) require_in_space(*space_, z);
}

PropMap PropMap::identity(SpacePtr space) {
  std::vector<StateRef> images;
  images.reserve(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) images.push_back(StateRef::proper(i));
  return PropMap(std::move(space), std::move(images));
}

PropMap PropMap::constant_zero(SpacePtr space) {
  std::vector<StateRef> images(space->size(), StateRef::zero());
  return PropMap(std::move(space), std::move(images));
}

bool PropMap::is_constant_zero() const {
  return std::all_of(images_.begin(), images_.end(), [](StateRef z) { return z.is_zero(); });
}

bool PropMap::is_idempotent() const {
  return std::all_of(images_.begin(), images_.end(),
                     [this](StateRef z) { return (*this)(z) == z; });
}

bool PropMap::operator==(const PropMap& other) const {
  return same_space(space_, other.space_) && images_ == other.images_;
}

PropMap compose(const PropMap& f, const PropMap& g) {
  require_same_space(f.space(), g.space(), "compose");
  std::vector<StateRef> images;
  images.reserve(g.images().size());
  for (auto z : g.images()) images.push_back(f(z));
  return PropMap(f.space(), std::move(images));
}

std::string_view to_string(Outcome outcome) { return outcome == Outcome::Yes ? "yes" : "no"; }

Proposition::Proposition(std::string name, PropMap yes, PropMap no)
    : name_(std::move(name)), yes_(std::move(yes)), no_(std::move(no)) {
  require_same_space(yes_.space(), no_.space(), "proposition '" + name_ + "'");
}

Proposition one_proposition(SpacePtr space) {
  return Proposition(std::string(kOneName), PropMap::identity(space), PropMap::constant_zero(space));
}

Proposition zero_proposition(SpacePtr space) { return negate(one_proposition(std::move(space))); }

Proposition negate(const Proposition& p) { return Proposition(negated_name(p.name()), p.no(), p.yes()); }

Report validate_proposition(const Proposition& p, const StateSpace& space) {
  if (*p.space() != space) {
    throw StructuralError("proposition '" + p.name() + "' is not defined over the given state space");
  }
  Report report;
  auto add = [&](std::string law, std::size_t i, std::string detail) {
    report.push_back({std::move(law), {p.name()}, {space.name(i)}, std::move(detail)});
  };
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto z = StateRef::proper(i);
    const auto y = p.yes()(z);
    const auto n = p.no()(z);
    if (p.yes()(y) != y) add("idempotence-yes", i, "yes(yes(z)) != yes(z)");
    if (p.no()(n) != n) add("idempotence-no", i, "no(no(z)) != no(z)");
    if (p.no()(y).is_proper() || p.yes()(n).is_proper()) {
      add("annihilation", i, p.no()(y).is_proper() ? "no(yes(z)) != zero" : "yes(no(z)) != zero");
    }
    if (y.is_zero() && n.is_zero()) add("consistency", i, "both outcomes impossible");
  }
  return report;
}

StateRef apply(const Proposition& p, Outcome outcome, StateRef z) {
  require_in_space(*p.space(), z);
  return p.map(outcome)(z);
}

std::string_view to_string(ModalStatus status) {
  switch (status) {
    case ModalStatus::Impossible: return "impossible";
    case ModalStatus::Possible: return "possible";
    case ModalStatus::Certain: return "certain";
  }
  return "?";
}

ModalStatus modal_status(const Proposition& p, StateRef z) {
  if (z.is_zero()) throw DomainError("modal status is defined for proper states only");
  require_in_space(*p.space(), z);
  if (p.yes()(z).is_zero()) return ModalStatus::Impossible;
  if (p.no()(z).is_zero()) return ModalStatus::Certain;
  return ModalStatus::Possible;
}

std::vector<PropositionEigenstate> eigenstates_of_proposition(const Proposition& p) {
  std::vector<PropositionEigenstate> out;
  const auto& space = *p.space();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto z = StateRef::proper(i);
    if (p.yes()(z) == z) out.push_back({z, Outcome::Yes});
    if (p.no()(z) == z) out.push_back({z, Outcome::No});
  }
  sort_by_state_name(out, space, [](const PropositionEigenstate& e) { return e.outcome; });
  return out;
}

Compatibility is_compatible_propositions(const Proposition& p, const Proposition& q) {
  require_same_space(p.space(), q.space(), "compatibility check");
  const Proposition np = negate(p);
  const Proposition nq = negate(q);
  const Proposition* lefts[] = {&p, &np};
  const Proposition* rights[] = {&q, &nq};
  for (const auto* l : lefts) {
    for (const auto* r : rights) {
      if (auto at = first_difference(compose(l->yes(), r->yes()), compose(r->yes(), l->yes()))) {
        return {false, CommutationWitness{l->name(), r->name(), *at}};
      }
    }
  }
  return {};
}

DerivedProposition conjunction(const Proposition& p, const Proposition& q) {
  if (!is_compatible_propositions(p, q)) {
    throw IncompatibleOperands("conjunction of incompatible propositions '" + p.name() + "' and '" +
                               q.name() + "'");
  }
  return {Outcome::Yes, compose(p.yes(), q.yes()), p.name() + " AND " + q.name()};
}

DerivedProposition adjunction(const Proposition& p, const Proposition& q) {
  if (!is_compatible_propositions(p, q)) {
    throw IncompatibleOperands("adjunction of incompatible propositions '" + p.name() + "' and '" +
                               q.name() + "'");
  }
  return {Outcome::No, compose(p.no(), q.no()), p.name() + " OR " + q.name()};
}

Observable::Observable(std::string name, std::vector<std::string> spectrum,
                       std::map<std::string, Proposition> family)
    : name_(std::move(name)), spectrum_(std::move(spectrum)), family_(std::move(family)) {
  if (name_.empty()) throw StructuralError("observable names must be non-empty");
  if (spectrum_.empty()) throw StructuralError("observable '" + name_ + "' has an empty spectrum");
  std::set<std::string_view> seen;
  for (const auto& v : spectrum_) {
    if (!seen.insert(v).second) {
      throw StructuralError("observable '" + name_ + "' repeats spectrum value '" + v + "'");
    }
  }
}

const Proposition& Observable::member(std::string_view value) const {
  auto it = family_.find(std::string(value));
  if (it == family_.end() || !has_value(value)) {
    throw StructuralError("observable '" + name_ + "' has no family member for value '" +
                          std::string(value) + "'");
  }
  return it->second;
}

bool Observable::has_value(std::string_view value) const {
  return std::find(spectrum_.begin(), spectrum_.end(), value) != spectrum_.end();
}

Observable observable_from_proposition(std::string name, const Proposition& p) {
  std::map<std::string, Proposition> family;
  family.emplace("yes", p);
  family.emplace("no", negate(p));
  return Observable(std::move(name), {"yes", "no"}, std::move(family));
}

Report validate_observable(const Observable& a, const StateSpace& space) {
  for (const auto& v : a.spectrum()) {
    const auto& member = a.member(v);
    if (*member.space() != space) {
      throw StructuralError("observable '" + a.name() + "' value '" + v +
                            "' is not defined over the given state space");
    }
  }
  for (const auto& [v, _] : a.family()) {
    if (!a.has_value(v)) {
      throw StructuralError("observable '" + a.name() + "' has a family member for '" + v +
                            "' outside its spectrum");
    }
  }
  Report report;
  const auto values = a.spectrum();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (i == j) continue;
      const auto both = compose(a.member(values[i]).yes(), a.member(values[j]).yes());
      if (auto at = first_nonzero(both)) {
        report.push_back({"mutual-exclusion",
                          {a.name(), values[i], values[j]},
                          {space.name(at->index())},
                          "A_" + values[i] + " A_" + values[j] + " != 0"});
      }
    }
  }
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto z = StateRef::proper(s);
    const bool some = std::any_of(values.begin(), values.end(), [&](const std::string& v) {
      return a.member(v).yes()(z).is_proper();
    });
    if (!some) {
      report.push_back({"completeness", {a.name()}, {space.name(s)}, "every value impossible"});
    }
  }
  return report;
}

std::vector<ObservableEigenstate> eigenstates_of_observable(const Observable& a) {
  std::vector<ObservableEigenstate> out;
  std::map<std::string, std::size_t, std::less<>> rank;
  const SpacePtr* space = nullptr;
  for (std::size_t k = 0; k < a.spectrum().size(); ++k) {
    const auto& v = a.spectrum()[k];
    rank.emplace(v, k);
    const auto& member = a.member(v);
    space = &member.space();
    for (std::size_t i = 0; i < member.space()->size(); ++i) {
      const auto z = StateRef::proper(i);
      if (member.yes()(z) == z) out.push_back({z, v});
    }
  }
  if (space) {
    sort_by_state_name(out, **space, [&](const ObservableEigenstate& e) { return rank.at(e.value); });
  }
  return out;
}

std::vector<CommonEigenstate> common_eigenstates(const Observable& a, const Observable& b) {
  std::vector<CommonEigenstate> out;
  const auto ea = eigenstates_of_observable(a);
  const auto eb = eigenstates_of_observable(b);
  if (!ea.empty() && !eb.empty()) {
    require_same_space(a.member(ea.front().value).space(), b.member(eb.front().value).space(),
                       "common eigenstates");
  }
  // Both lists are sorted by state name, then spectrum order.
  for (const auto& x : ea) {
    for (const auto& y : eb) {
      if (x.state == y.state) out.push_back({x.state, x.value, y.value});
    }
  }
  return out;
}

std::string_view to_string(PairClass cls) {
  switch (cls) {
    case PairClass::Compatible: return "Compatible";
    case PairClass::Complementary: return "Complementary";
    case PairClass::StronglyComplementary: return "StronglyComplementary";
  }
  return "?";
}

PairClassification classify_pair(const Observable& a, const Observable& b) {
  PairClassification out;
  for (const auto& va : a.spectrum()) {
    for (const auto& vb : b.spectrum()) {
      auto c = is_compatible_propositions(a.member(va), b.member(vb));
      if (!c.compatible) {
        out.cls = PairClass::Complementary;
        out.witness = c.witness;
        break;
      }
    }
    if (out.witness) break;
  }
  out.common = common_eigenstates(a, b);
  if (out.cls == PairClass::Complementary && out.common.empty()) {
    out.cls = PairClass::StronglyComplementary;
  }
  return out;
}

Model::Model(SpacePtr space, std::vector<Proposition> propositions,
             std::vector<Observable> observables, std::optional<Partition> partition)
    : space_(std::move(space)),
      partition_(std::move(partition)),
      one_(one_proposition(space_)),
      zero_(zero_proposition(space_)) {
  for (auto& p : propositions) {
    const auto& name = p.name();
    if (name.empty()) throw StructuralError("proposition names must be non-empty");
    if (name == kOneName || name == kZeroName) {
      throw StructuralError("reserved proposition name '" + name + "' cannot be redefined");
    }
    if (name.starts_with(kNegationPrefix)) {
      throw StructuralError("proposition name '" + name + "' uses the reserved negation prefix");
    }
    require_same_space(space_, p.space(), "proposition '" + name + "'");
    std::string key = name;
    if (!propositions_.emplace(std::move(key), std::move(p)).second) {
      throw StructuralError("duplicate proposition name '" + name + "'");
    }
  }
  for (auto& a : observables) {
    for (const auto& [value, member] : a.family()) {
      require_same_space(space_, member.space(), "observable '" + a.name() + "'");
      auto resolved = find_proposition(member.name());
      if (!resolved || !(*resolved == member)) {
        throw StructuralError("observable '" + a.name() + "' value '" + value +
                              "' refers to proposition '" + member.name() +
                              "' which the model does not define");
      }
    }
    std::string key = a.name();
    if (!observables_.emplace(key, std::move(a)).second) {
      throw StructuralError("duplicate observable name '" + key + "'");
    }
  }
}

std::optional<Proposition> Model::find_proposition(std::string_view name) const {
  if (name == kOneName) return one_;
  if (name == kZeroName) return zero_;
  if (name.starts_with(kNegationPrefix)) {
    auto inner = find_proposition(name.substr(kNegationPrefix.size()));
    if (!inner) return std::nullopt;
    return negate(*inner);
  }
  auto it = propositions_.find(name);
  if (it == propositions_.end()) return std::nullopt;
  return it->second;
}

const Observable& Model::observable(std::string_view name) const {
  auto it = observables_.find(name);
  if (it == observables_.end()) throw StructuralError("unknown observable '" + std::string(name) + "'");
  return it->second;
}

StateRef Model::state(std::string_view name) const {
  auto i = space_->find(name);
  if (!i) throw StructuralError("unknown state '" + std::string(name) + "'");
  return StateRef::proper(*i);
}

std::string Model::state_name(StateRef z) const {
  if (z.is_zero()) return "null";
  return space_->name(z.index());
}

AmbiguousRealization::AmbiguousRealization(std::vector<std::string> candidates)
    : Error([&] {
        std::string msg = "derived proposition matches several propositions:";
        for (const auto& c : candidates) msg += " " + c;
        return msg;
      }()),
      candidates_(std::move(candidates)) {}

std::optional<Proposition> realize(const Model& model, const DerivedProposition& d) {
  require_same_space(model.space(), d.known_map.space(), "realize");
  std::vector<const Proposition*> hits;
  auto consider = [&](const Proposition& p) {
    if (p.map(d.known_side) == d.known_map) hits.push_back(&p);
  };
  consider(model.one());
  consider(model.zero());
  for (const auto& [_, p] : model.propositions()) consider(p);
  if (hits.empty()) return std::nullopt;
  if (hits.size() > 1) {
    std::vector<std::string> names;
    for (const auto* p : hits) names.push_back(p->name());
    throw AmbiguousRealization(std::move(names));
  }
  return *hits.front();
}

StateRef measure_sequence(const Model& model, StateRef z, std::span<const MeasurementStep> steps) {
  require_in_space(model.states(), z);
  for (const auto& step : steps) {
    z = model.observable(step.observable).member(step.value).yes()(z);
  }
  return z;
}

EntanglementPrecondition::EntanglementPrecondition(Report report)
    : Error("entanglement preconditions violated (" + std::to_string(report.size()) + " issue(s))"),
      report_(std::move(report)) {}

Report check_entanglement_preconditions(const Model& model, std::string_view global_name,
                                        std::span<const std::string> local_names) {
  if (!model.partition()) throw StructuralError("model has no partition");
  const auto& part = *model.partition();
  const auto& global = model.observable(global_name);
  if (std::find(part.global_tags.begin(), part.global_tags.end(), global_name) == part.global_tags.end()) {
    throw StructuralError("observable '" + std::string(global_name) + "' is not tagged global");
  }
  std::vector<std::pair<const Observable*, std::string>> locals;
  for (const auto& name : local_names) {
    const auto& obs = model.observable(name);
    auto tag = part.local_tags.find(name);
    if (tag == part.local_tags.end()) {
      throw StructuralError("observable '" + name + "' is not tagged local to a subsystem");
    }
    locals.emplace_back(&obs, tag->second);
  }

  Report report;
  auto witness_of = [&](const PairClassification& c) {
    std::vector<std::string> w;
    if (c.witness) w.push_back(model.state_name(c.witness->state));
    return w;
  };
  for (std::size_t i = 0; i < locals.size(); ++i) {
    for (std::size_t j = i + 1; j < locals.size(); ++j) {
      if (locals[i].second == locals[j].second) continue;
      auto c = classify_pair(*locals[i].first, *locals[j].first);
      if (c.cls != PairClass::Compatible) {
        report.push_back({"locals-compatible",
                          {locals[i].first->name(), locals[j].first->name()},
                          witness_of(c),
                          "local observables on subsystems " + locals[i].second + " and " +
                              locals[j].second + " are " + std::string(to_string(c.cls))});
      }
    }
  }
  for (const auto& [local, _] : locals) {
    auto c = classify_pair(global, *local);
    if (c.cls == PairClass::Compatible) {
      report.push_back({"global-complementary",
                        {global.name(), local->name()},
                        {},
                        "global observable is compatible with a local observable"});
    }
  }
  return report;
}

std::vector<StateRef> entangled_states(const Model& model, std::string_view global_name,
                                       std::span<const std::string> local_names) {
  auto report = check_entanglement_preconditions(model, global_name, local_names);
  if (!report.empty()) throw EntanglementPrecondition(std::move(report));

  std::set<StateRef> local_eigen;
  for (const auto& name : local_names) {
    for (const auto& e : eigenstates_of_observable(model.observable(name))) local_eigen.insert(e.state);
  }
  std::vector<StateRef> out;
  for (const auto& e : eigenstates_of_observable(model.observable(global_name))) {
    if (!local_eigen.contains(e.state) && (out.empty() || out.back() != e.state)) {
      out.push_back(e.state);
    }
  }
  return out;
}

Report validate_model(const Model& model) {
  Report report;
  const auto& space = model.states();
  auto append = [&](Report r) {
    report.insert(report.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  };

  const auto identity = PropMap::identity(model.space());
  const auto nothing = PropMap::constant_zero(model.space());
  if (!(model.one().yes() == identity) || !(model.one().no() == nothing)) {
    report.push_back({"builtin", {std::string(kOneName)}, {}, "ONE must be (identity, zero)"});
  }
  if (!(model.zero().yes() == nothing) || !(model.zero().no() == identity)) {
    report.push_back({"builtin", {std::string(kZeroName)}, {}, "ZERO must be (zero, identity)"});
  }

  for (const auto& [_, p] : model.propositions()) append(validate_proposition(p, space));

  for (const auto& [name, a] : model.observables()) {
    try {
      append(validate_observable(a, space));
    } catch (const StructuralError& e) {
      report.push_back({"structure", {name}, {}, e.what()});
    }
  }

  if (const auto& part = model.partition()) {
    std::set<std::string_view> subsystems;
    for (const auto& s : part->subsystems) {
      if (!subsystems.insert(s).second) {
        report.push_back({"partition-reference", {s}, {}, "duplicate subsystem label"});
      }
    }
    for (const auto& [obs, sub] : part->local_tags) {
      if (!model.observables().contains(obs)) {
        report.push_back({"partition-reference", {obs}, {}, "local tag names an unknown observable"});
      }
      if (!subsystems.contains(sub)) {
        report.push_back({"partition-reference", {obs, sub}, {}, "local tag names an unknown subsystem"});
      }
    }
    for (const auto& obs : part->global_tags) {
      if (!model.observables().contains(obs)) {
        report.push_back({"partition-reference", {obs}, {}, "global tag names an unknown observable"});
      }
      if (part->local_tags.contains(obs)) {
        report.push_back({"partition-overlap", {obs}, {}, "observable tagged both local and global"});
      }
    }
  }
  return report;
}

}  // namespace gqt
