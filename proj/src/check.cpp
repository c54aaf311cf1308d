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

#include "gqt/check.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <utility>

namespace gqt::check {

namespace {

// mt19937_64 output is fixed by the standard; distributions are not, so
// bounded draws are done here to keep models identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  std::size_t in_range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::vector<StateRef> proper_states(std::size_t n) {
  std::vector<StateRef> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(StateRef::proper(i));
  return out;
}

enum class Role { Yes, No, Contingent };

Proposition random_proposition(Rng& rng, const SpacePtr& space, std::string name) {
  const std::size_t n = space->size();
  const bool classical = rng.chance(1, 4);
  std::vector<Role> role(n);
  std::vector<StateRef> ys, ns;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = rng.below(classical ? 2 : 3);
    role[i] = r == 0 ? Role::Yes : r == 1 ? Role::No : Role::Contingent;
  }
  if (std::all_of(role.begin(), role.end(), [](Role r) { return r == Role::Contingent; })) {
    role[rng.below(n)] = rng.chance(1, 2) ? Role::Yes : Role::No;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (role[i] == Role::Yes) ys.push_back(StateRef::proper(i));
    if (role[i] == Role::No) ns.push_back(StateRef::proper(i));
  }

  std::vector<StateRef> yes(n, StateRef::zero()), no(n, StateRef::zero());
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = StateRef::proper(i);
    switch (role[i]) {
      case Role::Yes: yes[i] = z; break;
      case Role::No: no[i] = z; break;
      case Role::Contingent: {
        if (!ys.empty() && !(!ns.empty() && rng.chance(1, 4))) yes[i] = rng.pick(ys);
        if (!ns.empty() && !(yes[i].is_proper() && rng.chance(1, 4))) no[i] = rng.pick(ns);
        if (yes[i].is_zero() && no[i].is_zero()) {
          if (!ns.empty()) no[i] = rng.pick(ns); else yes[i] = rng.pick(ys);
        }
        break;
      }
    }
  }
  return Proposition(std::move(name), PropMap(space, std::move(yes)), PropMap(space, std::move(no)));
}

// Family over k values built from eigen-blocks E_v plus contingent states
// with at least one possible branch. Each member is a valid proposition and
// the members annihilate pairwise.
std::vector<Proposition> random_family(Rng& rng, const SpacePtr& space, const std::string& prefix,
                                       const std::vector<std::string>& values, bool classical) {
  const std::size_t n = space->size();
  const std::size_t k = values.size();
  constexpr std::size_t kContingent = static_cast<std::size_t>(-1);
  std::vector<std::size_t> block(n);
  for (std::size_t i = 0; i < n; ++i) {
    block[i] = (!classical && rng.chance(1, 3)) ? kContingent : rng.below(k);
  }
  if (std::all_of(block.begin(), block.end(), [&](std::size_t b) { return b == kContingent; })) {
    block[rng.below(n)] = rng.below(k);
  }
  std::vector<std::vector<StateRef>> eigen(k);
  for (std::size_t i = 0; i < n; ++i) {
    if (block[i] != kContingent) eigen[block[i]].push_back(StateRef::proper(i));
  }
  std::vector<std::size_t> occupied;
  for (std::size_t v = 0; v < k; ++v) {
    if (!eigen[v].empty()) occupied.push_back(v);
  }

  // branch[v][i]: yes-image of contingent state i under value v.
  std::vector<std::vector<StateRef>> branch(k, std::vector<StateRef>(n, StateRef::zero()));
  for (std::size_t i = 0; i < n; ++i) {
    if (block[i] != kContingent) continue;
    bool any = false;
    for (auto v : occupied) {
      if (rng.chance(1, 2)) {
        branch[v][i] = rng.pick(eigen[v]);
        any = true;
      }
    }
    if (!any) {
      const auto v = rng.pick(occupied);
      branch[v][i] = rng.pick(eigen[v]);
    }
  }

  std::vector<Proposition> members;
  for (std::size_t v = 0; v < k; ++v) {
    std::vector<StateRef> others;
    for (std::size_t w = 0; w < k; ++w) {
      if (w != v) others.insert(others.end(), eigen[w].begin(), eigen[w].end());
    }
    std::vector<StateRef> yes(n, StateRef::zero()), no(n, StateRef::zero());
    for (std::size_t i = 0; i < n; ++i) {
      const auto z = StateRef::proper(i);
      if (block[i] == v) {
        yes[i] = z;
      } else if (block[i] != kContingent) {
        no[i] = z;
      } else {
        yes[i] = branch[v][i];
        if (!others.empty() && (yes[i].is_zero() || !rng.chance(1, 4))) no[i] = rng.pick(others);
      }
    }
    members.emplace_back(prefix + "_" + values[v], PropMap(space, std::move(yes)),
                         PropMap(space, std::move(no)));
  }
  return members;
}

// Names of every proposition the laws are checked on: builtins, declared
// propositions, and observable family members, without duplicates.
std::vector<Proposition> law_subjects(const Model& model) {
  std::vector<Proposition> out{model.one(), model.zero()};
  std::set<std::string> seen{out[0].name(), out[1].name()};
  for (const auto& [name, p] : model.propositions()) {
    if (seen.insert(name).second) out.push_back(p);
  }
  for (const auto& [_, a] : model.observables()) {
    for (const auto& [__, p] : a.family()) {
      if (seen.insert(p.name()).second) out.push_back(p);
    }
  }
  return out;
}

bool observables_compatible(const Observable& a, const Observable& b) {
  for (const auto& va : a.spectrum()) {
    for (const auto& vb : b.spectrum()) {
      if (!is_compatible_propositions(a.member(va), b.member(vb))) return false;
    }
  }
  return true;
}

bool is_common_eigenstate(const Observable& a, const Observable& b, StateRef w) {
  for (const auto& e : common_eigenstates(a, b)) {
    if (e.state == w) return true;
  }
  return false;
}

// Per-witness law evaluators. Each returns true when the law FAILS at z.
bool fails_pp(const Proposition& p, StateRef z) { return p.yes()(p.yes()(z)) != p.yes()(z); }
bool fails_nn(const Proposition& p, StateRef z) { return p.no()(p.no()(z)) != p.no()(z); }
bool fails_annihilation(const Proposition& p, StateRef z) {
  return p.yes()(p.no()(z)).is_proper() || p.no()(p.yes()(z)).is_proper();
}
bool fails_consistency(const Proposition& p, StateRef z) {
  return p.yes()(z).is_zero() && p.no()(z).is_zero();
}
bool fails_zero_absorbs(const Model& m, const Proposition& p, StateRef z) {
  return m.zero().yes()(p.yes()(z)).is_proper() || p.yes()(m.zero().yes()(z)).is_proper();
}
bool fails_one_neutral(const Model& m, const Proposition& p, StateRef z) {
  return m.one().yes()(p.yes()(z)) != p.yes()(z) || p.yes()(m.one().yes()(z)) != p.yes()(z);
}
bool fails_pq_commute(const Proposition& p, const Proposition& q, StateRef z) {
  return is_compatible_propositions(p, q) && p.yes()(q.yes()(z)) != q.yes()(p.yes()(z));
}
bool fails_one_and(const Model& m, const Proposition& p, StateRef z) {
  return conjunction(m.one(), p).known_map(z) != p.yes()(z);
}
bool fails_and_neg(const Proposition& p, StateRef z) {
  return conjunction(p, negate(p)).known_map(z).is_proper();
}
bool fails_joint_eigenstate(const Observable& a, const Observable& b, StateRef z) {
  if (!observables_compatible(a, b)) return false;
  for (const auto& va : a.spectrum()) {
    for (const auto& vb : b.spectrum()) {
      const auto w = b.member(vb).yes()(a.member(va).yes()(z));
      if (w.is_proper() && is_common_eigenstate(a, b, w)) return false;
    }
  }
  return true;
}
bool fails_strongcomp(const Observable& a, const Observable& b) {
  const auto cls = classify_pair(a, b).cls;
  const bool common_empty = common_eigenstates(a, b).empty();
  return (common_empty && observables_compatible(a, b)) ||
         (cls == PairClass::StronglyComplementary && (observables_compatible(a, b) || !common_empty));
}
bool fails_order(const Observable& a, const Observable& b, std::string_view va, std::string_view vb,
                 StateRef z) {
  if (!observables_compatible(a, b)) return false;
  const auto& pa = a.member(va);
  const auto& pb = b.member(vb);
  return pb.yes()(pa.yes()(z)) != pa.yes()(pb.yes()(z));
}

std::optional<Proposition> subject_proposition(const Model& model, const Violation& v, std::size_t i) {
  if (v.subjects.size() <= i) return std::nullopt;
  if (auto p = model.find_proposition(v.subjects[i])) return p;
  for (const auto& p : law_subjects(model)) {
    if (p.name() == v.subjects[i]) return p;
  }
  return std::nullopt;
}

}  // namespace

void GeneratorParams::validate() const {
  if (n_states < 1 || n_states > 64) throw DomainError("n_states must be in 1..64");
  if (n_props > 16) throw DomainError("n_props must be in 0..16");
  if (n_obs > 8) throw DomainError("n_obs must be in 0..8");
  if (max_spectrum < 2 || max_spectrum > 8) throw DomainError("max_spectrum must be in 2..8");
}

Model generate_model(const GeneratorParams& params) {
  params.validate();
  Rng rng(params.seed);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < params.n_states; ++i) names.push_back("z" + std::to_string(i));
  auto space = std::make_shared<const StateSpace>(std::move(names));

  std::vector<Proposition> props;
  for (std::size_t i = 0; i < params.n_props; ++i) {
    props.push_back(random_proposition(rng, space, "P" + std::to_string(i)));
  }

  std::vector<Observable> observables;
  for (std::size_t i = 0; i < params.n_obs; ++i) {
    const std::string name = "A" + std::to_string(i);
    const std::size_t kind = rng.below(observables.empty() ? 3 : 4);
    if (kind == 0) {
      auto p = random_proposition(rng, space, name + "_yes");
      props.push_back(p);
      std::map<std::string, Proposition> family;
      family.emplace("yes", p);
      family.emplace("no", negate(p));
      observables.emplace_back(name, std::vector<std::string>{"yes", "no"}, std::move(family));
    } else if (kind == 1 || kind == 2) {
      const std::size_t k = rng.in_range(2, params.max_spectrum);
      std::vector<std::string> values;
      for (std::size_t v = 0; v < k; ++v) values.push_back(std::to_string(v));
      auto members = random_family(rng, space, name, values, kind == 2);
      std::map<std::string, Proposition> family;
      for (std::size_t v = 0; v < k; ++v) {
        family.emplace(values[v], members[v]);
        props.push_back(members[v]);
      }
      observables.emplace_back(name, std::move(values), std::move(family));
    } else {
      // Relabelled copy of an earlier observable: compatible with it.
      const auto& src = observables[rng.below(observables.size())];
      std::vector<std::string> values;
      std::map<std::string, Proposition> family;
      for (const auto& v : src.spectrum()) {
        values.push_back("c" + v);
        family.emplace("c" + v, src.member(v));
      }
      observables.emplace_back(name, std::move(values), std::move(family));
    }
  }
  return Model(space, std::move(props), std::move(observables));
}

bool is_law_id(std::string_view law) {
  return std::find(kLawIds.begin(), kLawIds.end(), law) != kLawIds.end();
}

std::vector<Violation> check_laws(const Model& model) {
  std::vector<Violation> out;
  const auto& space = model.states();
  const auto states = proper_states(space.size());
  const auto subjects = law_subjects(model);
  auto name_of = [&](StateRef z) { return model.state_name(z); };

  auto per_state = [&](std::string_view law, std::vector<std::string> names, auto&& fails) {
    for (auto z : states) {
      if (fails(z)) out.push_back({std::string(law), names, {name_of(z)}, ""});
    }
  };

  for (const auto& p : subjects) {
    per_state("PP=P", {p.name()}, [&](StateRef z) { return fails_pp(p, z); });
    per_state("negPnegP=negP", {p.name()}, [&](StateRef z) { return fails_nn(p, z); });
    per_state(kLawIds[2], {p.name()}, [&](StateRef z) { return fails_annihilation(p, z); });
    per_state("consistency", {p.name()}, [&](StateRef z) { return fails_consistency(p, z); });
    per_state("0P=P0=0", {p.name()}, [&](StateRef z) { return fails_zero_absorbs(model, p, z); });
    per_state("1P=P1=P", {p.name()}, [&](StateRef z) { return fails_one_neutral(model, p, z); });
    per_state("1ANDP=P", {p.name()}, [&](StateRef z) { return fails_one_and(model, p, z); });
    if (is_compatible_propositions(p, negate(p))) {
      per_state("PANDnegP=0", {p.name()}, [&](StateRef z) { return fails_and_neg(p, z); });
    } else {
      out.push_back({"PANDnegP=0", {p.name()}, {}, "P and its negation are not compatible"});
    }
  }
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    for (std::size_t j = i + 1; j < subjects.size(); ++j) {
      const auto& p = subjects[i];
      const auto& q = subjects[j];
      if (!is_compatible_propositions(p, q)) continue;
      per_state("PQ=QP", {p.name(), q.name()}, [&](StateRef z) { return fails_pq_commute(p, q, z); });
    }
  }

  std::vector<const Observable*> valid;
  for (const auto& [name, a] : model.observables()) {
    Report r;
    try {
      r = validate_observable(a, space);
    } catch (const StructuralError& e) {
      out.push_back({"structure", {name}, {}, e.what()});
      continue;
    }
    for (auto& v : r) {
      v.law = v.law == "mutual-exclusion" ? "exclusion" : v.law;
      out.push_back(std::move(v));
    }
    valid.push_back(&a);
  }

  for (std::size_t i = 0; i < valid.size(); ++i) {
    for (std::size_t j = i; j < valid.size(); ++j) {
      const auto& a = *valid[i];
      const auto& b = *valid[j];
      per_state("compat-implies-joint-eigenstate", {a.name(), b.name()},
                [&](StateRef z) { return fails_joint_eigenstate(a, b, z); });
      if (fails_strongcomp(a, b)) {
        out.push_back({"strongcomp-implies-comp", {a.name(), b.name()}, {},
                       "no common eigenstate, yet classified compatible"});
      }
      if (!observables_compatible(a, b)) continue;
      for (const auto& va : a.spectrum()) {
        for (const auto& vb : b.spectrum()) {
          per_state("order-independence", {a.name(), b.name(), va, vb},
                    [&](StateRef z) { return fails_order(a, b, va, vb, z); });
        }
      }
    }
  }
  return out;
}

bool reproduces(const Model& model, const Violation& v) {
  std::optional<StateRef> z;
  if (!v.witnesses.empty()) {
    auto idx = model.states().find(v.witnesses.front());
    if (!idx) return false;
    z = StateRef::proper(*idx);
  }
  const auto& law = v.law;
  try {
    if (law == "structure") {
      const auto& a = model.observable(v.subjects.at(0));
      try {
        validate_observable(a, model.states());
        return false;
      } catch (const StructuralError&) {
        return true;
      }
    }
    if (law == "exclusion" || law == "mutual-exclusion") {
      const auto& a = model.observable(v.subjects.at(0));
      return z && a.member(v.subjects.at(1)).yes()(a.member(v.subjects.at(2)).yes()(*z)).is_proper();
    }
    if (law == "completeness") {
      const auto& a = model.observable(v.subjects.at(0));
      if (!z) return false;
      for (const auto& val : a.spectrum()) {
        if (a.member(val).yes()(*z).is_proper()) return false;
      }
      return true;
    }
    if (law == "compat-implies-joint-eigenstate") {
      return z && fails_joint_eigenstate(model.observable(v.subjects.at(0)),
                                         model.observable(v.subjects.at(1)), *z);
    }
    if (law == "strongcomp-implies-comp") {
      return fails_strongcomp(model.observable(v.subjects.at(0)), model.observable(v.subjects.at(1)));
    }
    if (law == "order-independence") {
      return z && fails_order(model.observable(v.subjects.at(0)), model.observable(v.subjects.at(1)),
                              v.subjects.at(2), v.subjects.at(3), *z);
    }

    auto p = subject_proposition(model, v, 0);
    if (!p) return false;
    if (law == "PANDnegP=0" && !z) return !is_compatible_propositions(*p, negate(*p));
    if (law == "PQ=QP") {
      auto q = subject_proposition(model, v, 1);
      return q && z && fails_pq_commute(*p, *q, *z);
    }
    if (!z) return false;
    if (law == "PP=P" || law == "idempotence-yes") return fails_pp(*p, *z);
    if (law == "negPnegP=negP" || law == "idempotence-no") return fails_nn(*p, *z);
    if (law == kLawIds[2] || law == "annihilation") return fails_annihilation(*p, *z);
    if (law == "consistency") return fails_consistency(*p, *z);
    if (law == "0P=P0=0") return fails_zero_absorbs(model, *p, *z);
    if (law == "1P=P1=P") return fails_one_neutral(model, *p, *z);
    if (law == "1ANDP=P") return fails_one_and(model, *p, *z);
    if (law == "PANDnegP=0") return fails_and_neg(*p, *z);
  } catch (const Error&) {
    return false;
  }
  return false;
}

Model minimize(const Model& model, const Violation& violation) {
  const auto& space = model.states();
  std::vector<bool> keep(space.size(), false);
  std::vector<std::size_t> stack;
  for (const auto& w : violation.witnesses) {
    if (auto i = space.find(w); i && !keep[*i]) {
      keep[*i] = true;
      stack.push_back(*i);
    }
  }
  if (stack.empty()) return model;

  const auto subjects = law_subjects(model);
  while (!stack.empty()) {
    const auto i = stack.back();
    stack.pop_back();
    for (const auto& p : subjects) {
      for (const auto* m : {&p.yes(), &p.no()}) {
        const auto w = (*m)(StateRef::proper(i));
        if (w.is_proper() && !keep[w.index()]) {
          keep[w.index()] = true;
          stack.push_back(w.index());
        }
      }
    }
  }

  std::vector<std::string> names;
  std::vector<std::size_t> remap(space.size(), 0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (keep[i]) {
      remap[i] = names.size();
      names.push_back(space.name(i));
    }
  }
  auto sub = std::make_shared<const StateSpace>(std::move(names));
  auto restrict_map = [&](const PropMap& m) {
    std::vector<StateRef> images;
    for (std::size_t i = 0; i < space.size(); ++i) {
      if (!keep[i]) continue;
      const auto w = m(StateRef::proper(i));
      images.push_back(w.is_zero() ? w : StateRef::proper(remap[w.index()]));
    }
    return PropMap(sub, std::move(images));
  };
  auto restrict_prop = [&](const Proposition& p) {
    return Proposition(p.name(), restrict_map(p.yes()), restrict_map(p.no()));
  };

  std::vector<Proposition> props;
  for (const auto& [_, p] : model.propositions()) props.push_back(restrict_prop(p));
  std::vector<Observable> observables;
  for (const auto& [name, a] : model.observables()) {
    std::map<std::string, Proposition> family;
    for (const auto& [v, p] : a.family()) family.emplace(v, restrict_prop(p));
    observables.emplace_back(name, std::vector<std::string>(a.spectrum().begin(), a.spectrum().end()),
                             std::move(family));
  }
  return Model(sub, std::move(props), std::move(observables), model.partition());
}

FuzzSummary fuzz(const GeneratorParams& maxima, std::size_t n_models) {
  maxima.validate();
  FuzzSummary summary;
  for (std::size_t i = 0; i < n_models; ++i) {
    const std::uint64_t seed = maxima.seed + i;
    // Sizes come from a separate stream so they do not correlate with the
    // generator's own draws.
    Rng sizes(seed ^ 0x9E3779B97F4A7C15ull);
    GeneratorParams params = maxima;
    params.seed = seed;
    params.n_states = sizes.in_range(1, maxima.n_states);
    params.n_props = sizes.in_range(0, maxima.n_props);
    params.n_obs = sizes.in_range(0, maxima.n_obs);
    const Model model = generate_model(params);
    auto violations = check_laws(model);
    ++summary.models_checked;
    summary.violations += violations.size();
    for (auto& v : violations) {
      if (summary.first_by_law.contains(v.law)) continue;
      Model small = minimize(model, v);
      summary.first_by_law.emplace(v.law, Counterexample{seed, std::move(v), std::move(small)});
    }
  }
  return summary;
}

}  // namespace gqt::check
