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

// Finite-dimensional quantum backend. States are density matrices, a
// proposition is a projector P acting as z -> PzP, and orbit_closure
// compiles a quantum system into a finite gqt::Model.

#ifndef GQT_QUANTUM_HPP
#define GQT_QUANTUM_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "gqt/core.hpp"

namespace gqt::quantum {

template <typename Scalar>
using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using MatrixXcd = Matrix<double>;
using VectorXcd = Vector<double>;

template <typename Scalar = double>
class Tolerance {
 public:
  constexpr Tolerance() = default;
  constexpr Tolerance(Scalar value) : value_(value) {  // NOLINT: implicit from a number
    if (!(value >= Scalar(0))) throw DomainError("tolerance must be non-negative");
  }
  constexpr Scalar value() const { return value_; }

 private:
  Scalar value_ = Scalar(1e-9);
};

/// Largest absolute entry.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::RealScalar(0);
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

template <typename Derived>
bool is_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

namespace detail {

template <typename Scalar>
void require_square(const Matrix<Scalar>& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw StructuralError(std::string(what) + " must be a non-empty square matrix");
  }
  if (!is_finite(m)) throw DomainError(std::string(what) + " has non-finite entries");
}

template <typename Scalar>
void require_dimension(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw StructuralError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace detail

/// Non-negative hermitian matrix with positive trace. The stored matrix is
/// not forced to unit trace; z and cz are the same state.
template <typename Scalar = double>
class DensityState {
 public:
  static DensityState from_matrix(Matrix<Scalar> m, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
    detail::require_square(m, "density matrix");
    const Scalar t = tol.value();
    if (!is_hermitian(m, t)) throw DomainError("density matrix is not hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -t) throw DomainError("density matrix is not positive semidefinite");
    if (!(m.trace().real() > t)) throw DomainError("density matrix has vanishing trace");
    return DensityState(std::move(m));
  }

  /// Pure state vv†.
  static DensityState from_vector(const Vector<Scalar>& v, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
    return from_matrix(v * v.adjoint(), tol);
  }

  const Matrix<Scalar>& matrix() const { return matrix_; }
  Scalar trace() const { return matrix_.trace().real(); }
  Matrix<Scalar> normalized() const { return matrix_ / trace(); }
  Eigen::Index dimension() const { return matrix_.rows(); }

 private:
  explicit DensityState(Matrix<Scalar> m) : matrix_(std::move(m)) {}
  Matrix<Scalar> matrix_;
};

/// nullopt plays the role of the improper zero state.
template <typename Scalar = double>
using MaybeState = std::optional<DensityState<Scalar>>;

/// Hermitian idempotent matrix.
template <typename Scalar = double>
class Projector {
 public:
  static Projector from_matrix(Matrix<Scalar> m, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
    detail::require_square(m, "projector");
    if (!is_hermitian(m, tol.value())) throw DomainError("projector is not hermitian");
    if (max_abs(m * m - m) > tol.value()) throw DomainError("projector is not idempotent");
    return Projector(std::move(m));
  }

  /// Rank-one projector onto span{v}.
  static Projector onto(const Vector<Scalar>& v) {
    const Scalar norm2 = v.squaredNorm();
    if (!(norm2 > Scalar(0))) throw DomainError("cannot project onto the zero vector");
    return Projector(v * v.adjoint() / norm2);
  }

  static Projector identity(Eigen::Index dim) {
    return Projector(Matrix<Scalar>::Identity(dim, dim));
  }

  const Matrix<Scalar>& matrix() const { return matrix_; }
  Eigen::Index dimension() const { return matrix_.rows(); }

  /// I - P.
  Projector complement() const {
    return Projector(Matrix<Scalar>::Identity(dimension(), dimension()) - matrix_);
  }

 private:
  explicit Projector(Matrix<Scalar> m) : matrix_(std::move(m)) {}
  Matrix<Scalar> matrix_;
};

/// Candidate realization of an observable. Members are unchecked matrices
/// so that validate_projector_family can report on arbitrary input.
template <typename Scalar = double>
struct ProjectorFamily {
  std::vector<std::string> labels;
  std::map<std::string, Matrix<Scalar>> projectors;
};

/// tr(zA)/tr(z).
template <typename Scalar>
Scalar expectation(const DensityState<Scalar>& z, const Matrix<Scalar>& a, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  detail::require_dimension<Scalar>(z.dimension(), a.rows());
  detail::require_dimension<Scalar>(a.rows(), a.cols());
  if (!is_hermitian(a, tol.value())) throw DomainError("observable matrix is not hermitian");
  const std::complex<Scalar> value = (z.matrix() * a).trace() / z.trace();
  if (std::abs(value.imag()) > tol.value()) {
    throw DomainError("expectation value has a non-negligible imaginary part");
  }
  return value.real();
}

/// AzA, kept unnormalized. Zero when its trace is at most tol.
template <typename Scalar>
MaybeState<Scalar> act_observable(const DensityState<Scalar>& z, const Matrix<Scalar>& a,
                                  std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  detail::require_dimension<Scalar>(z.dimension(), a.rows());
  detail::require_dimension<Scalar>(a.rows(), a.cols());
  if (!is_hermitian(a, tol.value())) throw DomainError("observable matrix is not hermitian");
  Matrix<Scalar> out = a * z.matrix() * a;
  if (out.trace().real() <= tol.value()) return std::nullopt;
  out = (out + out.adjoint().eval()) / Scalar(2);
  return DensityState<Scalar>::from_matrix(std::move(out), tol);
}

/// PzP / tr(PzP), or Zero when tr(PzP) <= tol.
template <typename Scalar>
MaybeState<Scalar> act_projector(const DensityState<Scalar>& z, const Projector<Scalar>& p,
                                 std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  detail::require_dimension<Scalar>(z.dimension(), p.dimension());
  const Matrix<Scalar> zn = z.normalized();
  Matrix<Scalar> out = p.matrix() * zn * p.matrix();
  const Scalar tr = out.trace().real();
  if (tr <= tol.value()) return std::nullopt;
  out /= tr;
  out = (out + out.adjoint().eval()) / Scalar(2);
  return DensityState<Scalar>::from_matrix(std::move(out), tol);
}

/// Equality of trace-normalized matrices, inclusive at tol.
template <typename Scalar>
bool states_equal(const DensityState<Scalar>& a, const DensityState<Scalar>& b, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  detail::require_dimension<Scalar>(a.dimension(), b.dimension());
  return max_abs(a.normalized() - b.normalized()) <= tol.value();
}

template <typename Scalar>
bool states_equal(const MaybeState<Scalar>& a, const MaybeState<Scalar>& b, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  if (!a || !b) return !a && !b;
  return states_equal(*a, *b, tol);
}

/// The quantum proposition induced by P: yes is z -> PzP, no is
/// z -> (I-P)z(I-P).
template <typename Scalar = double>
class QuantumProposition {
 public:
  explicit QuantumProposition(Projector<Scalar> p, std::type_identity_t<Tolerance<Scalar>> tol = {})
      : yes_(p), no_(p.complement()), tol_(tol) {}

  MaybeState<Scalar> yes(const MaybeState<Scalar>& z) const { return act(z, yes_); }
  MaybeState<Scalar> no(const MaybeState<Scalar>& z) const { return act(z, no_); }
  MaybeState<Scalar> apply(Outcome outcome, const MaybeState<Scalar>& z) const {
    return outcome == Outcome::Yes ? yes(z) : no(z);
  }

  const Projector<Scalar>& yes_projector() const { return yes_; }
  const Projector<Scalar>& no_projector() const { return no_; }

 private:
  MaybeState<Scalar> act(const MaybeState<Scalar>& z, const Projector<Scalar>& p) const {
    if (!z) return std::nullopt;
    return act_projector(*z, p, tol_);
  }

  Projector<Scalar> yes_;
  Projector<Scalar> no_;
  Tolerance<Scalar> tol_;
};

template <typename Scalar>
QuantumProposition<Scalar> make_quantum_proposition(const Projector<Scalar>& p, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  return QuantumProposition<Scalar>(p, tol);
}

/// Throws DomainError when m is not a projector.
template <typename Scalar>
QuantumProposition<Scalar> make_quantum_proposition(const Matrix<Scalar>& m, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  return QuantumProposition<Scalar>(Projector<Scalar>::from_matrix(m, tol), tol);
}

template <typename Scalar>
Report validate_projector_family(const ProjectorFamily<Scalar>& family, std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  Report report;
  const Scalar t = tol.value();
  std::vector<const Matrix<Scalar>*> members;
  for (const auto& label : family.labels) {
    auto it = family.projectors.find(label);
    if (it == family.projectors.end()) {
      report.push_back({"family-member", {label}, {}, "no projector for this label"});
      continue;
    }
    const auto& m = it->second;
    if (m.rows() != m.cols() || (!members.empty() && m.rows() != members.front()->rows())) {
      report.push_back({"dimension", {label}, {}, "inconsistent dimensions"});
      continue;
    }
    if (!is_hermitian(m, t)) report.push_back({"hermitian", {label}, {}, "M != M^+"});
    if (max_abs(m * m - m) > t) report.push_back({"idempotent", {label}, {}, "M M != M"});
    members.push_back(&m);
  }
  if (!report.empty()) return report;
  for (std::size_t i = 0; i < family.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < family.labels.size(); ++j) {
      const auto& a = family.projectors.at(family.labels[i]);
      const auto& b = family.projectors.at(family.labels[j]);
      if (max_abs(a * b) > t) {
        report.push_back({"orthogonal", {family.labels[i], family.labels[j]}, {}, "M_a M_b != 0"});
      }
    }
  }
  if (!members.empty()) {
    const Eigen::Index d = members.front()->rows();
    Matrix<Scalar> sum = Matrix<Scalar>::Zero(d, d);
    for (const auto* m : members) sum += *m;
    if (max_abs(sum - Matrix<Scalar>::Identity(d, d)) > t) {
      report.push_back({"resolution-of-identity", {}, {}, "sum of projectors != I"});
    }
  }
  return report;
}

class OrbitCapExceeded : public Error {
 public:
  OrbitCapExceeded(std::size_t cap, std::size_t discovered, std::size_t frontier)
      : Error("orbit closure exceeded the cap of " + std::to_string(cap) + " states (" +
              std::to_string(discovered) + " discovered, " + std::to_string(frontier) +
              " still unexpanded)"),
        cap_(cap),
        discovered_(discovered),
        frontier_(frontier) {}

  std::size_t cap() const { return cap_; }
  std::size_t discovered() const { return discovered_; }
  std::size_t frontier() const { return frontier_; }

 private:
  std::size_t cap_;
  std::size_t discovered_;
  std::size_t frontier_;
};

template <typename Scalar = double>
struct NamedProjector {
  std::string name;
  Projector<Scalar> projector;
};

template <typename Scalar = double>
struct NamedState {
  std::string name;
  DensityState<Scalar> state;
};

/// A closed orbit: the compiled model plus the density matrix behind each
/// model state (same order as the state space).
template <typename Scalar = double>
struct Orbit {
  Model model;
  std::vector<DensityState<Scalar>> states;
};

/// Breadth-first closure of `seeds` under the yes and no actions of every
/// projector. States are discovered seeds first, then per expanded state
/// each projector in order, yes-image before no-image. A state equal to one
/// of `references` takes that name; every other state is named "s<k>" with
/// k its discovery index. Throws OrbitCapExceeded when more than `cap`
/// distinct states appear.
template <typename Scalar>
Orbit<Scalar> orbit_closure(std::span<const DensityState<Scalar>> seeds,
                            std::span<const NamedProjector<Scalar>> propositions, std::size_t cap,
                            std::type_identity_t<Tolerance<Scalar>> tol = {},
                            std::span<const NamedState<Scalar>> references = {}) {
  if (cap < 1) throw DomainError("orbit cap must be at least 1");
  if (seeds.empty()) throw StructuralError("orbit closure needs at least one seed");
  const Eigen::Index dim = seeds.front().dimension();
  for (const auto& s : seeds) detail::require_dimension<Scalar>(dim, s.dimension());
  for (const auto& p : propositions) detail::require_dimension<Scalar>(dim, p.projector.dimension());
  for (const auto& r : references) detail::require_dimension<Scalar>(dim, r.state.dimension());

  std::vector<DensityState<Scalar>> states;
  std::deque<std::size_t> frontier;
  auto intern = [&](const DensityState<Scalar>& z) -> std::size_t {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states_equal(states[i], z, tol)) return i;
    }
    if (states.size() == cap) throw OrbitCapExceeded(cap, states.size() + 1, frontier.size() + 1);
    Matrix<Scalar> normalized = z.normalized();
    states.push_back(DensityState<Scalar>::from_matrix(std::move(normalized), tol));
    frontier.push_back(states.size() - 1);
    return states.size() - 1;
  };
  for (const auto& s : seeds) intern(s);

  // images[k][i]: image of state i under projector k (yes at 2k, no at 2k+1).
  std::vector<std::vector<StateRef>> images(2 * propositions.size());
  std::vector<Projector<Scalar>> actions;
  for (const auto& p : propositions) {
    actions.push_back(p.projector);
    actions.push_back(p.projector.complement());
  }
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (std::size_t k = 0; k < actions.size(); ++k) {
      auto image = act_projector(states[i], actions[k], tol);
      const StateRef ref = image ? StateRef::proper(intern(*image)) : StateRef::zero();
      if (images[k].size() <= i) images[k].resize(i + 1, StateRef::zero());
      images[k][i] = ref;
    }
  }

  std::vector<std::string> names;
  names.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    auto named = std::find_if(references.begin(), references.end(),
                              [&](const NamedState<Scalar>& r) { return states_equal(states[i], r.state, tol); });
    names.push_back(named != references.end() ? named->name : "s" + std::to_string(i));
  }
  auto space = std::make_shared<const StateSpace>(std::move(names));

  std::vector<Proposition> props;
  for (std::size_t k = 0; k < propositions.size(); ++k) {
    images[2 * k].resize(states.size(), StateRef::zero());
    images[2 * k + 1].resize(states.size(), StateRef::zero());
    props.emplace_back(propositions[k].name, PropMap(space, images[2 * k]), PropMap(space, images[2 * k + 1]));
  }
  return Orbit<Scalar>{Model(space, std::move(props), {}), std::move(states)};
}

/// Projector pairs whose induced propositions are compatible on the orbit
/// although the matrices do not commute. Such pairs are candidates only:
/// a finite orbit may not visit the states that separate them.
struct CommutationCandidate {
  std::string p;
  std::string q;
  double commutator_norm;
};

template <typename Scalar>
std::vector<CommutationCandidate> compatibility_candidates(const Model& orbit_model,
                                                           std::span<const NamedProjector<Scalar>> projectors,
                                                           std::type_identity_t<Tolerance<Scalar>> tol = {}) {
  std::vector<CommutationCandidate> out;
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      const auto& a = projectors[i].projector.matrix();
      const auto& b = projectors[j].projector.matrix();
      const Scalar norm = max_abs(a * b - b * a);
      if (norm <= tol.value()) continue;
      auto p = orbit_model.find_proposition(projectors[i].name);
      auto q = orbit_model.find_proposition(projectors[j].name);
      if (p && q && is_compatible_propositions(*p, *q)) {
        out.push_back({projectors[i].name, projectors[j].name, static_cast<double>(norm)});
      }
    }
  }
  return out;
}

/// An observable given as projector references: a projector name, or the
/// name with the negation prefix for I - P.
struct QuantumObservable {
  std::string name;
  std::vector<std::string> spectrum;
  std::map<std::string, std::string> family;
};

template <typename Scalar = double>
struct QuantumSystem {
  std::vector<NamedState<Scalar>> seeds;
  std::vector<NamedState<Scalar>> references;
  std::vector<NamedProjector<Scalar>> propositions;
  std::vector<QuantumObservable> observables;
  std::optional<Partition> partition;
  std::size_t cap = 256;
  Tolerance<Scalar> tol{};
};

template <typename Scalar = double>
struct BuildResult {
  std::optional<Model> model;
  Report report;
  std::vector<CommutationCandidate> candidates;
};

/// Checks every observable's projector family, closes the orbit, attaches
/// observables and partition, and validates the resulting model. The model
/// is returned only when no family fails; `report` then holds any
/// validate_model findings.
template <typename Scalar>
BuildResult<Scalar> build_model(const QuantumSystem<Scalar>& system) {
  BuildResult<Scalar> result;
  auto resolve = [&](const std::string& ref) -> std::optional<Matrix<Scalar>> {
    const bool negated = std::string_view(ref).starts_with(kNegationPrefix);
    const std::string base = negated ? ref.substr(kNegationPrefix.size()) : ref;
    for (const auto& p : system.propositions) {
      if (p.name == base) return negated ? p.projector.complement().matrix() : p.projector.matrix();
    }
    if (base == kOneName || base == kZeroName) {
      const Eigen::Index d = system.seeds.empty() ? 0 : system.seeds.front().state.dimension();
      const bool one = (base == kOneName) != negated;
      return one ? Matrix<Scalar>(Matrix<Scalar>::Identity(d, d)) : Matrix<Scalar>(Matrix<Scalar>::Zero(d, d));
    }
    return std::nullopt;
  };
  for (const auto& obs : system.observables) {
    ProjectorFamily<Scalar> family{obs.spectrum, {}};
    for (const auto& [label, ref] : obs.family) {
      auto m = resolve(ref);
      if (!m) throw StructuralError("observable '" + obs.name + "' refers to unknown projector '" + ref + "'");
      family.projectors.emplace(label, std::move(*m));
    }
    for (auto v : validate_projector_family(family, system.tol)) {
      v.subjects.insert(v.subjects.begin(), obs.name);
      result.report.push_back(std::move(v));
    }
  }
  if (!result.report.empty()) return result;

  std::vector<DensityState<Scalar>> seeds;
  std::vector<NamedState<Scalar>> references = system.seeds;
  for (const auto& s : system.seeds) seeds.push_back(s.state);
  references.insert(references.end(), system.references.begin(), system.references.end());
  auto orbit = orbit_closure<Scalar>(seeds, system.propositions, system.cap, system.tol, references);

  const Model& base = orbit.model;
  std::vector<Proposition> props;
  for (const auto& [_, p] : base.propositions()) props.push_back(p);
  std::vector<Observable> observables;
  for (const auto& obs : system.observables) {
    std::map<std::string, Proposition> family;
    for (const auto& [label, ref] : obs.family) family.emplace(label, *base.find_proposition(ref));
    observables.emplace_back(obs.name, obs.spectrum, std::move(family));
  }
  result.model.emplace(base.space(), std::move(props), std::move(observables), system.partition);
  result.report = validate_model(*result.model);
  result.candidates = compatibility_candidates<Scalar>(*result.model, system.propositions, system.tol);
  return result;
}

}  // namespace gqt::quantum

#endif  // GQT_QUANTUM_HPP
