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

#include "gqt/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace gqt::io {

namespace {

using Json = nlohmann::ordered_json;

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and may point one past the end at EOF.
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    // Drop nlohmann's own location prefix; the line is reported separately.
    std::string message = e.what();
    if (auto col = message.find("column "); col != std::string::npos) {
      if (auto sep = message.find(": ", col); sep != std::string::npos) message = message.substr(sep + 2);
    }
    throw ParseError("", message, line_of(text, byte == 0 ? 0 : byte - 1));
  }
}

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw ParseError(field, message);
}

const Json& require_object(const Json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected an object");
  return j;
}

const Json& require_array(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  return j;
}

std::string require_string(const Json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

void allow_keys(const Json& obj, const std::string& field, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      fail(field.empty() ? k : field + "." + k, "unexpected field");
    }
  }
}

std::vector<std::string> string_list(const Json& j, const std::string& field) {
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& item : require_array(j, field)) {
    out.push_back(require_string(item, field + "[" + std::to_string(i++) + "]"));
  }
  return out;
}

PropMap parse_map(const Json& j, const SpacePtr& space, const std::string& field) {
  require_object(j, field);
  std::vector<std::optional<StateRef>> images(space->size());
  for (const auto& [key, value] : j.items()) {
    const std::string at = field + "." + key;
    auto src = space->find(key);
    if (!src) fail(at, "unknown state '" + key + "'");
    if (images[*src]) fail(at, "state listed twice");
    if (value.is_null()) {
      images[*src] = StateRef::zero();
    } else {
      const auto target = require_string(value, at);
      auto dst = space->find(target);
      if (!dst) fail(at, "unknown state '" + target + "'");
      images[*src] = StateRef::proper(*dst);
    }
  }
  std::vector<StateRef> total;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i]) fail(field, "map is not total: missing state '" + space->name(i) + "'");
    total.push_back(*images[i]);
  }
  return PropMap(space, std::move(total));
}

std::optional<Partition> parse_partition(const Json& root, const std::string& field) {
  if (!root.contains("partition")) return std::nullopt;
  const auto& j = require_object(root["partition"], field);
  allow_keys(j, field, {"subsystems", "local", "global"});
  Partition part;
  if (j.contains("subsystems")) part.subsystems = string_list(j["subsystems"], field + ".subsystems");
  if (j.contains("local")) {
    for (const auto& [obs, sub] : require_object(j["local"], field + ".local").items()) {
      part.local_tags.emplace(obs, require_string(sub, field + ".local." + obs));
    }
  }
  if (j.contains("global")) part.global_tags = string_list(j["global"], field + ".global");
  return part;
}

Json partition_json(const Partition& part) {
  Json j = Json::object();
  j["subsystems"] = part.subsystems;
  Json local = Json::object();
  for (const auto& [obs, sub] : part.local_tags) local[obs] = sub;
  j["local"] = std::move(local);
  j["global"] = part.global_tags;
  return j;
}

template <typename Fn>
auto with_context(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(field, e.what());
  }
}

// --- quantum documents ---

using quantum::MatrixXcd;
using quantum::VectorXcd;

std::complex<double> parse_complex(const Json& j, const std::string& field) {
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(field, "expected a complex number [re, im]");
}

VectorXcd parse_vector(const Json& j, long dim, const std::string& field) {
  require_array(j, field);
  if (static_cast<long>(j.size()) != dim) fail(field, "expected " + std::to_string(dim) + " entries");
  VectorXcd v(dim);
  for (long i = 0; i < dim; ++i) v(i) = parse_complex(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

MatrixXcd parse_matrix(const Json& j, long dim, const std::string& field) {
  require_array(j, field);
  if (static_cast<long>(j.size()) != dim) fail(field, "expected " + std::to_string(dim) + " rows");
  MatrixXcd m(dim, dim);
  for (long r = 0; r < dim; ++r) {
    const std::string row = field + "[" + std::to_string(r) + "]";
    require_array(j[r], row);
    if (static_cast<long>(j[r].size()) != dim) fail(row, "expected " + std::to_string(dim) + " columns");
    for (long c = 0; c < dim; ++c) m(r, c) = parse_complex(j[r][c], row + "[" + std::to_string(c) + "]");
  }
  return m;
}

// A vector is d entries [re, im]; a matrix is d rows of d such entries.
bool looks_like_matrix(const Json& j) {
  return j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
}

quantum::DensityState<double> parse_state(const Json& j, long dim, const std::string& field,
                                          quantum::Tolerance<double> tol) {
  return with_context(field, [&] {
    if (looks_like_matrix(j)) return quantum::DensityState<double>::from_matrix(parse_matrix(j, dim, field), tol);
    return quantum::DensityState<double>::from_vector(parse_vector(j, dim, field), tol);
  });
}

quantum::Projector<double> parse_projector(const Json& j, long dim, const std::string& field,
                                           quantum::Tolerance<double> tol) {
  return with_context(field, [&] {
    if (looks_like_matrix(j)) return quantum::Projector<double>::from_matrix(parse_matrix(j, dim, field), tol);
    return quantum::Projector<double>::onto(parse_vector(j, dim, field));
  });
}

}  // namespace

ParseError::ParseError(std::string field, const std::string& message, std::optional<std::size_t> line)
    : Error([&] {
        std::string where;
        if (line) where += "line " + std::to_string(*line) + ": ";
        if (!field.empty()) where += field + ": ";
        return "parse error: " + where + message;
      }()),
      field_(std::move(field)),
      line_(line) {}

Model parse_model(std::string_view text) {
  const Json root = parse_json(text);
  require_object(root, "");
  allow_keys(root, "", {"states", "propositions", "observables", "partition"});
  if (!root.contains("states")) fail("states", "missing field");
  const auto names = string_list(root["states"], "states");
  auto space = with_context("states", [&] { return std::make_shared<const StateSpace>(names); });

  std::vector<Proposition> props;
  std::set<std::string, std::less<>> declared;
  if (root.contains("propositions")) {
    for (const auto& [name, body] : require_object(root["propositions"], "propositions").items()) {
      const std::string field = "propositions." + name;
      if (name == kOneName || name == kZeroName) fail(field, "reserved name '" + name + "' cannot be redefined");
      if (std::string_view(name).starts_with(kNegationPrefix)) fail(field, "names may not start with the negation sign");
      if (name.empty()) fail(field, "empty proposition name");
      require_object(body, field);
      allow_keys(body, field, {"yes", "no"});
      if (!body.contains("yes")) fail(field + ".yes", "missing field");
      if (!body.contains("no")) fail(field + ".no", "missing field");
      props.emplace_back(name, parse_map(body["yes"], space, field + ".yes"),
                         parse_map(body["no"], space, field + ".no"));
      declared.insert(name);
    }
  }

  auto resolve = [&](const std::string& ref, const std::string& field) {
    std::string_view base = ref;
    bool negated = false;
    while (base.starts_with(kNegationPrefix)) {
      base.remove_prefix(kNegationPrefix.size());
      negated = !negated;
    }
    for (const auto& p : props) {
      if (p.name() == base) return negated ? negate(p) : p;
    }
    if (base == kOneName) return negated ? zero_proposition(space) : one_proposition(space);
    if (base == kZeroName) return negated ? one_proposition(space) : zero_proposition(space);
    fail(field, "unknown proposition '" + ref + "'");
  };

  std::vector<Observable> observables;
  if (root.contains("observables")) {
    for (const auto& [name, body] : require_object(root["observables"], "observables").items()) {
      const std::string field = "observables." + name;
      require_object(body, field);
      allow_keys(body, field, {"spectrum", "family"});
      if (!body.contains("spectrum")) fail(field + ".spectrum", "missing field");
      if (!body.contains("family")) fail(field + ".family", "missing field");
      auto spectrum = string_list(body["spectrum"], field + ".spectrum");
      std::map<std::string, Proposition> family;
      for (const auto& [label, ref] : require_object(body["family"], field + ".family").items()) {
        const std::string at = field + ".family." + label;
        if (std::find(spectrum.begin(), spectrum.end(), label) == spectrum.end()) {
          fail(at, "label is not in the spectrum");
        }
        family.emplace(label, resolve(require_string(ref, at), at));
      }
      observables.push_back(
          with_context(field, [&] { return Observable(name, std::move(spectrum), std::move(family)); }));
    }
  }
  auto partition = parse_partition(root, "partition");
  return with_context("", [&] {
    return Model(space, std::move(props), std::move(observables), std::move(partition));
  });
}

std::string serialize_model(const Model& model) {
  const auto& space = model.states();
  auto map_json = [&](const PropMap& m) {
    Json j = Json::object();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto w = m(StateRef::proper(i));
      if (w.is_zero()) {
        j[space.name(i)] = nullptr;
      } else {
        j[space.name(i)] = space.name(w.index());
      }
    }
    return j;
  };

  Json root = Json::object();
  root["states"] = Json::array();
  for (const auto& name : space.names()) root["states"].push_back(name);
  Json props = Json::object();
  for (const auto& [name, p] : model.propositions()) {
    Json body = Json::object();
    body["yes"] = map_json(p.yes());
    body["no"] = map_json(p.no());
    props[name] = std::move(body);
  }
  root["propositions"] = std::move(props);
  Json observables = Json::object();
  for (const auto& [name, a] : model.observables()) {
    Json body = Json::object();
    body["spectrum"] = Json::array();
    Json family = Json::object();
    for (const auto& v : a.spectrum()) {
      body["spectrum"].push_back(v);
      if (a.family().contains(v)) family[v] = a.family().at(v).name();
    }
    body["family"] = std::move(family);
    observables[name] = std::move(body);
  }
  root["observables"] = std::move(observables);
  if (model.partition()) root["partition"] = partition_json(*model.partition());
  return root.dump(2) + "\n";
}

quantum::QuantumSystem<double> parse_quantum_document(std::string_view text, const QuantumOverrides& overrides) {
  const Json root = parse_json(text);
  require_object(root, "");
  allow_keys(root, "", {"dimension", "seeds", "labels", "propositions", "observables", "partition", "cap",
                        "tolerance"});
  if (!root.contains("dimension") || !root["dimension"].is_number_integer() || root["dimension"].get<long>() < 1) {
    fail("dimension", "expected a positive integer");
  }
  const long dim = root["dimension"].get<long>();

  quantum::QuantumSystem<double> sys;
  if (root.contains("cap")) {
    if (!root["cap"].is_number_integer() || root["cap"].get<long>() < 1) fail("cap", "expected a positive integer");
    sys.cap = root["cap"].get<std::size_t>();
  }
  if (root.contains("tolerance")) {
    if (!root["tolerance"].is_number() || root["tolerance"].get<double>() < 0) {
      fail("tolerance", "expected a non-negative number");
    }
    sys.tol = root["tolerance"].get<double>();
  }
  if (overrides.cap) sys.cap = *overrides.cap;
  if (overrides.tol) sys.tol = *overrides.tol;

  if (!root.contains("seeds")) fail("seeds", "missing field");
  for (const auto& [name, value] : require_object(root["seeds"], "seeds").items()) {
    sys.seeds.push_back({name, parse_state(value, dim, "seeds." + name, sys.tol)});
  }
  if (sys.seeds.empty()) fail("seeds", "at least one seed is required");
  if (root.contains("labels")) {
    for (const auto& [name, value] : require_object(root["labels"], "labels").items()) {
      sys.references.push_back({name, parse_state(value, dim, "labels." + name, sys.tol)});
    }
  }
  if (root.contains("propositions")) {
    for (const auto& [name, value] : require_object(root["propositions"], "propositions").items()) {
      const std::string field = "propositions." + name;
      if (name == kOneName || name == kZeroName || std::string_view(name).starts_with(kNegationPrefix)) {
        fail(field, "reserved proposition name");
      }
      sys.propositions.push_back({name, parse_projector(value, dim, field, sys.tol)});
    }
  }
  if (root.contains("observables")) {
    for (const auto& [name, body] : require_object(root["observables"], "observables").items()) {
      const std::string field = "observables." + name;
      require_object(body, field);
      allow_keys(body, field, {"spectrum", "family"});
      quantum::QuantumObservable obs{name, string_list(body.value("spectrum", Json::array()), field + ".spectrum"), {}};
      if (!body.contains("family")) fail(field + ".family", "missing field");
      for (const auto& [label, ref] : require_object(body["family"], field + ".family").items()) {
        obs.family.emplace(label, require_string(ref, field + ".family." + label));
      }
      sys.observables.push_back(std::move(obs));
    }
  }
  sys.partition = parse_partition(root, "partition");
  return sys;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace gqt::io
