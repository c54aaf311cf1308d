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

// Test-only oracles. Nothing here calls into gqt: the naive matrix code and
// the raw-map law checker are independent of the library paths they check.

#ifndef GQT_TESTS_SUPPORT_HPP
#define GQT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace gqt_test {

inline std::string fixture_path(const std::string& name) { return std::string(GQT_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---- naive complex matrices -------------------------------------------

using C = std::complex<double>;
using Mat = std::vector<std::vector<C>>;

inline Mat zeros(std::size_t d) { return Mat(d, std::vector<C>(d)); }

inline Mat eye(std::size_t d) {
  Mat m = zeros(d);
  for (std::size_t i = 0; i < d; ++i) m[i][i] = 1;
  return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
  const std::size_t d = a.size();
  Mat out = zeros(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Mat sub(const Mat& a, const Mat& b) {
  Mat out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] -= b[i][j];
  return out;
}

inline C trace(const Mat& a) {
  C t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

inline Mat outer(const std::vector<C>& v) {
  double n2 = 0;
  for (auto x : v) n2 += std::norm(x);
  Mat m = zeros(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m[i][j] = v[i] * std::conj(v[j]) / n2;
  return m;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

/// PzP normalized, or an empty matrix for the zero state.
inline Mat project(const Mat& p, const Mat& z) {
  Mat out = mul(mul(p, z), p);
  const double t = trace(out).real();
  if (t <= 1e-9) return {};
  for (auto& row : out)
    for (auto& x : row) x /= t;
  return out;
}

/// Image table of a projector over named pure states: name -> name or "".
/// Throws if an image is not among the named states.
inline std::map<std::string, std::string> image_table(const Mat& p,
                                                      const std::vector<std::pair<std::string, Mat>>& states) {
  std::map<std::string, std::string> out;
  for (const auto& [name, z] : states) {
    const Mat w = project(p, z);
    if (w.empty()) {
      out[name] = "";
      continue;
    }
    auto it = std::find_if(states.begin(), states.end(),
                           [&](const auto& s) { return max_abs_diff(s.second, w) <= 1e-9; });
    if (it == states.end()) throw std::runtime_error("orbit not closed at " + name);
    out[name] = it->first;
  }
  return out;
}

// ---- raw law oracle over JSON maps ----------------------------------------

/// Maps as index vectors, -1 for the zero state.
struct RawProp {
  std::vector<int> yes, no;
};

struct RawModel {
  std::vector<std::string> states;
  std::map<std::string, RawProp> props;
};

inline RawModel raw_model(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  RawModel m;
  m.states = j["states"].get<std::vector<std::string>>();
  auto index = [&](const nlohmann::json& v) {
    if (v.is_null()) return -1;
    return static_cast<int>(std::find(m.states.begin(), m.states.end(), v.get<std::string>()) - m.states.begin());
  };
  for (auto& [name, body] : j["propositions"].items()) {
    RawProp p;
    for (const auto& s : m.states) {
      p.yes.push_back(index(body["yes"][s]));
      p.no.push_back(index(body["no"][s]));
    }
    m.props[name] = p;
  }
  return m;
}

inline int at(const std::vector<int>& f, int z) { return z < 0 ? -1 : f[z]; }

/// States at which some proposition axiom fails for p.
inline std::set<int> raw_law_failures(const RawProp& p) {
  std::set<int> bad;
  for (int z = 0; z < static_cast<int>(p.yes.size()); ++z) {
    const int y = p.yes[z], n = p.no[z];
    if (at(p.yes, y) != y || at(p.no, n) != n || at(p.no, y) >= 0 || at(p.yes, n) >= 0 || (y < 0 && n < 0)) {
      bad.insert(z);
    }
  }
  return bad;
}

/// One edited map entry of a model document.
struct Mutant {
  std::string prop;
  std::string side;
  std::string state;
  nlohmann::ordered_json target;  // state name or null
  std::string text;
};

/// Every document obtained by changing one proposition map entry. With
/// `redirect` the entry goes to a different proper state; otherwise a
/// non-null entry is set to null.
inline std::vector<Mutant> single_entry_mutants(const std::string& text, bool redirect) {
  const auto doc = nlohmann::ordered_json::parse(text);
  const auto states = doc["states"].get<std::vector<std::string>>();
  std::vector<Mutant> out;
  for (const auto& [name, body] : doc["propositions"].items()) {
    for (const std::string side : {"yes", "no"}) {
      for (const auto& s : states) {
        const auto& current = body[side][s];
        std::vector<nlohmann::ordered_json> targets;
        if (redirect) {
          for (const auto& t : states) {
            if (current.is_null() || current.get<std::string>() != t) targets.emplace_back(t);
          }
        } else if (!current.is_null()) {
          targets.emplace_back(nullptr);
        }
        for (const auto& t : targets) {
          auto copy = doc;
          copy["propositions"][name][side][s] = t;
          out.push_back({name, side, s, t, copy.dump(2) + "\n"});
        }
      }
    }
  }
  return out;
}

// ---- random quantum samples ---------------------------------------------

/// Deterministic normal draws (Box-Muller over mt19937_64 raw output).
class Normal {
 public:
  explicit Normal(std::uint64_t seed) : engine_(seed) {}
  double operator()() {
    const double u1 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gqt_test

#endif  // GQT_TESTS_SUPPORT_HPP
