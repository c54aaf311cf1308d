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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Matrix oracles come from tests/support.hpp and do
// not touch the library's quantum code.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "gqt/check.hpp"
#include "gqt/cli.hpp"
#include "gqt/io.hpp"
#include "gqt/quantum.hpp"
#include "support.hpp"

namespace {

using gqt_test::C;
using gqt_test::Mat;
using gqt_test::fixture_path;
using gqt_test::read_fixture;
using Json = nlohmann::json;

struct Cli {
  int code;
  std::string out;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = gqt::cli::run(args, out, err);
  return {code, out.str()};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "gqt_acceptance";
  std::filesystem::create_directories(dir);
  return dir;
}

/// Runs the real binary; returns its exit status and whether stdout was empty.
std::pair<int, bool> run_binary(const std::string& args) {
  const auto out = (scratch() / "stdout.txt").string();
  const std::string cmd = std::string(GQT_BINARY) + " " + args + " >" + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, std::filesystem::file_size(out) == 0};
}

// ---- naive orbit oracle --------------------------------------------------

Mat complement(const Mat& p) { return gqt_test::sub(gqt_test::eye(p.size()), p); }

std::vector<Mat> naive_orbit(const Mat& seed, const std::vector<Mat>& projectors) {
  std::vector<Mat> states = {seed};
  for (std::size_t i = 0; i < states.size() && states.size() <= 256; ++i) {
    for (const auto& p : projectors) {
      for (const auto& q : {p, complement(p)}) {
        const Mat w = gqt_test::project(q, states[i]);
        if (w.empty()) continue;
        const bool known = std::any_of(states.begin(), states.end(),
                                       [&](const Mat& s) { return gqt_test::max_abs_diff(s, w) <= 1e-9; });
        if (!known) states.push_back(w);
      }
    }
  }
  return states;
}

/// z is an eigenstate of the family when some member fixes it.
bool naive_eigen(const Mat& z, const std::vector<Mat>& family) {
  return std::any_of(family.begin(), family.end(), [&](const Mat& p) {
    const Mat w = gqt_test::project(p, z);
    return !w.empty() && gqt_test::max_abs_diff(w, z) <= 1e-9;
  });
}

std::string name_of(const Mat& z, const std::vector<std::pair<std::string, Mat>>& named) {
  for (const auto& [n, m] : named) {
    if (gqt_test::max_abs_diff(m, z) <= 1e-9) return n;
  }
  return "?";
}

// ---- criteria -------------------------------------------------------------

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

Outcome axiom_suite() {
  Outcome r;
  for (const auto* f : {"qzx.json", "bell.json", "bistable.json"}) {
    const auto v = cli({"validate", fixture_path(f)});
    r.require(v.code == 0 && v.out == "0 violations\n", std::string("validate ") + f);
    const auto c = cli({"check", fixture_path(f)});
    r.require(c.code == 0 && c.out == "0 violations\n", std::string("check ") + f);
  }

  // 50 of the 52 single-entry redirections, chosen by a fixed seed.
  const auto text = read_fixture("qzx.json");
  auto mutants = gqt_test::single_entry_mutants(text, true);
  std::shuffle(mutants.begin(), mutants.end(), std::mt19937_64(50));
  mutants.resize(50);
  std::size_t caught = 0;
  for (const auto& mu : mutants) {
    const auto model = gqt::io::parse_model(mu.text);
    const auto expected = gqt_test::raw_law_failures(gqt_test::raw_model(mu.text).props.at(mu.prop));
    const auto report = gqt::validate_model(model);
    const auto laws = gqt::check::check_laws(model);
    bool witnessed = !report.empty() && !laws.empty();
    // Every reported witness must reproduce, and the axiom witnesses for the
    // mutated proposition must be exactly the oracle's failing states.
    std::set<int> seen;
    for (const auto& v : report) witnessed = witnessed && gqt::check::reproduces(model, v);
    for (const auto& v : laws) {
      witnessed = witnessed && gqt::check::reproduces(model, v);
      const bool axiom = v.law == "PP=P" || v.law == "negPnegP=negP" || v.law == "P\xC2\xB7negP=0" ||
                         v.law == "consistency";
      if (axiom && (v.subjects.front() == mu.prop || v.subjects.front() == "\xC2\xAC" + mu.prop)) {
        for (const auto& w : v.witnesses) seen.insert(static_cast<int>(model.state(w).index()));
      }
    }
    if (witnessed && seen == expected) ++caught;
  }
  r.require(caught == 50, std::to_string(caught) + "/50 mutants caught with oracle witnesses");
  if (r.ok) r.detail = "3 fixtures clean, 50/50 mutants caught";
  return r;
}

Outcome qubit_oracle() {
  Outcome r;
  const auto out = (scratch() / "qzx.json").string();
  const auto b = cli({"quantum", "build", fixture_path("qzx.quantum.json"), "-o", out});
  r.require(b.code == 0, "quantum build failed");
  if (!r.ok) return r;
  const auto model = gqt::io::parse_model(gqt::io::read_file(out));

  const double s = 1 / std::sqrt(2.0);
  const std::vector<std::pair<std::string, Mat>> named = {{"z0", gqt_test::outer({1, 0})},
                                                          {"z1", gqt_test::outer({0, 1})},
                                                          {"zp", gqt_test::outer({s, s})},
                                                          {"zm", gqt_test::outer({s, -s})}};
  const Mat p0 = gqt_test::outer({1, 0}), pp = gqt_test::outer({1, 1});
  const auto orbit = naive_orbit(named[0].second, {p0, pp});
  r.require(orbit.size() == 4 && model.states().size() == 4,
            "orbit sizes " + std::to_string(orbit.size()) + " vs " + std::to_string(model.states().size()));

  // Maps agree with the matrix oracle state by state.
  for (const auto& [prop, p] : std::vector<std::pair<std::string, Mat>>{{"Z0", p0}, {"Xp", pp}}) {
    const auto mp = *model.find_proposition(prop);
    for (const auto& [side, q] : std::vector<std::pair<gqt::Outcome, Mat>>{{gqt::Outcome::Yes, p},
                                                                             {gqt::Outcome::No, complement(p)}}) {
      const auto table = gqt_test::image_table(q, named);
      for (const auto& [from, to] : table) {
        const auto got = gqt::apply(mp, side, model.state(from));
        r.require((got.is_zero() ? "" : model.state_name(got)) == to, prop + " disagrees at " + from);
      }
    }
  }

  const auto rep = cli({"--format", "json", "report", out});
  r.require(rep.code == 0, "report failed");
  if (!r.ok) return r;
  const auto j = Json::parse(rep.out);
  bool classified = false;
  for (const auto& pair : j["pairs"]) {
    if (pair["a"] == "X" && pair["b"] == "Z") {
      classified = pair["class"] == "StronglyComplementary" && pair["common"].empty();
    }
  }
  r.require(classified, "Z vs X not StronglyComplementary with empty common set");
  // Oracle: the projectors do not commute and no orbit state is an
  // eigenstate of both observables.
  r.require(gqt_test::max_abs_diff(gqt_test::mul(p0, pp), gqt_test::mul(pp, p0)) > 1e-9, "oracle commutes");
  for (const auto& z : orbit) {
    r.require(!(naive_eigen(z, {p0, complement(p0)}) && naive_eigen(z, {pp, complement(pp)})),
              "oracle found a common eigenstate");
  }
  if (r.ok) r.detail = "4 states, Z vs X StronglyComplementary, common = {}";
  return r;
}

Outcome bell_oracle() {
  Outcome r;
  const auto out = (scratch() / "bell.json").string();
  const auto b = cli({"quantum", "build", fixture_path("bell.quantum.json"), "-o", out});
  r.require(b.code == 0, "quantum build failed");
  if (!r.ok) return r;
  const auto model = gqt::io::parse_model(gqt::io::read_file(out));

  using V = std::vector<C>;
  const std::vector<std::pair<std::string, Mat>> named = {
      {"phiP", gqt_test::outer(V{1, 0, 0, 1})}, {"phiM", gqt_test::outer(V{1, 0, 0, -1})},
      {"psiP", gqt_test::outer(V{0, 1, 1, 0})}, {"psiM", gqt_test::outer(V{0, 1, -1, 0})},
      {"s00", gqt_test::outer(V{1, 0, 0, 0})},  {"s01", gqt_test::outer(V{0, 1, 0, 0})},
      {"s10", gqt_test::outer(V{0, 0, 1, 0})},  {"s11", gqt_test::outer(V{0, 0, 0, 1})}};
  std::vector<Mat> bell_family;
  for (std::size_t i = 0; i < 4; ++i) bell_family.push_back(named[i].second);
  Mat za0 = gqt_test::zeros(4), zb0 = gqt_test::zeros(4);
  za0[0][0] = za0[1][1] = 1;
  zb0[0][0] = zb0[2][2] = 1;
  auto projectors = bell_family;
  projectors.push_back(za0);
  projectors.push_back(zb0);

  const auto orbit = naive_orbit(named[0].second, projectors);
  std::set<std::string> oracle_states;
  for (const auto& z : orbit) oracle_states.insert(name_of(z, named));
  const auto built_names = model.states().names();
  const std::set<std::string> built(built_names.begin(), built_names.end());
  const std::set<std::string> want = {"phiP", "phiM", "s00", "s11"};
  r.require(oracle_states == want, "oracle orbit differs from the expected four states");
  r.require(built == want, "built orbit differs from the expected four states");

  const auto e = cli({"--format", "json", "entangle", out, "--global", "BELL", "--locals", "ZA,ZB"});
  r.require(e.code == 0, "entangle exit " + std::to_string(e.code));
  if (!r.ok) return r;
  const auto j = Json::parse(e.out);
  r.require(j["preconditions"] == "ok", "preconditions failed");
  const auto got = j["entangled"].get<std::vector<std::string>>();

  // Oracle: BELL eigenstates on the orbit that are eigenstates of neither local.
  std::set<std::string> oracle_entangled;
  for (const auto& z : orbit) {
    if (naive_eigen(z, bell_family) && !naive_eigen(z, {za0, complement(za0)}) &&
        !naive_eigen(z, {zb0, complement(zb0)})) {
      oracle_entangled.insert(name_of(z, named));
    }
  }
  r.require(oracle_entangled == std::set<std::string>{"phiP", "phiM"}, "oracle entangled set");
  r.require(std::set<std::string>(got.begin(), got.end()) == oracle_entangled && got.size() == 2,
            "entangled set differs from oracle");
  if (r.ok) r.detail = "4 states {phiP, phiM, s00, s11}, preconditions ok, entangled = {phiM, phiP}";
  return r;
}

Outcome theorem_fuzz() {
  Outcome r;
  const auto f = cli({"--format", "json", "fuzz", "--states", "8", "--props", "5", "--obs", "3", "--seed", "7",
                      "--count", "1000"});
  r.require(f.code == 0, "fuzz exit " + std::to_string(f.code));
  const auto j = Json::parse(f.out);
  r.require(j["models"] == 1000, "models checked");
  for (const auto* law :
       {"strongcomp-implies-comp", "compat-implies-joint-eigenstate", "1ANDP=P", "P\xC2\xB7negP=0", "order-independence"}) {
    r.require(!j["first"].contains(law), std::string("violation of ") + law);
  }
  r.require(j["violations"] == 0, "violations reported");
  if (r.ok) r.detail = "1000 models, 0 violations";
  return r;
}

Outcome quantum_sampling() {
  using namespace gqt::quantum;
  Outcome r;
  const double tol = 1e-9;
  gqt_test::Normal rng(5);
  std::size_t checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.below(3));
    MatrixXcd g(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index k = 0; k < d; ++k) g(i, k) = C(rng(), rng());
    // Random rank: pure for even trials, full-rank mixed otherwise.
    MatrixXcd zm = trial % 2 == 0 ? MatrixXcd(g.col(0) * g.col(0).adjoint()) : MatrixXcd(g * g.adjoint());
    zm /= zm.trace().real();
    const auto z = DensityState<double>::from_matrix(zm, tol);
    const auto z_scaled = DensityState<double>::from_matrix(zm * 3.7, tol);

    for (int k = 0; k < 3; ++k) {
      MatrixXcd h(d, d);
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index c = 0; c < d; ++c) h(i, c) = C(rng(), rng());
      Eigen::HouseholderQR<MatrixXcd> qr(h);
      const MatrixXcd u = qr.householderQ() * MatrixXcd::Identity(d, d);
      const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.below(static_cast<std::size_t>(d - 1)));
      MatrixXcd pm = u.leftCols(rank) * u.leftCols(rank).adjoint();
      pm = (pm + pm.adjoint().eval()) / 2.0;
      const auto prop = make_quantum_proposition(Projector<double>::from_matrix(pm, tol), tol);

      const auto yes = prop.yes(z), no = prop.no(z);
      r.require(yes || no, "consistency");
      if (yes) {
        r.require(states_equal(prop.yes(yes), yes, tol), "yes idempotence");
        r.require(!prop.no(yes), "annihilation no after yes");
      }
      if (no) {
        r.require(states_equal(prop.no(no), no, tol), "no idempotence");
        r.require(!prop.yes(no), "annihilation yes after no");
      }
      r.require(states_equal(prop.yes(z_scaled), yes, tol) && states_equal(prop.no(z_scaled), no, tol),
                "scalar invariance of the action");
      const double e = expectation(z, pm, tol);
      r.require(e >= -tol && e <= 1 + tol, "expectation out of [0, 1]");
      r.require(std::abs(expectation(z_scaled, pm, tol) - e) <= tol, "scalar invariance of expectation");
      ++checks;
    }
  }
  if (r.ok) r.detail = "100 states x 3 projectors (" + std::to_string(checks) + " cases)";
  return r;
}

Outcome serialization() {
  Outcome r;
  for (const auto* f : {"qzx.json", "bell.json", "bistable.json", "broken_qzx.json"}) {
    const auto text = read_fixture(f);
    r.require(gqt::io::serialize_model(gqt::io::parse_model(text)) == text, std::string("round trip ") + f);
  }

  const auto fx = [](const char* f) { return fixture_path(f); };
  const auto tmp = (scratch() / "built.json").string();
  struct Case {
    std::string args;
    int expected;
  };
  const std::vector<Case> matrix = {
      {"validate " + fx("qzx.json"), 0},
      {"validate " + fx("bell.json"), 0},
      {"validate " + fx("bistable.json"), 0},
      {"check " + fx("bistable.json"), 0},
      {"report " + fx("qzx.json"), 0},
      {"eigen " + fx("qzx.json") + " --observable Z", 0},
      {"entangle " + fx("bell.json") + " --global BELL --locals ZA,ZB", 0},
      {"quantum build " + fx("qzx.quantum.json") + " -o " + tmp, 0},
      {"fuzz --states 4 --props 2 --obs 1 --seed 1 --count 10", 0},
      {"validate " + fx("broken_qzx.json"), 1},
      {"check " + fx("broken_qzx.json"), 1},
      {"report " + fx("broken_qzx.json"), 1},
      {"quantum build " + fx("qzx.quantum.json") + " --cap 2 -o " + tmp, 1},
      {"validate " + fx("malformed.json"), 2},
      {"check " + fx("malformed.json"), 2},
      {"validate /nonexistent/model.json", 2},
      {"quantum build " + fx("qzx.json") + " -o " + tmp, 2},
      {"entangle " + fx("bell.json") + " --global BELL --locals ZA,BELL", 2},
      {"eigen " + fx("qzx.json") + " --observable Nope", 2},
      {"fuzz --states 0 --props 1 --obs 1 --seed 1 --count 1", 2},
      {"bogus", 2},
      {"", 2},
  };
  for (const auto& c : matrix) {
    const auto [code, empty] = run_binary(c.args);
    r.require(code == c.expected, "gqt " + c.args + ": exit " + std::to_string(code) + ", expected " +
                                      std::to_string(c.expected));
    r.require(c.expected != 2 || empty, "gqt " + c.args + ": stdout not empty on exit 2");
  }
  if (r.ok) r.detail = "4 fixtures byte-identical, " + std::to_string(matrix.size()) + " exit-code cases";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "axiom suite", 1.0, axiom_suite},
      {2, "qubit oracle", 1.0, qubit_oracle},
      {3, "bell oracle", 2.0, bell_oracle},
      {4, "theorem fuzz", 60.0, theorem_fuzz},
      {5, "quantum-law sampling", 5.0, quantum_sampling},
      {6, "serialization and exit codes", 0.0, serialization},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && c.limit_s > 0 && secs >= c.limit_s) {
      o.ok = false;
      o.detail = "runtime limit exceeded";
    }
    char timing[64];
    if (c.limit_s > 0) {
      std::snprintf(timing, sizeof timing, "%.3fs < %.0fs", secs, c.limit_s);
    } else {
      std::snprintf(timing, sizeof timing, "%.3fs", secs);
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " (" << timing << ") "
              << o.detail << '\n';
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
