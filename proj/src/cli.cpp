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

#include "gqt/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "gqt/check.hpp"
#include "gqt/core.hpp"
#include "gqt/io.hpp"
#include "gqt/quantum.hpp"
#include "json.hpp"

namespace gqt::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string join(const std::vector<std::string>& items, std::string_view sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fixed9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

Json violation_json(const Violation& v) {
  return Json{{"law", v.law}, {"subjects", v.subjects}, {"witnesses", v.witnesses}, {"detail", v.detail}};
}

void print_violations(std::ostream& out, const Report& report) {
  for (const auto& v : report) {
    out << "violation\t" << v.law << '\t' << join(v.subjects) << '\t' << join(v.witnesses) << '\t' << v.detail
        << '\n';
  }
  out << report.size() << (report.size() == 1 ? " violation" : " violations") << '\n';
}

Json report_json(const Report& report) {
  Json list = Json::array();
  for (const auto& v : report) list.push_back(violation_json(v));
  return Json{{"violations", std::move(list)}, {"count", report.size()}};
}

struct Context {
  bool json = false;
  std::ostream& out;
};

Model load_model(const std::string& path) { return io::parse_model(io::read_file(path)); }

int emit_report(Context& ctx, const Report& report) {
  if (ctx.json) {
    ctx.out << report_json(report).dump(2) << '\n';
  } else {
    print_violations(ctx.out, report);
  }
  return report.empty() ? kExitOk : kExitViolations;
}

int cmd_validate(Context& ctx, const std::string& path) { return emit_report(ctx, validate_model(load_model(path))); }

int cmd_check(Context& ctx, const std::string& path) { return emit_report(ctx, check::check_laws(load_model(path))); }

// A complementary pair that still has a common eigenstate for every value
// of both observables. Reported as a finding, not a violation.
bool complementary_without_gap(const Observable& a, const Observable& b, const PairClassification& c) {
  if (c.cls != PairClass::Complementary) return false;
  for (const auto& va : a.spectrum()) {
    if (std::none_of(c.common.begin(), c.common.end(), [&](const CommonEigenstate& e) { return e.a == va; })) {
      return false;
    }
  }
  for (const auto& vb : b.spectrum()) {
    if (std::none_of(c.common.begin(), c.common.end(), [&](const CommonEigenstate& e) { return e.b == vb; })) {
      return false;
    }
  }
  return true;
}

int cmd_report(Context& ctx, const std::string& path) {
  const Model model = load_model(path);
  if (auto r = validate_model(model); !r.empty()) return emit_report(ctx, r);

  std::vector<const Observable*> obs;
  for (const auto& [_, a] : model.observables()) obs.push_back(&a);
  auto common_text = [&](const std::vector<CommonEigenstate>& common) {
    std::vector<std::string> parts;
    for (const auto& e : common) parts.push_back(model.state_name(e.state) + ":" + e.a + ":" + e.b);
    return parts;
  };

  Json j = Json::object();
  j["states"] = std::vector<std::string>(model.states().names().begin(), model.states().names().end());
  Json pairs = Json::array();
  Json notes = Json::array();
  std::ostringstream matrix, commons, finding;
  matrix << "pair-class";
  for (const auto* a : obs) matrix << '\t' << a->name();
  matrix << '\n';
  for (const auto* a : obs) {
    matrix << a->name();
    for (const auto* b : obs) {
      const auto c = classify_pair(*a, *b);
      matrix << '\t' << to_string(c.cls);
      if (a->name() > b->name()) continue;
      Json p{{"a", a->name()}, {"b", b->name()}, {"class", to_string(c.cls)}, {"common", common_text(c.common)}};
      if (c.witness) {
        p["witness"] = Json{{"left", c.witness->left},
                            {"right", c.witness->right},
                            {"state", model.state_name(c.witness->state)}};
      }
      pairs.push_back(std::move(p));
      if (a != b) {
        const auto parts = common_text(c.common);
        commons << "common\t" << a->name() << '\t' << b->name() << '\t' << (parts.empty() ? "-" : join(parts))
                << '\n';
      }
      if (complementary_without_gap(*a, *b, c)) {
        notes.push_back(Json{{"a", a->name()}, {"b", b->name()}, {"finding", "complementary-without-gap"}});
        finding << "note\tcomplementary-without-gap\t" << a->name() << '\t' << b->name() << '\n';
      }
    }
    matrix << '\n';
  }
  j["pairs"] = std::move(pairs);

  Json eigen = Json::object();
  std::ostringstream eigen_text;
  for (const auto* a : obs) {
    Json rows = Json::array();
    for (const auto& e : eigenstates_of_observable(*a)) {
      rows.push_back(Json{{"state", model.state_name(e.state)}, {"value", e.value}});
      eigen_text << "eigen\t" << a->name() << '\t' << model.state_name(e.state) << '\t' << e.value << '\n';
    }
    eigen[a->name()] = std::move(rows);
  }
  j["eigenstates"] = std::move(eigen);
  j["notes"] = std::move(notes);

  if (ctx.json) {
    ctx.out << j.dump(2) << '\n';
  } else {
    ctx.out << "states\t" << join(j["states"].get<std::vector<std::string>>(), " ") << '\n'
            << matrix.str() << commons.str() << eigen_text.str() << finding.str();
  }
  return kExitOk;
}

int cmd_eigen(Context& ctx, const std::string& path, const std::string& name) {
  const Model model = load_model(path);
  const auto eigen = eigenstates_of_observable(model.observable(name));
  if (ctx.json) {
    Json rows = Json::array();
    for (const auto& e : eigen) rows.push_back(Json{{"state", model.state_name(e.state)}, {"value", e.value}});
    ctx.out << Json{{"observable", name}, {"eigenstates", rows}}.dump(2) << '\n';
  } else {
    for (const auto& e : eigen) ctx.out << model.state_name(e.state) << '\t' << e.value << '\n';
  }
  return kExitOk;
}

int cmd_measure(Context& ctx, const std::string& path, const std::string& state, const std::string& steps_text) {
  const Model model = load_model(path);
  std::vector<MeasurementStep> steps;
  for (const auto& item : split(steps_text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw StructuralError("step '" + item + "' is not of the form obs=value");
    steps.push_back({item.substr(0, eq), item.substr(eq + 1)});
  }
  StateRef z = model.state(state);
  Json trace = Json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    z = measure_sequence(model, z, std::span(&steps[i], 1));
    trace.push_back(Json{{"observable", steps[i].observable}, {"value", steps[i].value}, {"state", model.state_name(z)}});
    text << "step\t" << steps[i].observable << '=' << steps[i].value << '\t' << model.state_name(z) << '\n';
  }
  if (ctx.json) {
    ctx.out << Json{{"start", state}, {"steps", trace}, {"result", model.state_name(z)}}.dump(2) << '\n';
  } else {
    ctx.out << text.str() << "result\t" << model.state_name(z) << '\n';
  }
  return kExitOk;
}

int cmd_entangle(Context& ctx, const std::string& path, const std::string& global, const std::string& locals_text) {
  const Model model = load_model(path);
  const auto locals = split(locals_text);
  const auto report = check_entanglement_preconditions(model, global, locals);
  if (!report.empty()) {
    if (ctx.json) {
      Json j = report_json(report);
      j["preconditions"] = "failed";
      ctx.out << j.dump(2) << '\n';
    } else {
      ctx.out << "preconditions\tfailed\n";
      print_violations(ctx.out, report);
    }
    return kExitViolations;
  }
  const auto states = entangled_states(model, global, locals);

  // Per global eigenstate: which listed locals it is an eigenstate of, so
  // the existential reading of "not an eigenstate of the locals" can be
  // applied downstream.
  Json evidence = Json::array();
  std::ostringstream evidence_text;
  for (const auto& e : eigenstates_of_observable(model.observable(global))) {
    std::vector<std::string> fixed_by;
    for (const auto& l : locals) {
      for (const auto& le : eigenstates_of_observable(model.observable(l))) {
        if (le.state == e.state) fixed_by.push_back(l + "=" + le.value);
      }
    }
    evidence.push_back(Json{{"state", model.state_name(e.state)}, {"value", e.value}, {"local_eigen", fixed_by}});
    evidence_text << "evidence\t" << model.state_name(e.state) << '\t' << global << '=' << e.value << '\t'
                  << (fixed_by.empty() ? "-" : join(fixed_by)) << '\n';
  }
  std::vector<std::string> names;
  for (auto z : states) names.push_back(model.state_name(z));
  if (ctx.json) {
    ctx.out << Json{{"preconditions", "ok"}, {"entangled", names}, {"evidence", evidence}}.dump(2) << '\n';
  } else {
    ctx.out << "preconditions\tok\n";
    for (const auto& n : names) ctx.out << "entangled\t" << n << '\n';
    ctx.out << evidence_text.str();
  }
  return kExitOk;
}

int cmd_quantum_build(Context& ctx, const std::string& path, std::optional<std::size_t> cap,
                      std::optional<double> tol, const std::string& output) {
  const auto system = io::parse_quantum_document(io::read_file(path), {cap, tol});
  quantum::BuildResult<double> result;
  try {
    result = quantum::build_model(system);
  } catch (const quantum::OrbitCapExceeded& e) {
    if (ctx.json) {
      ctx.out << Json{{"error", "orbit-cap-exceeded"}, {"cap", e.cap()}, {"discovered", e.discovered()},
                      {"frontier", e.frontier()}}
                     .dump(2)
              << '\n';
    } else {
      ctx.out << "orbit-cap-exceeded\t" << e.what() << '\n';
    }
    return kExitViolations;
  }
  if (!result.model || !result.report.empty()) return emit_report(ctx, result.report);

  const Model& model = *result.model;
  io::write_file(output, io::serialize_model(model));
  if (ctx.json) {
    Json candidates = Json::array();
    for (const auto& c : result.candidates) {
      candidates.push_back(Json{{"p", c.p}, {"q", c.q}, {"commutator_norm", fixed9(c.commutator_norm)}});
    }
    ctx.out << Json{{"output", output},
                    {"states", std::vector<std::string>(model.states().names().begin(), model.states().names().end())},
                    {"propositions", model.propositions().size()},
                    {"observables", model.observables().size()},
                    {"tolerance", fixed9(system.tol.value())},
                    {"candidates", candidates}}
                   .dump(2)
            << '\n';
  } else {
    ctx.out << "states\t" << model.states().size() << '\t' << join({model.states().names().begin(), model.states().names().end()}, " ")
            << '\n'
            << "propositions\t" << model.propositions().size() << '\n'
            << "observables\t" << model.observables().size() << '\n'
            << "tolerance\t" << fixed9(system.tol.value()) << '\n';
    for (const auto& c : result.candidates) {
      ctx.out << "candidate\t" << c.p << '\t' << c.q << '\t' << fixed9(c.commutator_norm) << '\n';
    }
    ctx.out << "wrote\t" << output << '\n';
  }
  return kExitOk;
}

int cmd_fuzz(Context& ctx, const check::GeneratorParams& params, std::size_t count) {
  const auto summary = check::fuzz(params, count);
  if (ctx.json) {
    Json first = Json::object();
    for (const auto& [law, c] : summary.first_by_law) {
      first[law] = Json{{"seed", c.seed}, {"violation", violation_json(c.violation)},
                        {"states", c.model.states().size()}};
    }
    ctx.out << Json{{"models", summary.models_checked}, {"violations", summary.violations}, {"first", first}}.dump(2)
            << '\n';
  } else {
    ctx.out << "models\t" << summary.models_checked << '\n' << "violations\t" << summary.violations << '\n';
    for (const auto& [law, c] : summary.first_by_law) {
      ctx.out << "first\t" << law << "\tseed=" << c.seed << '\t' << join(c.violation.subjects) << '\t'
              << join(c.violation.witnesses) << "\tstates=" << c.model.states().size() << '\n';
    }
  }
  return summary.violations == 0 ? kExitOk : kExitViolations;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite models of generalized quantum theory: validation, analysis and fuzzing", "gqt"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string model_path, name, state, steps, global, locals, output;
  std::optional<std::size_t> cap;
  std::optional<double> tol;
  check::GeneratorParams params;
  params.max_spectrum = 4;
  std::size_t count = 0;

  auto* validate = app.add_subcommand("validate", "Check every model law");
  validate->add_option("model", model_path)->required();
  auto* report = app.add_subcommand("report", "Pair classes and eigenstate tables");
  report->add_option("model", model_path)->required();
  auto* eigen = app.add_subcommand("eigen", "Eigenstates of one observable");
  eigen->add_option("model", model_path)->required();
  eigen->add_option("--observable", name)->required();
  auto* measure = app.add_subcommand("measure", "Apply a sequence of measurement results");
  measure->add_option("model", model_path)->required();
  measure->add_option("--state", state)->required();
  measure->add_option("--steps", steps, "obs=value,...")->required();
  auto* entangle = app.add_subcommand("entangle", "Entanglement preconditions and entangled states");
  entangle->add_option("model", model_path)->required();
  entangle->add_option("--global", global)->required();
  entangle->add_option("--locals", locals, "a,b,...")->required();
  auto* quantum = app.add_subcommand("quantum", "Quantum backend");
  quantum->require_subcommand(1);
  auto* build = quantum->add_subcommand("build", "Compile a quantum document into a model");
  build->add_option("document", model_path)->required();
  build->add_option("--cap", cap, "Orbit size cap (default 256)")->check(CLI::PositiveNumber);
  build->add_option("--tol", tol, "Tolerance (default 1e-9)")->check(CLI::NonNegativeNumber);
  build->add_option("-o", output)->required();
  auto* fuzz = app.add_subcommand("fuzz", "Check laws over random models");
  fuzz->add_option("--states", params.n_states)->required();
  fuzz->add_option("--props", params.n_props)->required();
  fuzz->add_option("--obs", params.n_obs)->required();
  fuzz->add_option("--seed", params.seed)->required();
  fuzz->add_option("--count", count)->required();
  auto* check = app.add_subcommand("check", "Full law and theorem check");
  check->add_option("model", model_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gqt: " << e.what() << '\n';
    return kExitUsage;
  }

  std::ostringstream buffer;
  Context ctx{format == "json", buffer};
  int code = kExitUsage;
  try {
    if (validate->parsed()) code = cmd_validate(ctx, model_path);
    else if (report->parsed()) code = cmd_report(ctx, model_path);
    else if (eigen->parsed()) code = cmd_eigen(ctx, model_path, name);
    else if (measure->parsed()) code = cmd_measure(ctx, model_path, state, steps);
    else if (entangle->parsed()) code = cmd_entangle(ctx, model_path, global, locals);
    else if (build->parsed()) code = cmd_quantum_build(ctx, model_path, cap, tol, output);
    else if (fuzz->parsed()) code = cmd_fuzz(ctx, params, count);
    else if (check->parsed()) code = cmd_check(ctx, model_path);
  } catch (const Error& e) {
    err << "gqt: " << e.what() << '\n';
    return kExitUsage;
  }
  out << buffer.str();
  return code;
}

}  // namespace gqt::cli
