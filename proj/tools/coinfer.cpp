// Copyright 2026 The coinfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// coinfer: command-line front end for the type, interpretation and
// inference modules.
//
// Exit codes: 0 positive answer, 1 definite negative, 2 usage or parse
// error, 3 budget exhausted.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "coinfer/canonical.hpp"
#include "coinfer/emptiness.hpp"
#include "coinfer/engine.hpp"
#include "coinfer/errors.hpp"
#include "coinfer/horn_compiler.hpp"
#include "coinfer/interpretation.hpp"
#include "coinfer/logic_term.hpp"
#include "coinfer/program.hpp"
#include "coinfer/subtyping.hpp"
#include "coinfer/term_syntax.hpp"

namespace {

using namespace coinfer;
using nlohmann::json;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;
constexpr int kBudget = 3;

struct Shared {
  std::string format = "text";
  std::uint64_t seed = 0;
  std::size_t max_depth = 0;  // 0: command default
  std::size_t memo_limit = 1'000'000;
  bool trace = false;

  bool json() const { return format == "json"; }
};

// Unreadable or malformed input; reported with the file name, exit 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Type and value files may hold the text syntax or its JSON form.
bool looks_like_json(const std::string& text) {
  auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

TypeId load_type(TypeStore& store, const std::string& path) {
  std::string text = slurp(path);
  try {
    if (looks_like_json(text)) return type_from_json(store, json::parse(text));
    return read_type(store, text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

ValueId load_value(ValueStore& store, const std::string& path) {
  std::string text = slurp(path);
  try {
    if (looks_like_json(text)) return value_from_json(store, json::parse(text));
    return read_value(store, text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<HornClause> load_clauses(const std::string& path) {
  std::string text = slurp(path);
  try {
    // Already-compiled clause files end in .pl; everything else is source.
    if (path.size() > 3 && path.ends_with(".pl")) return parse_clauses(text);
    return compile_program(parse_program(text));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_parse(const Shared& sh, const std::string& path, const std::string& kind) {
  if (kind == "type") {
    TypeStore store;
    TypeId t = load_type(store, path);
    if (sh.json()) {
      emit(type_to_json(store, t));
    } else {
      std::cout << print_type(store, t) << "\n";
    }
  } else if (kind == "value") {
    ValueStore store;
    ValueId v = load_value(store, path);
    if (sh.json()) {
      emit(value_to_json(store, v));
    } else {
      std::cout << print_value(store, v) << "\n";
    }
  } else if (kind == "program") {
    std::string text = slurp(path);
    Program p;
    try {
      p = parse_program(text);
    } catch (const ParseError& e) {
      throw InputError(path + ":" + e.what());
    }
    if (sh.json()) {
      json out = json::array();
      for (const auto& c : p.classes) {
        json methods = json::array();
        for (const auto& m : c.methods) methods.push_back({{"name", m.name}, {"params", m.params}});
        out.push_back({{"class", c.name},
                       {"extends", c.superclass},
                       {"fields", c.fields},
                       {"methods", methods}});
      }
      emit(out);
    } else {
      for (const auto& c : p.classes) {
        std::cout << "class " << c.name << " extends " << c.superclass << ": "
                  << c.fields.size() << " field(s), " << c.methods.size() << " method(s)\n";
      }
    }
  } else {
    auto clauses = parse_clauses(slurp(path));
    if (sh.json()) {
      emit(clauses_to_json(clauses));
    } else {
      std::cout << clauses_to_prolog(clauses);
    }
  }
  return kYes;
}

int cmd_compile(const Shared& sh, const std::string& path, std::string fmt) {
  if (sh.json()) fmt = "json";
  std::string text = slurp(path);
  std::vector<HornClause> clauses;
  try {
    clauses = compile_program(parse_program(text));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
  if (fmt == "json") {
    emit(clauses_to_json(clauses));
  } else {
    std::cout << clauses_to_prolog(clauses);
  }
  return kYes;
}

int cmd_subtype(const Shared& sh, const std::string& left_path, const std::string& right_path) {
  TypeStore store;
  TypeId l = load_type(store, left_path);
  TypeId r = load_type(store, right_path);
  SubtypeConfig cfg;
  cfg.memo_limit = sh.memo_limit;
  SubtypeSolver solver(store, cfg);
  Verdict v = solver.check(l, r);
  if (v == Verdict::kUnknown) {
    std::cerr << "subtype: budget of " << sh.memo_limit << " judgments exhausted\n";
    if (sh.json()) emit({{"result", "unknown"}});
    return kBudget;
  }
  bool yes = v == Verdict::kTrue;
  std::optional<Derivation> d;
  if (sh.trace && yes) {
    try {
      d = solver.derive(l, r);
    } catch (const BudgetExceeded& e) {
      std::cerr << "subtype: trace skipped, " << e.what() << "\n";
    }
  }
  if (sh.json()) {
    json out{{"result", yes}};
    if (d) out["derivation"] = derivation_to_json(*d, store);
    emit(out);
  } else {
    std::cout << (yes ? "subtype" : "not a subtype") << "\n";
    if (d) std::cout << derivation_to_text(*d, store);
  }
  return yes ? kYes : kNo;
}

int cmd_member(const Shared& sh, const std::string& value_path, const std::string& type_path) {
  TypeStore types;
  ValueStore values;
  ValueId v = load_value(values, value_path);
  TypeId t = load_type(types, type_path);
  bool yes = false;
  try {
    yes = member(values, types, v, t, sh.memo_limit);
  } catch (const BudgetExceeded& e) {
    std::cerr << "member: " << e.what() << "\n";
    if (sh.json()) emit({{"result", "unknown"}});
    return kBudget;
  }
  if (sh.json()) {
    emit({{"result", yes}});
  } else {
    std::cout << (yes ? "member" : "not a member") << "\n";
  }
  return yes ? kYes : kNo;
}

int cmd_empty(const Shared& sh, const std::string& path, bool want_witness) {
  TypeStore types;
  TypeId t = load_type(types, path);
  EmptinessChecker checker(types);
  bool nonempty = checker.not_empty(t);
  std::optional<ValueId> w;
  ValueStore values;
  if (nonempty && want_witness) w = checker.witness(t, values);
  if (sh.json()) {
    json out{{"result", nonempty ? "nonempty" : "empty"}};
    if (w) out["witness"] = value_to_json(values, *w);
    if (sh.trace) out["visits"] = checker.last_visits();
    emit(out);
  } else {
    std::cout << (nonempty ? "nonempty" : "empty") << "\n";
    if (w) std::cout << print_value(values, *w) << "\n";
    if (sh.trace) std::cout << "visits: " << checker.last_visits() << "\n";
  }
  return nonempty ? kYes : kNo;
}

int cmd_sample(const Shared& sh, const std::string& path, std::size_t count) {
  TypeStore types;
  ValueStore values;
  TypeId t = load_type(types, path);
  if (!EmptinessChecker(types).not_empty(t)) {
    std::cerr << "sample: the type is empty\n";
    return kNo;
  }
  SampleOptions opts;
  if (sh.max_depth > 0) opts.max_depth = sh.max_depth;
  std::vector<ValueId> out;
  try {
    out = sample_values(types, values, t, count, sh.seed, opts);
  } catch (const BudgetExceeded& e) {
    std::cerr << "sample: " << e.what() << "\n";
    return kBudget;
  }
  if (sh.json()) {
    json arr = json::array();
    for (ValueId v : out) arr.push_back(value_to_json(values, v));
    emit(arr);
  } else {
    for (ValueId v : out) std::cout << print_value(values, v) << "\n";
  }
  return kYes;
}

int cmd_solve(const Shared& sh, const std::string& path, const std::string& query_text,
              bool no_subsumption, const std::string& expect_path, std::size_t max_answers) {
  std::vector<HornClause> clauses = load_clauses(path);
  Query query = parse_query(query_text);
  TypeStore types;
  std::optional<TypeId> expected;
  if (!expect_path.empty()) expected = load_type(types, expect_path);

  SolverConfig cfg;
  cfg.subsumption_enabled = !no_subsumption;
  cfg.memo_limit = sh.memo_limit;
  cfg.max_answers = max_answers;
  if (sh.max_depth > 0) {
    cfg.max_depth = sh.max_depth;
    cfg.initial_depth = std::min(cfg.initial_depth, cfg.max_depth);
  }
  Engine engine(std::move(clauses));
  SolveResult res;
  try {
    res = engine.solve(query, cfg, types);
  } catch (const BudgetExceeded& e) {
    std::cerr << "solve: " << e.what() << "\n";
    return kBudget;
  }

  // With --expect, an answer counts only if its result is a subtype.
  std::vector<bool> accepted;
  bool any = false;
  for (const auto& a : res.answers) {
    bool ok = true;
    if (expected) {
      try {
        ok = check_answer(a, types, *expected);
      } catch (const std::invalid_argument&) {
        ok = false;
      }
    }
    accepted.push_back(ok);
    any = any || ok;
  }

  const char* status = res.status == SolveStatus::kAnswers        ? "answers"
                       : res.status == SolveStatus::kDepthExhausted ? "depth_exhausted"
                                                                    : "no_answers";
  if (sh.json()) {
    json answers = json::array();
    for (std::size_t i = 0; i < res.answers.size(); ++i) {
      json a = res.answers[i].to_json();
      if (expected) a["expected"] = static_cast<bool>(accepted[i]);
      answers.push_back(a);
    }
    json out{{"status", status}, {"depth", res.depth}, {"steps", res.steps},
             {"answers", answers}};
    if (sh.trace) {
      json obl = json::array();
      for (const auto& o : res.obligations) {
        obl.push_back({{"left", show_type(types, o.left)}, {"right", show_type(types, o.right)}});
      }
      out["obligations"] = obl;
    }
    emit(out);
  } else {
    if (res.answers.empty()) {
      std::cout << (res.status == SolveStatus::kDepthExhausted
                        ? "no answer within depth " + std::to_string(res.depth)
                        : std::string("no"))
                << "\n";
    }
    for (std::size_t i = 0; i < res.answers.size(); ++i) {
      if (i > 0) std::cout << ";\n";
      std::cout << res.answers[i].to_text();
      if (expected) std::cout << (accepted[i] ? "% matches expected type\n" : "% not a subtype of the expected type\n");
    }
    if (sh.trace) {
      std::cout << "% depth " << res.depth << ", " << res.steps << " steps\n";
      for (const auto& o : res.obligations) {
        std::cout << "% obligation " << show_type(types, o.left) << " <= "
                  << show_type(types, o.right) << "\n";
      }
    }
  }
  if (res.status == SolveStatus::kDepthExhausted && !any) return kBudget;
  return any ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coinfer: regular types with unions, and coinductive type inference"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Shared sh;
  app.add_option("--format", sh.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", sh.seed, "Random seed");
  app.add_option("--max-depth", sh.max_depth, "Search / unfolding depth bound")
      ->check(CLI::PositiveNumber);
  app.add_option("--memo-limit", sh.memo_limit, "Judgment budget")->check(CLI::PositiveNumber);
  app.add_flag("--trace", sh.trace, "Print derivations / search details");

  std::string a;
  std::string b;
  std::string kind = "type";
  auto* parse = app.add_subcommand("parse", "Parse and re-print a term, program or clause file");
  parse->add_option("file", a)->required();
  parse->add_option("--kind", kind, "Input kind")
      ->check(CLI::IsMember({"type", "value", "program", "clauses"}));

  std::string compile_fmt = "prolog";
  auto* compile = app.add_subcommand("compile", "Compile a program to Horn clauses");
  compile->add_option("file", a)->required();
  compile->add_option("--format", compile_fmt)->check(CLI::IsMember({"prolog", "json", "text"}));

  auto* subtype = app.add_subcommand("subtype", "Decide left <= right");
  subtype->add_option("left", a)->required();
  subtype->add_option("right", b)->required();

  auto* mem = app.add_subcommand("member", "Decide value in type");
  mem->add_option("value", a)->required();
  mem->add_option("type", b)->required();

  bool witness = false;
  auto* empty = app.add_subcommand("empty", "Decide emptiness of a type");
  empty->add_option("file", a)->required();
  empty->add_flag("--witness", witness, "Print a member when nonempty");

  std::size_t count = 10;
  auto* sample = app.add_subcommand("sample", "Sample members of a type");
  sample->add_option("file", a)->required();
  sample->add_option("--count", count)->check(CLI::PositiveNumber);

  std::string query;
  bool no_subsumption = false;
  std::string expect;
  std::size_t max_answers = 8;
  auto* solve = app.add_subcommand("solve", "Answer a query against a compiled program");
  solve->add_option("file", a, "Program source, or compiled clauses (.pl)")->required();
  solve->add_option("--query,-q", query, "Atom, optionally followed by `where X = t ; ...`")
      ->required();
  solve->add_flag("--no-subsumption", no_subsumption);
  solve->add_option("--expect", expect, "Type file the result must be a subtype of");
  solve->add_option("--max-answers", max_answers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }
  // `compile --format json` and the shared `--format json` agree.
  if (compile_fmt == "text") compile_fmt = "prolog";

  try {
    if (*parse) return cmd_parse(sh, a, kind);
    if (*compile) return cmd_compile(sh, a, compile_fmt);
    if (*subtype) return cmd_subtype(sh, a, b);
    if (*mem) return cmd_member(sh, a, b);
    if (*empty) return cmd_empty(sh, a, witness);
    if (*sample) return cmd_sample(sh, a, count);
    if (*solve) return cmd_solve(sh, a, query, no_subsumption, expect, max_answers);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  }
  return kUsage;
}
