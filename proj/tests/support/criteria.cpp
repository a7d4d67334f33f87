#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "chain_gen.hpp"
#include "clean2hs/clean_printer.hpp"
#include "clean2hs/driver.hpp"
#include "clean2hs/emitter.hpp"
#include "clean2hs/parser.hpp"
#include "clean2hs/uniqueness.hpp"
#include "corpus.hpp"
#include "evaluators.hpp"
#include "hs_reader.hpp"

namespace testsupport {

using namespace clean2hs;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const hs::FunBind* find_binding(const hs::HsModule& m, const std::string& name) {
  for (auto& d : m.decls)
    if (auto* f = std::get_if<hs::FunBind>(&d.node))
      if (f->name == name) return f;
  return nullptr;
}

bool has_diag(const std::vector<Diagnostic>& diags, std::string_view rule, Severity sev) {
  return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
    return d.rule_id == rule && d.severity == sev;
  });
}

std::string first_line_with(const std::string& text, std::string_view prefix) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) return line;
  return {};
}

/// Argument grid shared by the chain checks.
const std::vector<std::int64_t>& chain_args() {
  static const std::vector<std::int64_t> xs = {-7, -1, 0, 1, 2, 5, 13};
  return xs;
}

template <class F>
void for_each_chain(F&& f) {
  std::mt19937_64 rng(chain_seed);
  for (int i = 0; i < chain_count; ++i) f(random_chain(rng, chain_max_depth));
}

std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("clean2hs_acceptance_" + tag + "_" +
              std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out << s;
}

}  // namespace

const std::string& attribute_examples_source() {
  static const std::string src =
      "implementation module Attrs\n"
      "\n"
      "f1 :: (Int, *World) -> *World\n"
      "f1 (n, w) = w\n"
      "f2 :: *a -> *a\n"
      "f2 x = x\n"
      "f3 :: .a -> .a\n"
      "f3 x = x\n"
      "f4 :: v:a u:b -> u:b, [v<=u]\n"
      "f4 x y = y\n";
  return src;
}

CriterionResult check_golden_corpus() {
  CriterionResult r;
  Stopwatch sw;
  std::vector<GoldenCase> cases;
  try {
    cases = load_golden();
  } catch (const std::exception& e) {
    r.detail = e.what();
    return r;
  }
  std::size_t passed = 0;
  std::string failures;
  for (auto& c : cases) {
    try {
      PipelineResult p = run_pipeline(c.icl, c.options);
      if (read_module(p.text) == read_module(c.expected))
        ++passed;
      else
        failures += " " + c.name;
    } catch (const std::exception& e) {
      failures += " " + c.name + "(" + e.what() + ")";
    }
  }
  r.seconds = sw.seconds();
  r.pass = cases.size() >= golden_minimum_pairs && passed == cases.size() &&
           r.seconds < golden_time_limit_s;
  r.detail = std::to_string(passed) + "/" + std::to_string(cases.size()) + " pairs match";
  if (!failures.empty()) r.detail += "; mismatches:" + failures;
  return r;
}

CriterionResult check_attribute_examples() {
  CriterionResult r;
  clean::CleanModule m = parse_source(attribute_examples_source(), clean::ModuleKind::implementation);
  UniquenessCounts counts;
  bool idempotent = true;
  std::string f1_arg;
  for (auto& f : m.functions) {
    clean::FunSig once = propagate(*f.sig);
    idempotent = idempotent && propagate(once) == once;
    if (f.name == "f1") f1_arg = print_type(once.args.at(0));
    counts += erase(once).second.counts;
  }
  const UniquenessCounts expected{3, 3, 2, 1};
  bool propagation_ok = f1_arg == "*(Int, *World)";
  r.pass = propagation_ok && idempotent && counts == expected;
  r.detail = "f1 propagates to " + f1_arg + ", counts {unique " +
             std::to_string(counts.erased_unique) + ", vars " + std::to_string(counts.erased_vars) +
             ", dots " + std::to_string(counts.erased_dots) + ", constraints " +
             std::to_string(counts.constraints) + "} (required {3, 3, 2, 1}), idempotent " +
             (idempotent ? "yes" : "no");
  return r;
}

CriterionResult check_chain_semantics() {
  CriterionResult r;
  Stopwatch sw;
  int agree = 0, total = 0;
  std::string first_failure;
  for_each_chain([&](const Chain& c) {
    ++total;
    try {
      clean::CleanModule m = parse_source(c.source, clean::ModuleKind::implementation);
      const clean::Clause& clause = m.functions.at(0).clauses.at(0);
      PipelineResult p = run_pipeline(c.source);
      const hs::FunBind* f = find_binding(p.module, "f");
      if (!f || f->matches.size() != 1) throw EvalError("no translated binding f");
      for (auto x : chain_args())
        for (auto y : chain_args()) {
          std::vector<Value> args = {int_value(x), int_value(y)};
          if (!(eval_clean_clause(clause, args) == eval_hs_match(f->matches[0], args)))
            throw EvalError("results differ at x=" + std::to_string(x) +
                            " y=" + std::to_string(y));
        }
      ++agree;
    } catch (const std::exception& e) {
      if (first_failure.empty()) first_failure = std::string(e.what()) + " in\n" + c.source;
    }
  });
  r.seconds = sw.seconds();
  r.pass = agree == total && total == chain_count && r.seconds < chain_time_limit_s;
  r.detail = std::to_string(agree) + "/" + std::to_string(total) + " chains agree";
  if (!first_failure.empty()) r.detail += "; first failure: " + first_failure;
  return r;
}

CriterionResult check_chain_hygiene() {
  CriterionResult r;
  int violations = 0, total = 0;
  std::size_t generated = 0;
  std::string first_failure;
  for_each_chain([&](const Chain& c) {
    ++total;
    clean::CleanModule m = parse_source(c.source, clean::ModuleKind::implementation);
    const clean::Clause& clause = m.functions.at(0).clauses.at(0);
    std::set<std::string> names = names_in_clause(clause);
    FreshNameSupply ns;
    translate_let_before(clause, ns);
    generated += ns.generated().size();
    for (auto& g : ns.generated())
      if (names.count(g)) {
        ++violations;
        if (first_failure.empty()) first_failure = g + " in\n" + c.source;
      }
  });
  r.pass = violations == 0 && total == chain_count;
  r.detail = std::to_string(violations) + " collisions among " + std::to_string(generated) +
             " fresh names over " + std::to_string(total) + " chains";
  if (!first_failure.empty()) r.detail += "; first: " + first_failure;
  return r;
}

CriterionResult check_pragma_minimality() {
  CriterionResult r;
  std::size_t ok = 0, plain = 0;
  std::string failures;
  auto cases = load_golden();
  for (auto& c : cases) {
    PipelineResult p = run_pipeline(c.icl, c.options);
    std::vector<hs::Demand> sites = hs::demand_sites(p.module);
    bool minimal = true;
    for (auto e : p.module.pragmas)
      minimal = minimal && std::any_of(sites.begin(), sites.end(),
                                       [&](const hs::Demand& d) { return d.extension == e; });
    bool complete = hs::required_extensions(p.module) == p.module.pragmas;
    if (sites.empty()) {
      ++plain;
      minimal = minimal && p.module.pragmas.empty();
    }
    bool text_agrees = read_module(p.text).pragmas == p.module.pragmas;
    if (minimal && complete && text_agrees)
      ++ok;
    else
      failures += " " + c.name;
  }
  r.pass = ok == cases.size() && plain > 0;
  r.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " modules minimal, " +
             std::to_string(plain) + " plain modules with no pragmas";
  if (!failures.empty()) r.detail += "; failures:" + failures;
  return r;
}

CriterionResult check_round_trip() {
  CriterionResult r;
  std::size_t ok = 0;
  std::string failures;
  auto cases = load_golden();
  for (auto& c : cases) {
    try {
      PipelineResult p = run_pipeline(c.icl, c.options);
      if (emit(read_module(p.text)) == p.text)
        ++ok;
      else
        failures += " " + c.name;
    } catch (const std::exception& e) {
      failures += " " + c.name + "(" + e.what() + ")";
    }
  }
  r.pass = ok == cases.size() && !cases.empty();
  r.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " byte-identical";
  if (!failures.empty()) r.detail += "; failures:" + failures;
  return r;
}

CriterionResult check_linker_example() {
  CriterionResult r;
  const std::string dcl = "definition module M\n\nf :: Int -> Int\n";
  const std::string icl =
      "implementation module M\n\nf :: Int -> Int\nf x = g x\n\ng :: Int -> Int\ng x = x + 1\n";
  PipelineResult linked = run_pipeline(icl, {}, dcl);
  PipelineResult alone = run_pipeline(icl);
  std::string header = first_line_with(linked.text, "module ");
  std::string alone_header = first_line_with(alone.text, "module ");
  bool private_g = std::any_of(linked.diagnostics.begin(), linked.diagnostics.end(),
                               [](const Diagnostic& d) {
                                 return d.rule_id == rules::link_private &&
                                        d.severity == Severity::info &&
                                        d.message.find("'g'") != std::string::npos;
                               });
  r.pass = header == "module M (f) where" && private_g && alone_header == "module M where" &&
           !alone.module.exports.has_value();
  r.detail = "linked header '" + header + "', private g " + (private_g ? "reported" : "missing") +
             ", standalone header '" + alone_header + "'";
  return r;
}

CriterionResult check_generics_and_start() {
  CriterionResult r;
  auto dir = scratch_dir("generics");
  write_text(dir / "Gen.icl",
             "implementation module Gen\n\n"
             "generic gEq a :: a a -> Bool\n"
             "gEq{|Int|} x y = x == y\n"
             "derive gEq []\n\n"
             "same :: Int -> Bool\nsame x = x == x\n");
  write_text(dir / "Pure.icl", "implementation module Pure\n\nStart = 6 * 7\n");
  write_text(dir / "World.icl",
             "implementation module World\n\nStart :: *World -> *World\nStart w = w\n");

  RunConfig cfg;
  cfg.output_dir = dir / "out";
  cfg.report_path = dir / "report.json";
  cfg.color = ColorMode::never;
  cfg.inputs = {dir / "Gen.icl"};
  std::ostringstream err;
  int gen_exit = run(cfg, err);
  FileResult gen = process_file(dir / "Gen.icl", cfg);
  bool gen_ok = gen_exit == 0 && has_diag(gen.diagnostics, rules::generics_unsupported,
                                          Severity::warning);

  FileResult pure = process_file(dir / "Pure.icl", cfg);
  bool pure_ok = false;
  if (pure.haskell) {
    hs::HsModule pm = read_module(*pure.haskell);
    const hs::FunBind* main_b = find_binding(pm, "main");
    pure_ok = main_b && main_b->matches.size() == 1 && main_b->matches[0].params.empty() &&
              std::get<hs::Expr>(main_b->matches[0].rhs) ==
                  hs::app(hs::var("print"), {hs::var("start")}) &&
              find_binding(pm, "start") != nullptr &&
              std::any_of(pm.decls.begin(), pm.decls.end(), [](const hs::Decl& d) {
                auto* s = std::get_if<hs::TypeSig>(&d.node);
                return s && s->name == "main" &&
                       s->type == hs::tapp(hs::tcon("IO"), {hs::ttuple({})});
              });
  }

  FileResult world = process_file(dir / "World.icl", cfg);
  bool world_ok = false;
  if (world.haskell) {
    hs::HsModule wm = read_module(*world.haskell);
    world_ok = find_binding(wm, "main") != nullptr && find_binding(wm, "Start") == nullptr &&
               has_diag(world.diagnostics, rules::start_world, Severity::warning);
  }
  std::filesystem::remove_all(dir);

  r.pass = gen_ok && pure_ok && world_ok;
  r.detail = std::string("generic stub ") + (gen_ok ? "ok" : "failed") + " (exit " +
             std::to_string(gen_exit) + "), pure Start " + (pure_ok ? "ok" : "failed") +
             ", world Start " + (world_ok ? "ok" : "failed");
  return r;
}

}  // namespace testsupport
