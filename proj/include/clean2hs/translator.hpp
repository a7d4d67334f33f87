#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clean2hs/clean_ast.hpp"
#include "clean2hs/diagnostic.hpp"
#include "clean2hs/fresh.hpp"
#include "clean2hs/hs_ast.hpp"
#include "clean2hs/uniqueness.hpp"

namespace clean2hs {

enum class StringType { char_list, text };
enum class RealType { double_precision, single_precision };
enum class ParallelMode { zip, extension };
enum class StrictnessMode { bang, drop };

struct TranslateOptions {
  StringType string_type = StringType::char_list;
  RealType real_type = RealType::double_precision;
  ParallelMode parallel_mode = ParallelMode::zip;
  bool no_puns = false;
  StrictnessMode strictness = StrictnessMode::bang;
};

/// A construct outside the translatable subset.
class Unsupported : public Error {
 public:
  Unsupported(SourceSpan span, std::string construct, const std::string& message)
      : Error(rules::unsupported, span, message), construct_(std::move(construct)) {}
  const std::string& construct() const noexcept { return construct_; }

 private:
  std::string construct_;
};

struct TranslationResult {
  hs::HsModule module;
  std::vector<Diagnostic> diagnostics;
  UniquenessReport uniqueness;
};

struct DeclResult {
  std::vector<hs::Decl> decls;
  hs::ExtensionSet extensions;
  std::vector<Diagnostic> diagnostics;
};

struct ExprResult {
  hs::Expr expr;
  hs::ExtensionSet extensions;
  std::vector<Diagnostic> diagnostics;
};

/// Translates an implementation module. extra_typedefs (from a linked
/// definition module) take part in record resolution and class naming.
TranslationResult translate_module(const clean::CleanModule& m,
                                   const std::optional<std::vector<hs::ExportItem>>& exports,
                                   const TranslateOptions& opts = {},
                                   const std::vector<clean::TypeDef>& extra_typedefs = {},
                                   const std::vector<clean::ClassDef>& extra_classes = {});

DeclResult translate_typedef(const clean::TypeDef& d, const TranslateOptions& opts = {});

/// Fixity declaration (when present) followed by the type signature.
DeclResult translate_sig(const std::string& name, const clean::FunSig& sig,
                         const std::optional<clean::Fixity>& fixity = std::nullopt,
                         const TranslateOptions& opts = {});

DeclResult translate_class(const clean::ClassDef& c, const TranslateOptions& opts = {});

/// typedefs are consulted for record literals and patterns.
ExprResult translate_expr(const clean::Expr& e, FreshNameSupply& ns,
                          const TranslateOptions& opts = {},
                          const std::vector<clean::TypeDef>& typedefs = {});

/// Translates one clause whose body may start with a `#`/`#!` chain.
hs::Match translate_let_before(const clean::Clause& clause, FreshNameSupply& ns,
                               const TranslateOptions& opts = {});

hs::ExtensionSet extensions_of(const std::vector<hs::Decl>& decls);

/// Target spelling of a Clean value name: keywords of the target language
/// get a `_` suffix, operators are unchanged.
std::string target_value_name(const std::string& name);

/// Target name of each class; single-member classes are named after their
/// member.
std::map<std::string, std::string> target_class_names(const std::vector<clean::ClassDef>& classes,
                                                      const std::vector<clean::TypeDef>& typedefs);

/// Every identifier occurring in a clause: bound, free, and record field
/// names used as punned variables.
std::set<std::string> clause_names(const clean::Clause& c);

}  // namespace clean2hs
