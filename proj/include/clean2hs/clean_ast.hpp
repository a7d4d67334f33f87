#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "clean2hs/box.hpp"
#include "clean2hs/source.hpp"
#include "clean2hs/types.hpp"

namespace clean2hs::clean {

enum class LiteralKind { integer, real, character, string, char_list };

/// Literal with its exact source text (quotes included).
struct Literal {
  LiteralKind kind = LiteralKind::integer;
  std::string text;
  bool operator==(const Literal&) const = default;
};

// ---------------------------------------------------------------- patterns

struct Pattern;

struct PVar {
  std::string name;
  bool operator==(const PVar&) const = default;
};
struct PWildcard {
  bool operator==(const PWildcard&) const = default;
};
struct PLiteral {
  Literal lit;
  bool operator==(const PLiteral&) const = default;
};
/// Constructor pattern. `?None` and `?Just` use those spellings as names.
struct PCtor {
  std::string name;
  std::vector<Pattern> args;
  bool operator==(const PCtor&) const = default;
};
/// `[p0, p1 : tail]`
struct PCons {
  std::vector<Pattern> heads;
  Box<Pattern> tail;
  bool operator==(const PCons&) const = default;
};
struct PList {
  std::vector<Pattern> elems;
  bool operator==(const PList&) const = default;
};
struct PTuple {
  std::vector<Pattern> elems;
  bool operator==(const PTuple&) const = default;
};
struct FieldPattern;
/// `{ f0 }`, `{ f0 = p }`, `{ R | f0 = p }`. A field without a pattern is punned.
struct PRecord {
  std::optional<std::string> type_name;
  std::vector<FieldPattern> fields;
  bool operator==(const PRecord&) const = default;
};
/// `x=:p`
struct PAs {
  std::string var;
  Box<Pattern> inner;
  bool operator==(const PAs&) const = default;
};
/// `(x :: t)` matching a Dynamic.
struct PDynamic {
  std::string var;
  AttrType type;
  bool operator==(const PDynamic&) const = default;
};

using PatternNode =
    std::variant<PVar, PWildcard, PLiteral, PCtor, PCons, PList, PTuple, PRecord, PAs, PDynamic>;

struct Pattern {
  PatternNode node;
  Loc loc;
  bool operator==(const Pattern&) const = default;
};

struct FieldPattern {
  std::string name;
  std::optional<Pattern> pattern;
  bool operator==(const FieldPattern&) const = default;
};

// ------------------------------------------------------------- expressions

struct Expr;
struct LocalDef;
struct Alt;

struct EVar {
  std::string name;
  bool operator==(const EVar&) const = default;
};
struct ECtor {
  std::string name;
  bool operator==(const ECtor&) const = default;
};
struct ELiteral {
  Literal lit;
  bool operator==(const ELiteral&) const = default;
};
struct EApply {
  Box<Expr> fn;
  std::vector<Expr> args;
  bool operator==(const EApply&) const = default;
};
/// Binary operator application after fixity resolution.
struct EInfix {
  std::string op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const EInfix&) const = default;
};
/// `\p0 p1 -> e` (also written with `.` or `=`).
struct ELambda {
  std::vector<Pattern> params;
  Box<Expr> body;
  bool operator==(const ELambda&) const = default;
};
/// `if p e0 e1`
struct EIf {
  Box<Expr> cond;
  Box<Expr> then_branch;
  Box<Expr> else_branch;
  bool operator==(const EIf&) const = default;
};
struct ECase {
  Box<Expr> scrutinee;
  std::vector<Alt> alts;
  bool operator==(const ECase&) const = default;
};
struct ELet {
  std::vector<LocalDef> defs;
  Box<Expr> body;
  bool operator==(const ELet&) const = default;
};
struct EList {
  std::vector<Expr> elems;
  bool operator==(const EList&) const = default;
};
/// `[e0, e1 : tail]`
struct ECons {
  std::vector<Expr> heads;
  Box<Expr> tail;
  bool operator==(const ECons&) const = default;
};
/// `[from..]`, `[from..to]`
struct ERange {
  Box<Expr> from;
  std::optional<Box<Expr>> to;
  bool operator==(const ERange&) const = default;
};

struct Generator;
struct Qualifier;
/// `[e \\ quals]` or, with array_result, `{e \\ quals}`.
struct EComprehension {
  Box<Expr> body;
  std::vector<Qualifier> qualifiers;
  bool array_result = false;
  bool operator==(const EComprehension&) const = default;
};

struct FieldInit;
/// `{ f = e }` or `{ R | f = e }`
struct ERecord {
  std::optional<std::string> type_name;
  std::vector<FieldInit> fields;
  bool operator==(const ERecord&) const = default;
};
/// `{ r & f = e }`
struct ERecordUpdate {
  Box<Expr> record;
  std::vector<FieldInit> fields;
  bool operator==(const ERecordUpdate&) const = default;
};
/// `r.f`
struct ESelect {
  Box<Expr> record;
  std::string field;
  bool operator==(const ESelect&) const = default;
};
/// `r!f`
struct EUniqueSelect {
  Box<Expr> record;
  std::string field;
  bool operator==(const EUniqueSelect&) const = default;
};
/// `{ v0, v1, ... }`
struct EArray {
  std::vector<Expr> elems;
  bool operator==(const EArray&) const = default;
};
/// `a.[i]`
struct EIndex {
  Box<Expr> array;
  Box<Expr> index;
  bool operator==(const EIndex&) const = default;
};
/// `a![i]`
struct EUniqueIndex {
  Box<Expr> array;
  Box<Expr> index;
  bool operator==(const EUniqueIndex&) const = default;
};
struct ArrayAssign;
/// `{ a & [i] = e, ... }`
struct EArrayUpdate {
  Box<Expr> array;
  std::vector<ArrayAssign> updates;
  bool operator==(const EArrayUpdate&) const = default;
};
/// `dynamic e`
struct EDynamic {
  Box<Expr> value;
  bool operator==(const EDynamic&) const = default;
};
/// `e =: p` in expression position: a match predicate.
struct EAsPredicate {
  Box<Expr> scrutinee;
  Pattern pattern;
  bool operator==(const EAsPredicate&) const = default;
};
/// A zero-element tuple is unit `()`.
struct ETuple {
  std::vector<Expr> elems;
  bool operator==(const ETuple&) const = default;
};

using ExprNode =
    std::variant<EVar, ECtor, ELiteral, EApply, EInfix, ELambda, EIf, ECase, ELet, EList, ECons,
                 ERange, EComprehension, ERecord, ERecordUpdate, ESelect, EUniqueSelect, EArray,
                 EIndex, EUniqueIndex, EArrayUpdate, EDynamic, EAsPredicate, ETuple>;

struct Expr {
  ExprNode node;
  Loc loc;
  bool operator==(const Expr&) const = default;
};

struct FieldInit {
  std::string name;
  Expr value;
  bool operator==(const FieldInit&) const = default;
};

struct ArrayAssign {
  Expr index;
  Expr value;
  bool operator==(const ArrayAssign&) const = default;
};

/// `p <- xs` or, with from_array, `p <-: a`.
struct Generator {
  Pattern pattern;
  Expr source;
  bool from_array = false;
  bool operator==(const Generator&) const = default;
};

/// Generators joined by `&` run in parallel; an optional `| guard` filters.
/// Consecutive qualifiers (separated by `,`) nest.
struct Qualifier {
  std::vector<Generator> parallel;
  std::optional<Expr> guard;
  bool operator==(const Qualifier&) const = default;
};

// ---------------------------------------------------------- clause bodies

/// `| guard = body`. A missing guard is the trailing `= t` / `otherwise`.
struct GuardAlt {
  std::optional<Expr> guard;
  Expr body;
  Loc loc;
  bool operator==(const GuardAlt&) const = default;
};

/// Either a plain expression or a list of guarded alternatives.
using Rhs = std::variant<Expr, std::vector<GuardAlt>>;

/// `# q = e` or `#! q = e`
struct LetBefore {
  bool strict = false;
  Pattern pattern;
  Expr value;
  Loc loc;
  bool operator==(const LetBefore&) const = default;
};

struct GuardedBody {
  std::vector<LetBefore> lets;
  Rhs rhs;
  bool operator==(const GuardedBody&) const = default;
};

struct Alt {
  Pattern pattern;
  Rhs rhs;
  Loc loc;
  bool operator==(const Alt&) const = default;
};

struct Clause {
  std::vector<Pattern> params;
  GuardedBody body;
  std::vector<LocalDef> where_defs;
  Loc loc;
  bool operator==(const Clause&) const = default;
};

enum class Assoc { left, right, none };

struct Fixity {
  Assoc assoc = Assoc::left;
  int precedence = 9;
  bool operator==(const Fixity&) const = default;
};

struct FunDef {
  std::string name;
  bool is_operator = false;
  std::optional<Fixity> fixity;
  std::optional<FunSig> sig;
  std::vector<Clause> clauses;
  Loc loc;
  bool operator==(const FunDef&) const = default;

  std::size_t arity() const {
    if (!clauses.empty()) return clauses.front().params.size();
    return sig ? sig->args.size() : 0;
  }
};

/// `(a, b) = e` as a local or let definition.
struct PatternBinding {
  Pattern pattern;
  GuardedBody body;
  Loc loc;
  bool operator==(const PatternBinding&) const = default;
};

struct LocalDef {
  std::variant<FunDef, PatternBinding> def;
  bool operator==(const LocalDef&) const = default;
};

// ------------------------------------------------------------ declarations

struct CtorDef {
  std::string name;
  std::vector<AttrType> args;
  std::vector<std::string> existentials;  // `E.t:`
  std::vector<ClassConstraint> context;   // `& C t`
  Loc loc;
  bool operator==(const CtorDef&) const = default;
};

struct FieldDef {
  std::string name;
  AttrType type;
  Loc loc;
  bool operator==(const FieldDef&) const = default;
};

struct Synonym {
  AttrType rhs;
  bool operator==(const Synonym&) const = default;
};
struct Algebraic {
  std::vector<CtorDef> ctors;
  bool operator==(const Algebraic&) const = default;
};
struct Record {
  std::vector<FieldDef> fields;
  bool operator==(const Record&) const = default;
};
/// `=: C t`
struct NewtypeLike {
  CtorDef ctor;
  bool operator==(const NewtypeLike&) const = default;
};
/// Name-only declaration from a definition module.
struct Abstract {
  bool operator==(const Abstract&) const = default;
};

using TypeBody = std::variant<Synonym, Algebraic, Record, NewtypeLike, Abstract>;

struct TypeDef {
  std::string name;
  std::vector<std::string> type_vars;
  TypeBody body;
  Loc loc;
  bool operator==(const TypeDef&) const = default;
};

struct ClassParam {
  std::string name;
  bool determined = false;  // `~m`
  bool operator==(const ClassParam&) const = default;
};

struct ClassMember {
  std::string name;
  bool is_operator = false;
  std::optional<Fixity> fixity;
  FunSig sig;
  Loc loc;
  bool operator==(const ClassMember&) const = default;
};

struct ClassDef {
  std::string name;
  std::vector<ClassParam> params;
  std::vector<ClassConstraint> superclasses;
  std::vector<ClassMember> members;
  bool single_member = false;  // `class f a :: t`
  Loc loc;
  bool operator==(const ClassDef&) const = default;
};

struct InstanceDef {
  std::string class_name;
  std::vector<AttrType> types;
  std::vector<ClassConstraint> context;
  std::vector<FunDef> members;
  Loc loc;
  bool operator==(const InstanceDef&) const = default;
};

enum class ImportForm { whole_module, selective };
enum class EntryKind { function, type, class_ };

struct ImportEntry {
  EntryKind kind = EntryKind::function;
  std::string name;
  bool qualified = false;
  bool operator==(const ImportEntry&) const = default;
};

struct ImportDecl {
  std::string module_name;
  ImportForm form = ImportForm::whole_module;
  std::vector<ImportEntry> entries;
  Loc loc;
  bool operator==(const ImportDecl&) const = default;
};

enum class StubKind { declaration, derive, instance };

/// Generic-programming declaration kept verbatim; never translated.
struct GenericStub {
  StubKind kind = StubKind::declaration;
  std::string name;
  std::string kind_var;
  std::string signature_text;
  std::vector<std::string> derives;
  Loc loc;
  bool operator==(const GenericStub&) const = default;
};

enum class ModuleKind { definition, implementation };

struct CleanModule {
  std::string name;
  ModuleKind kind = ModuleKind::implementation;
  std::vector<ImportDecl> imports;
  std::vector<TypeDef> typedefs;
  std::vector<ClassDef> classes;
  std::vector<InstanceDef> instances;
  std::vector<FunDef> functions;
  std::vector<GenericStub> generics;
  Loc loc;
  bool operator==(const CleanModule&) const = default;
};

// ------------------------------------------------------------- constructors

template <class N>
Expr make_expr(N node, Loc loc = {}) {
  return Expr{ExprNode(std::move(node)), loc};
}
template <class N>
Pattern make_pattern(N node, Loc loc = {}) {
  return Pattern{PatternNode(std::move(node)), loc};
}

}  // namespace clean2hs::clean
