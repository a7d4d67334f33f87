#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "clean2hs/box.hpp"

namespace clean2hs::hs {

/// GHC extensions the translator may demand. Declared in alphabetical order.
enum class Extension {
  BangPatterns,
  ExistentialQuantification,
  FunctionalDependencies,
  GADTs,
  MultiParamTypeClasses,
  NamedFieldPuns,
  OverloadedStrings,
  ParallelListComp,
  RankNTypes,
};

using ExtensionSet = std::set<Extension>;

std::string_view to_string(Extension e);
std::optional<Extension> extension_from_string(std::string_view name);
const std::vector<Extension>& all_extensions();

// ------------------------------------------------------------------- types

struct Type;

struct Constraint {
  std::string cls;
  std::vector<Type> args;
  bool operator==(const Constraint&) const = default;
};

struct TCon {
  std::string name;
  bool operator==(const TCon&) const = default;
};
struct TVar {
  std::string name;
  bool operator==(const TVar&) const = default;
};
struct TApp {
  Box<Type> head;
  std::vector<Type> args;
  bool operator==(const TApp&) const = default;
};
struct TFun {
  Box<Type> arg;
  Box<Type> result;
  bool operator==(const TFun&) const = default;
};
struct TList {
  Box<Type> elem;
  bool operator==(const TList&) const = default;
};
/// Zero elements is the unit type.
struct TTuple {
  std::vector<Type> elems;
  bool operator==(const TTuple&) const = default;
};
/// `forall vars. context => body`; either part may be empty.
struct TForall {
  std::vector<std::string> vars;
  std::vector<Constraint> context;
  Box<Type> body;
  bool operator==(const TForall&) const = default;
};
/// Strict field `!t`.
struct TBang {
  Box<Type> inner;
  bool operator==(const TBang&) const = default;
};

struct Type {
  std::variant<TCon, TVar, TApp, TFun, TList, TTuple, TForall, TBang> node;
  bool operator==(const Type&) const = default;
};

Type tcon(std::string name);
Type tvar(std::string name);
/// Applies head to args, merging into an existing application head.
Type tapp(Type head, std::vector<Type> args);
Type tfun(Type arg, Type result);
Type tlist(Type elem);
Type ttuple(std::vector<Type> elems);
/// Returns body unchanged when both vars and context are empty.
Type tforall(std::vector<std::string> vars, std::vector<Constraint> context, Type body);
Type tbang(Type inner);

// ---------------------------------------------------------------- literals

enum class LitKind { integer, real, character, string };

struct Literal {
  LitKind kind = LitKind::integer;
  std::string text;          // target spelling, quotes included
  bool overloaded = false;   // string literal under OverloadedStrings
  bool operator==(const Literal&) const = default;
};

// ---------------------------------------------------------------- patterns

struct Pattern;
struct FieldPat;

struct PVar {
  std::string name;
  bool operator==(const PVar&) const = default;
};
struct PWild {
  bool operator==(const PWild&) const = default;
};
struct PLit {
  Literal lit;
  bool operator==(const PLit&) const = default;
};
/// Constructor pattern; the name ":" with two arguments is the cons pattern.
struct PCon {
  std::string name;
  std::vector<Pattern> args;
  bool operator==(const PCon&) const = default;
};
struct PTuple {
  std::vector<Pattern> elems;
  bool operator==(const PTuple&) const = default;
};
struct PList {
  std::vector<Pattern> elems;
  bool operator==(const PList&) const = default;
};
struct PRec {
  std::string con;
  std::vector<FieldPat> fields;
  bool operator==(const PRec&) const = default;
};
struct PAs {
  std::string name;
  Box<Pattern> inner;
  bool operator==(const PAs&) const = default;
};
struct PBang {
  Box<Pattern> inner;
  bool operator==(const PBang&) const = default;
};

struct Pattern {
  std::variant<PVar, PWild, PLit, PCon, PTuple, PList, PRec, PAs, PBang> node;
  bool operator==(const Pattern&) const = default;
};

/// A field without a pattern is punned.
struct FieldPat {
  std::string name;
  std::optional<Pattern> pattern;
  bool operator==(const FieldPat&) const = default;
};

Pattern pvar(std::string name);
Pattern pwild();
Pattern pcon(std::string name, std::vector<Pattern> args = {});
Pattern pcons(Pattern head, Pattern tail);
Pattern ptuple(std::vector<Pattern> elems);
Pattern pbang(Pattern inner);

// ------------------------------------------------------------- expressions

struct Expr;
struct Decl;
struct Alt;
struct Stmt;
struct FieldBind;

struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct Con {
  std::string name;
  bool operator==(const Con&) const = default;
};
struct Lit {
  Literal lit;
  bool operator==(const Lit&) const = default;
};
/// Always flattened: fn is never itself an App.
struct App {
  Box<Expr> fn;
  std::vector<Expr> args;
  bool operator==(const App&) const = default;
};
struct Infix {
  std::string op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Infix&) const = default;
};
struct Lambda {
  std::vector<Pattern> params;
  Box<Expr> body;
  bool operator==(const Lambda&) const = default;
};
struct If {
  Box<Expr> cond;
  Box<Expr> then_branch;
  Box<Expr> else_branch;
  bool operator==(const If&) const = default;
};
struct Case {
  Box<Expr> scrutinee;
  std::vector<Alt> alts;
  bool operator==(const Case&) const = default;
};
struct Let {
  std::vector<Decl> binds;
  Box<Expr> body;
  bool operator==(const Let&) const = default;
};
struct ListE {
  std::vector<Expr> elems;
  bool operator==(const ListE&) const = default;
};
/// Zero elements is unit.
struct TupleE {
  std::vector<Expr> elems;
  bool operator==(const TupleE&) const = default;
};
/// `[body | branch0 | branch1 ...]`; more than one branch is a parallel
/// comprehension.
struct Comp {
  Box<Expr> body;
  std::vector<std::vector<Stmt>> branches;
  bool operator==(const Comp&) const = default;
};
/// `[from ..]` or `[from .. to]`
struct Seq {
  Box<Expr> from;
  std::optional<Box<Expr>> to;
  bool operator==(const Seq&) const = default;
};
struct RecCon {
  std::string con;
  std::vector<FieldBind> fields;
  bool operator==(const RecCon&) const = default;
};
struct RecUpd {
  Box<Expr> record;
  std::vector<FieldBind> fields;
  bool operator==(const RecUpd&) const = default;
};
/// `e :: t`
struct Sig {
  Box<Expr> expr;
  Type type;
  bool operator==(const Sig&) const = default;
};

struct Expr {
  std::variant<Var, Con, Lit, App, Infix, Lambda, If, Case, Let, ListE, TupleE, Comp, Seq, RecCon,
               RecUpd, Sig>
      node;
  bool operator==(const Expr&) const = default;
};

struct FieldBind {
  std::string name;
  Expr value;
  bool operator==(const FieldBind&) const = default;
};

struct Gen {
  Pattern pattern;
  Expr source;
  bool operator==(const Gen&) const = default;
};
struct Guard {
  Expr cond;
  bool operator==(const Guard&) const = default;
};
struct Stmt {
  std::variant<Gen, Guard> node;
  bool operator==(const Stmt&) const = default;
};

struct GuardedExpr {
  Expr guard;
  Expr body;
  bool operator==(const GuardedExpr&) const = default;
};

using Rhs = std::variant<Expr, std::vector<GuardedExpr>>;

struct Alt {
  Pattern pattern;
  Rhs rhs;
  std::vector<Decl> where;
  bool operator==(const Alt&) const = default;
};

Expr var(std::string name);
Expr con(std::string name);
Expr lit(LitKind kind, std::string text);
/// Flattening application: app(app(f, [x]), [y]) == app(f, [x, y]).
Expr app(Expr fn, std::vector<Expr> args);
Expr infix(std::string op, Expr lhs, Expr rhs);
Expr lambda(std::vector<Pattern> params, Expr body);
Expr tuple(std::vector<Expr> elems);
Expr list(std::vector<Expr> elems);
Expr sig(Expr e, Type t);

// ------------------------------------------------------------ declarations

enum class Assoc { left, right, none };

struct Match {
  std::vector<Pattern> params;
  Rhs rhs;
  std::vector<Decl> where;
  bool operator==(const Match&) const = default;
};

struct TypeSig {
  std::string name;
  Type type;
  bool operator==(const TypeSig&) const = default;
};
struct FixityDecl {
  Assoc assoc = Assoc::left;
  int precedence = 9;
  std::string op;
  bool operator==(const FixityDecl&) const = default;
};
struct FunBind {
  std::string name;
  std::vector<Match> matches;
  bool operator==(const FunBind&) const = default;
};
struct PatBind {
  Pattern pattern;
  Rhs rhs;
  std::vector<Decl> where;
  bool operator==(const PatBind&) const = default;
};

struct FieldDecl {
  std::string name;
  Type type;
  bool operator==(const FieldDecl&) const = default;
};
struct ConDecl {
  std::vector<std::string> forall_vars;
  std::vector<Constraint> context;
  std::string name;
  std::vector<Type> args;
  std::optional<std::vector<FieldDecl>> record;
  bool operator==(const ConDecl&) const = default;
};
struct DataDecl {
  bool is_newtype = false;
  std::string name;
  std::vector<std::string> vars;
  std::vector<ConDecl> ctors;
  bool operator==(const DataDecl&) const = default;
};
struct TypeSyn {
  std::string name;
  std::vector<std::string> vars;
  Type rhs;
  bool operator==(const TypeSyn&) const = default;
};
struct FunDep {
  std::vector<std::string> from;
  std::vector<std::string> to;
  bool operator==(const FunDep&) const = default;
};
struct ClassDecl {
  std::vector<Constraint> context;
  std::string name;
  std::vector<std::string> vars;
  std::vector<FunDep> fundeps;
  std::vector<Decl> body;
  bool operator==(const ClassDecl&) const = default;
};
struct InstDecl {
  std::vector<Constraint> context;
  std::string cls;
  std::vector<Type> types;
  std::vector<Decl> body;
  bool operator==(const InstDecl&) const = default;
};
/// Verbatim `{- text -}` block.
struct Comment {
  std::string text;
  bool operator==(const Comment&) const = default;
};

struct Decl {
  std::variant<TypeSig, FixityDecl, FunBind, PatBind, DataDecl, TypeSyn, ClassDecl, InstDecl,
               Comment>
      node;
  bool operator==(const Decl&) const = default;
};

// ------------------------------------------------------------------ module

struct ImportItem {
  std::string name;
  bool all = false;  // `T(..)`
  bool operator==(const ImportItem&) const = default;
};

struct Import {
  std::string module;
  bool qualified = false;
  bool hiding = false;
  std::optional<std::vector<ImportItem>> items;
  bool operator==(const Import&) const = default;
};

struct ExportItem {
  std::string name;
  bool all = false;  // `T(..)` / `C(..)`
  bool operator==(const ExportItem&) const = default;
};

struct HsModule {
  std::string name;
  std::optional<std::vector<ExportItem>> exports;
  ExtensionSet pragmas;
  std::vector<Import> imports;
  std::vector<Decl> decls;
  bool operator==(const HsModule&) const = default;
};

// ---------------------------------------------------------- demand walking

/// One AST node that requires an extension.
struct Demand {
  Extension extension;
  std::string site;  // short description of the demanding node
};

/// Every node in the module that demands an extension, in walk order.
std::vector<Demand> demand_sites(const HsModule& m);

/// Union of the demands of all nodes.
ExtensionSet required_extensions(const HsModule& m);

bool is_symbolic(std::string_view name);

}  // namespace clean2hs::hs
