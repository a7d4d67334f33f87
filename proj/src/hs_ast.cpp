#include "clean2hs/hs_ast.hpp"

#include <array>
#include <cctype>

namespace clean2hs::hs {

namespace {

constexpr std::array<std::pair<Extension, std::string_view>, 9> kExtensionNames = {{
    {Extension::BangPatterns, "BangPatterns"},
    {Extension::ExistentialQuantification, "ExistentialQuantification"},
    {Extension::FunctionalDependencies, "FunctionalDependencies"},
    {Extension::GADTs, "GADTs"},
    {Extension::MultiParamTypeClasses, "MultiParamTypeClasses"},
    {Extension::NamedFieldPuns, "NamedFieldPuns"},
    {Extension::OverloadedStrings, "OverloadedStrings"},
    {Extension::ParallelListComp, "ParallelListComp"},
    {Extension::RankNTypes, "RankNTypes"},
}};

}  // namespace

std::string_view to_string(Extension e) {
  for (const auto& [ext, name] : kExtensionNames)
    if (ext == e) return name;
  return "?";
}

std::optional<Extension> extension_from_string(std::string_view name) {
  for (const auto& [ext, n] : kExtensionNames)
    if (n == name) return ext;
  return std::nullopt;
}

const std::vector<Extension>& all_extensions() {
  static const std::vector<Extension> all = [] {
    std::vector<Extension> v;
    for (const auto& [ext, name] : kExtensionNames) v.push_back(ext);
    return v;
  }();
  return all;
}

bool is_symbolic(std::string_view name) {
  return !name.empty() && std::isalpha(static_cast<unsigned char>(name[0])) == 0 &&
         name[0] != '_' && name != "()" && name != "[]";
}

// ------------------------------------------------------------ constructors

Type tcon(std::string name) { return Type{TCon{std::move(name)}}; }
Type tvar(std::string name) { return Type{TVar{std::move(name)}}; }

Type tapp(Type head, std::vector<Type> args) {
  if (args.empty()) return head;
  if (auto* a = std::get_if<TApp>(&head.node)) {
    TApp merged = std::move(*a);
    for (auto& t : args) merged.args.push_back(std::move(t));
    return Type{std::move(merged)};
  }
  return Type{TApp{std::move(head), std::move(args)}};
}

Type tfun(Type arg, Type result) { return Type{TFun{std::move(arg), std::move(result)}}; }
Type tlist(Type elem) { return Type{TList{std::move(elem)}}; }
Type ttuple(std::vector<Type> elems) {
  if (elems.size() == 1) return std::move(elems.front());
  return Type{TTuple{std::move(elems)}};
}

Type tforall(std::vector<std::string> vars, std::vector<Constraint> context, Type body) {
  if (vars.empty() && context.empty()) return body;
  return Type{TForall{std::move(vars), std::move(context), std::move(body)}};
}

Type tbang(Type inner) { return Type{TBang{std::move(inner)}}; }

Pattern pvar(std::string name) { return Pattern{PVar{std::move(name)}}; }
Pattern pwild() { return Pattern{PWild{}}; }
Pattern pcon(std::string name, std::vector<Pattern> args) {
  return Pattern{PCon{std::move(name), std::move(args)}};
}
Pattern pcons(Pattern head, Pattern tail) {
  std::vector<Pattern> args;
  args.push_back(std::move(head));
  args.push_back(std::move(tail));
  return pcon(":", std::move(args));
}
Pattern ptuple(std::vector<Pattern> elems) {
  if (elems.size() == 1) return std::move(elems.front());
  return Pattern{PTuple{std::move(elems)}};
}
Pattern pbang(Pattern inner) { return Pattern{PBang{std::move(inner)}}; }

Expr var(std::string name) { return Expr{Var{std::move(name)}}; }
Expr con(std::string name) { return Expr{Con{std::move(name)}}; }
Expr lit(LitKind kind, std::string text) { return Expr{Lit{Literal{kind, std::move(text)}}}; }

Expr app(Expr fn, std::vector<Expr> args) {
  if (args.empty()) return fn;
  if (auto* a = std::get_if<App>(&fn.node)) {
    App merged = std::move(*a);
    for (auto& e : args) merged.args.push_back(std::move(e));
    return Expr{std::move(merged)};
  }
  return Expr{App{std::move(fn), std::move(args)}};
}

Expr infix(std::string op, Expr lhs, Expr rhs) {
  return Expr{Infix{std::move(op), std::move(lhs), std::move(rhs)}};
}
Expr lambda(std::vector<Pattern> params, Expr body) {
  return Expr{Lambda{std::move(params), std::move(body)}};
}
Expr tuple(std::vector<Expr> elems) {
  if (elems.size() == 1) return std::move(elems.front());
  return Expr{TupleE{std::move(elems)}};
}
Expr list(std::vector<Expr> elems) { return Expr{ListE{std::move(elems)}}; }
Expr sig(Expr e, Type t) { return Expr{Sig{std::move(e), std::move(t)}}; }

// ---------------------------------------------------------------- demands

namespace {

class DemandWalker {
 public:
  std::vector<Demand> out;

  void demand(Extension e, std::string site) { out.push_back({e, std::move(site)}); }

  void type(const Type& t) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, TApp>) {
            type(*n.head);
            for (auto& a : n.args) type(a);
          } else if constexpr (std::is_same_v<N, TFun>) {
            type(*n.arg);
            type(*n.result);
          } else if constexpr (std::is_same_v<N, TList>) {
            type(*n.elem);
          } else if constexpr (std::is_same_v<N, TTuple>) {
            for (auto& e : n.elems) type(e);
          } else if constexpr (std::is_same_v<N, TForall>) {
            if (!n.vars.empty()) demand(Extension::RankNTypes, "forall type");
            for (auto& c : n.context) constraint(c);
            type(*n.body);
          } else if constexpr (std::is_same_v<N, TBang>) {
            type(*n.inner);
          }
        },
        t.node);
  }

  void constraint(const Constraint& c) {
    for (auto& a : c.args) type(a);
  }

  void pattern(const Pattern& p) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PLit>) {
            literal(n.lit);
          } else if constexpr (std::is_same_v<N, PCon>) {
            for (auto& a : n.args) pattern(a);
          } else if constexpr (std::is_same_v<N, PTuple> || std::is_same_v<N, PList>) {
            for (auto& e : n.elems) pattern(e);
          } else if constexpr (std::is_same_v<N, PRec>) {
            for (auto& f : n.fields) {
              if (f.pattern) pattern(*f.pattern);
              else demand(Extension::NamedFieldPuns, "punned field " + f.name);
            }
          } else if constexpr (std::is_same_v<N, PAs>) {
            pattern(*n.inner);
          } else if constexpr (std::is_same_v<N, PBang>) {
            demand(Extension::BangPatterns, "bang pattern");
            pattern(*n.inner);
          }
        },
        p.node);
  }

  void literal(const Literal& l) {
    if (l.kind == LitKind::string && l.overloaded)
      demand(Extension::OverloadedStrings, "string literal " + l.text);
  }

  void expr(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Lit>) {
            literal(n.lit);
          } else if constexpr (std::is_same_v<N, App>) {
            expr(*n.fn);
            for (auto& a : n.args) expr(a);
          } else if constexpr (std::is_same_v<N, Infix>) {
            expr(*n.lhs);
            expr(*n.rhs);
          } else if constexpr (std::is_same_v<N, Lambda>) {
            for (auto& p : n.params) pattern(p);
            expr(*n.body);
          } else if constexpr (std::is_same_v<N, If>) {
            expr(*n.cond);
            expr(*n.then_branch);
            expr(*n.else_branch);
          } else if constexpr (std::is_same_v<N, Case>) {
            expr(*n.scrutinee);
            for (auto& a : n.alts) alt(a);
          } else if constexpr (std::is_same_v<N, Let>) {
            for (auto& d : n.binds) decl(d);
            expr(*n.body);
          } else if constexpr (std::is_same_v<N, ListE> || std::is_same_v<N, TupleE>) {
            for (auto& x : n.elems) expr(x);
          } else if constexpr (std::is_same_v<N, Comp>) {
            expr(*n.body);
            if (n.branches.size() > 1) demand(Extension::ParallelListComp, "parallel comprehension");
            for (auto& b : n.branches)
              for (auto& s : b) stmt(s);
          } else if constexpr (std::is_same_v<N, Seq>) {
            expr(*n.from);
            if (n.to) expr(**n.to);
          } else if constexpr (std::is_same_v<N, RecCon>) {
            for (auto& f : n.fields) expr(f.value);
          } else if constexpr (std::is_same_v<N, RecUpd>) {
            expr(*n.record);
            for (auto& f : n.fields) expr(f.value);
          } else if constexpr (std::is_same_v<N, Sig>) {
            expr(*n.expr);
            type(n.type);
          }
        },
        e.node);
  }

  void stmt(const Stmt& s) {
    if (auto* g = std::get_if<Gen>(&s.node)) {
      pattern(g->pattern);
      expr(g->source);
    } else {
      expr(std::get<Guard>(s.node).cond);
    }
  }

  void rhs(const Rhs& r) {
    if (auto* e = std::get_if<Expr>(&r)) {
      expr(*e);
      return;
    }
    for (auto& g : std::get<std::vector<GuardedExpr>>(r)) {
      expr(g.guard);
      expr(g.body);
    }
  }

  void alt(const Alt& a) {
    pattern(a.pattern);
    rhs(a.rhs);
    for (auto& d : a.where) decl(d);
  }

  void decl(const Decl& d) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, TypeSig>) {
            type(n.type);
          } else if constexpr (std::is_same_v<N, FunBind>) {
            for (auto& m : n.matches) {
              for (auto& p : m.params) pattern(p);
              rhs(m.rhs);
              for (auto& w : m.where) decl(w);
            }
          } else if constexpr (std::is_same_v<N, PatBind>) {
            pattern(n.pattern);
            rhs(n.rhs);
            for (auto& w : n.where) decl(w);
          } else if constexpr (std::is_same_v<N, DataDecl>) {
            for (auto& c : n.ctors) {
              if (!c.forall_vars.empty() || !c.context.empty())
                demand(Extension::ExistentialQuantification, "constructor " + c.name);
              for (auto& k : c.context) constraint(k);
              for (auto& a : c.args) type(a);
              if (c.record)
                for (auto& f : *c.record) type(f.type);
            }
          } else if constexpr (std::is_same_v<N, TypeSyn>) {
            type(n.rhs);
          } else if constexpr (std::is_same_v<N, ClassDecl>) {
            if (n.vars.size() > 1) demand(Extension::MultiParamTypeClasses, "class " + n.name);
            if (!n.fundeps.empty()) demand(Extension::FunctionalDependencies, "class " + n.name);
            for (auto& c : n.context) constraint(c);
            for (auto& b : n.body) decl(b);
          } else if constexpr (std::is_same_v<N, InstDecl>) {
            if (n.types.size() > 1)
              demand(Extension::MultiParamTypeClasses, "instance " + n.cls);
            for (auto& c : n.context) constraint(c);
            for (auto& t : n.types) type(t);
            for (auto& b : n.body) decl(b);
          }
        },
        d.node);
  }
};

}  // namespace

std::vector<Demand> demand_sites(const HsModule& m) {
  DemandWalker w;
  for (auto& d : m.decls) w.decl(d);
  return std::move(w.out);
}

ExtensionSet required_extensions(const HsModule& m) {
  ExtensionSet s;
  for (auto& d : demand_sites(m)) s.insert(d.extension);
  return s;
}

}  // namespace clean2hs::hs
