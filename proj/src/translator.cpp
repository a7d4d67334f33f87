#include "clean2hs/translator.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>

namespace clean2hs {

using namespace clean;

namespace {

const std::set<std::string>& haskell_reserved() {
  static const std::set<std::string> words = {"case",   "class",   "data",    "default", "deriving",
                                              "do",     "else",    "foreign", "if",      "import",
                                              "in",     "infix",   "infixl",  "infixr",  "instance",
                                              "let",    "module",  "newtype", "of",      "then",
                                              "type",   "where",   "forall"};
  return words;
}

std::string hs_ident(const std::string& name) {
  return haskell_reserved().count(name) != 0 ? name + "_" : name;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

bool is_symbolic_name(const std::string& s) {
  return !s.empty() && std::isalpha(static_cast<unsigned char>(s[0])) == 0 && s[0] != '_';
}

// Standard-environment functions whose target spelling differs.
const std::map<std::string, std::string>& stdlib_renames() {
  static const std::map<std::string, std::string> table = {
      {"hd", "head"},       {"tl", "tail"}, {"abort", "error"}, {"isEmpty", "null"},
      {"o", "."},           {"<>", "/="},   {"fromInt", "fromIntegral"},
      {"toReal", "fromIntegral"}, {"entier", "floor"}};
  return table;
}

// Standard-environment classes, keyed by their Clean name.
const std::map<std::string, std::string>& stdlib_classes() {
  static const std::map<std::string, std::string> table = {
      {"==", "Eq"},  {"<", "Ord"},  {"+", "Num"},    {"-", "Num"},          {"*", "Num"},
      {"zero", "Num"}, {"one", "Num"}, {"abs", "Num"}, {"sign", "Num"},     {"~", "Num"},
      {"/", "Fractional"}, {"toString", "Show"}, {"TC", "Typeable"}, {"Enum", "Enum"}};
  return table;
}

// ------------------------------------------------------------ name walking

void collect(const Pattern& p, std::set<std::string>& out);
void collect(const Expr& e, std::set<std::string>& out);
void collect(const LocalDef& d, std::set<std::string>& out);
void collect(const GuardedBody& b, std::set<std::string>& out);

void collect(const Rhs& r, std::set<std::string>& out) {
  if (auto* e = std::get_if<Expr>(&r)) {
    collect(*e, out);
    return;
  }
  for (auto& g : std::get<std::vector<GuardAlt>>(r)) {
    if (g.guard) collect(*g.guard, out);
    collect(g.body, out);
  }
}

void collect(const Pattern& p, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PVar>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<N, PCtor>) {
          for (auto& a : n.args) collect(a, out);
        } else if constexpr (std::is_same_v<N, PCons>) {
          for (auto& h : n.heads) collect(h, out);
          collect(*n.tail, out);
        } else if constexpr (std::is_same_v<N, PList> || std::is_same_v<N, PTuple>) {
          for (auto& e : n.elems) collect(e, out);
        } else if constexpr (std::is_same_v<N, PRecord>) {
          for (auto& f : n.fields) {
            if (f.pattern) collect(*f.pattern, out);
            else out.insert(f.name);
          }
        } else if constexpr (std::is_same_v<N, PAs>) {
          out.insert(n.var);
          collect(*n.inner, out);
        } else if constexpr (std::is_same_v<N, PDynamic>) {
          out.insert(n.var);
        }
      },
      p.node);
}

void collect(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, EVar>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<N, EApply>) {
          collect(*n.fn, out);
          for (auto& a : n.args) collect(a, out);
        } else if constexpr (std::is_same_v<N, EInfix>) {
          out.insert(n.op);
          collect(*n.lhs, out);
          collect(*n.rhs, out);
        } else if constexpr (std::is_same_v<N, ELambda>) {
          for (auto& p : n.params) collect(p, out);
          collect(*n.body, out);
        } else if constexpr (std::is_same_v<N, EIf>) {
          collect(*n.cond, out);
          collect(*n.then_branch, out);
          collect(*n.else_branch, out);
        } else if constexpr (std::is_same_v<N, ECase>) {
          collect(*n.scrutinee, out);
          for (auto& a : n.alts) {
            collect(a.pattern, out);
            collect(a.rhs, out);
          }
        } else if constexpr (std::is_same_v<N, ELet>) {
          for (auto& d : n.defs) collect(d, out);
          collect(*n.body, out);
        } else if constexpr (std::is_same_v<N, EList> || std::is_same_v<N, ETuple> ||
                             std::is_same_v<N, EArray>) {
          for (auto& x : n.elems) collect(x, out);
        } else if constexpr (std::is_same_v<N, ECons>) {
          for (auto& h : n.heads) collect(h, out);
          collect(*n.tail, out);
        } else if constexpr (std::is_same_v<N, ERange>) {
          collect(*n.from, out);
          if (n.to) collect(**n.to, out);
        } else if constexpr (std::is_same_v<N, EComprehension>) {
          collect(*n.body, out);
          for (auto& q : n.qualifiers) {
            for (auto& g : q.parallel) {
              collect(g.pattern, out);
              collect(g.source, out);
            }
            if (q.guard) collect(*q.guard, out);
          }
        } else if constexpr (std::is_same_v<N, ERecord>) {
          for (auto& f : n.fields) collect(f.value, out);
        } else if constexpr (std::is_same_v<N, ERecordUpdate>) {
          collect(*n.record, out);
          for (auto& f : n.fields) collect(f.value, out);
        } else if constexpr (std::is_same_v<N, ESelect> || std::is_same_v<N, EUniqueSelect>) {
          collect(*n.record, out);
        } else if constexpr (std::is_same_v<N, EIndex> || std::is_same_v<N, EUniqueIndex>) {
          collect(*n.array, out);
          collect(*n.index, out);
        } else if constexpr (std::is_same_v<N, EArrayUpdate>) {
          collect(*n.array, out);
          for (auto& u : n.updates) {
            collect(u.index, out);
            collect(u.value, out);
          }
        } else if constexpr (std::is_same_v<N, EDynamic>) {
          collect(*n.value, out);
        } else if constexpr (std::is_same_v<N, EAsPredicate>) {
          collect(*n.scrutinee, out);
          collect(n.pattern, out);
        }
      },
      e.node);
}

void collect(const GuardedBody& b, std::set<std::string>& out) {
  for (auto& l : b.lets) {
    collect(l.pattern, out);
    collect(l.value, out);
  }
  collect(b.rhs, out);
}

void collect(const Clause& c, std::set<std::string>& out) {
  for (auto& p : c.params) collect(p, out);
  collect(c.body, out);
  for (auto& d : c.where_defs) collect(d, out);
}

void collect(const LocalDef& d, std::set<std::string>& out) {
  if (auto* f = std::get_if<FunDef>(&d.def)) {
    out.insert(f->name);
    for (auto& c : f->clauses) collect(c, out);
    return;
  }
  auto& b = std::get<PatternBinding>(d.def);
  collect(b.pattern, out);
  collect(b.body, out);
}

bool has_type_vars(const AttrType& t) {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, TyVar>) {
          return true;
        } else if constexpr (std::is_same_v<N, TyApply>) {
          if (has_type_vars(*n.head)) return true;
          return std::any_of(n.args.begin(), n.args.end(), has_type_vars);
        } else if constexpr (std::is_same_v<N, TyTuple>) {
          return std::any_of(n.elems.begin(), n.elems.end(), has_type_vars);
        } else if constexpr (std::is_same_v<N, TyList> || std::is_same_v<N, TyArray> ||
                             std::is_same_v<N, TyOptional>) {
          return has_type_vars(*n.elem);
        } else if constexpr (std::is_same_v<N, TyFunction>) {
          return has_type_vars(*n.arg) || has_type_vars(*n.result);
        } else if constexpr (std::is_same_v<N, TyForall>) {
          return true;
        } else {
          return false;
        }
      },
      t.shape);
}

std::string char_list_to_string(const std::string& text) {
  // `['abc']` -> `"abc"`
  std::string body = text.substr(2, text.size() - 4);
  std::string out = "\"";
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c == '\\' && i + 1 < body.size()) {
      if (body[i + 1] == '\'') {
        out += '\'';
      } else {
        out += c;
        out += body[i + 1];
      }
      ++i;
    } else if (c == '"') {
      out += "\\\"";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

// ---------------------------------------------------------------- engine

struct BodyOut {
  hs::Rhs rhs;
  std::vector<hs::Decl> where;
};

class Translator {
 public:
  explicit Translator(TranslateOptions opts) : opts_(opts) {}

  std::vector<Diagnostic> diags;
  UniquenessReport uniq;
  bool uses_array = false;
  bool uses_dynamic = false;
  bool uses_text = false;

  std::set<std::string> module_values;
  std::map<std::string, std::string> global_renames;

  void add_typedefs(const std::vector<TypeDef>& defs) {
    for (auto& d : defs) {
      type_names_.insert(d.name);
      if (auto* r = std::get_if<Record>(&d.body)) {
        if (record_fields_.count(d.name)) continue;
        auto& fields = record_fields_[d.name];
        for (auto& f : r->fields) fields.push_back(f.name);
      }
    }
  }

  void add_classes(const std::vector<ClassDef>& classes) {
    for (auto& c : classes) type_names_.insert(c.name);
    for (auto& c : classes) {
      if (!c.single_member || class_renames_.count(c.name)) continue;
      if (is_symbolic_name(c.name)) continue;
      std::string name = capitalize(c.name);
      if (type_names_.count(name) != 0 && name != c.name) {
        std::string renamed = name + "C";
        diags.push_back(make_diagnostic(
            Severity::warning, rules::class_name_collision, c.loc.span,
            "class name '" + name + "' for member '" + c.name + "' collides with an existing "
            "type or class; using '" + renamed + "'"));
        name = renamed;
      }
      type_names_.insert(name);
      class_renames_[c.name] = name;
    }
  }

  // ------------------------------------------------------------- types

  hs::Type type(const AttrType& t, bool field = false) {
    hs::Type out = std::visit(
        [&](const auto& n) -> hs::Type {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, TyBase>) {
            return hs::tcon(base_type_name(n.name));
          } else if constexpr (std::is_same_v<N, TyVar>) {
            return hs::tvar(hs_ident(n.name));
          } else if constexpr (std::is_same_v<N, TyApply>) {
            std::vector<hs::Type> args;
            for (auto& a : n.args) args.push_back(type(a));
            return hs::tapp(type(*n.head), std::move(args));
          } else if constexpr (std::is_same_v<N, TyTuple>) {
            std::vector<hs::Type> elems;
            for (auto& e : n.elems) elems.push_back(type(e));
            return hs::ttuple(std::move(elems));
          } else if constexpr (std::is_same_v<N, TyList>) {
            if (auto* b = std::get_if<TyBase>(&n.elem->shape); b && b->name == "Char")
              return hs::tcon("String");
            return hs::tlist(type(*n.elem));
          } else if constexpr (std::is_same_v<N, TyArray>) {
            uses_array = true;
            return hs::tapp(hs::tcon("Array"), {hs::tcon("Int"), type(*n.elem)});
          } else if constexpr (std::is_same_v<N, TyFunction>) {
            return hs::tfun(type(*n.arg), type(*n.result));
          } else if constexpr (std::is_same_v<N, TyOptional>) {
            return hs::tapp(hs::tcon("Maybe"), {type(*n.elem)});
          } else {
            std::vector<std::string> vars;
            for (auto& v : n.vars) vars.push_back(hs_ident(v));
            return hs::tforall(std::move(vars), {}, type(*n.body));
          }
        },
        t.shape);
    if (field && t.strict) return hs::tbang(std::move(out));
    return out;
  }

  std::string base_type_name(const std::string& name) {
    if (name == "Real")
      return opts_.real_type == RealType::double_precision ? "Double" : "Float";
    if (name == "String") {
      if (opts_.string_type == StringType::text) {
        uses_text = true;
        return "Text";
      }
      return "String";
    }
    if (name == "Dynamic") uses_dynamic = true;
    return name;
  }

  std::string class_name(const std::string& name, const Loc& loc) {
    if (auto it = class_renames_.find(name); it != class_renames_.end()) return it->second;
    if (auto it = stdlib_classes().find(name); it != stdlib_classes().end()) {
      if (it->second == "Typeable") uses_dynamic = true;
      return it->second;
    }
    if (is_symbolic_name(name))
      throw Unsupported(loc.span, "operator class",
                        "operator class '" + name + "' has no target equivalent");
    return capitalize(name);
  }

  std::vector<hs::Constraint> context(const std::vector<ClassConstraint>& cs) {
    std::vector<hs::Constraint> out;
    for (auto& c : cs) {
      hs::Constraint k;
      k.cls = class_name(c.class_name, c.loc);
      for (auto& a : c.args) k.args.push_back(type(a));
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
    }
    return out;
  }

  // Propagates, checks and erases attributes; collects the report.
  FunSig prepare(const FunSig& s, const std::string& owner) {
    FunSig p = propagate(s);
    for (auto& d : check_constraints(p)) diags.push_back(std::move(d));
    auto [plain, report] = erase(p);
    if (report.counts.total() > 0) {
      diags.push_back(make_diagnostic(
          Severity::info, rules::uniqueness_erased, s.loc.span,
          "erased " + std::to_string(report.counts.total()) +
              " uniqueness annotation(s) in the signature of '" + owner + "'"));
      uniq.merge(report);
    }
    return plain;
  }

  AttrType prepare_field(const AttrType& t, const std::string& owner, const Loc& loc) {
    auto [plain, report] = erase(t);
    if (report.counts.total() > 0) {
      diags.push_back(make_diagnostic(Severity::info, rules::uniqueness_erased, loc.span,
                                      "erased " + std::to_string(report.counts.total()) +
                                          " uniqueness annotation(s) in '" + owner + "'"));
      uniq.merge(report);
    }
    return plain;
  }

  std::string target_class(const ClassDef& c) {
    return c.single_member ? class_name(c.name, c.loc) : c.name;
  }

  hs::Type sig_type(const FunSig& plain) {
    hs::Type body = type(plain.result);
    for (auto it = plain.args.rbegin(); it != plain.args.rend(); ++it)
      body = hs::tfun(type(*it), std::move(body));
    return hs::tforall({}, context(plain.context), std::move(body));
  }

  // ------------------------------------------------------ declarations

  std::vector<hs::Decl> typedef_decl(const TypeDef& d) {
    std::vector<std::string> vars;
    for (auto& v : d.type_vars) vars.push_back(hs_ident(v));
    auto field_type = [&](const AttrType& t) { return type(prepare_field(t, d.name, d.loc), true); };
    auto ctor = [&](const CtorDef& c) {
      hs::ConDecl out;
      for (auto& v : c.existentials) out.forall_vars.push_back(hs_ident(v));
      out.context = context(c.context);
      out.name = c.name;
      for (auto& a : c.args) out.args.push_back(field_type(a));
      return out;
    };
    return std::visit(
        [&](const auto& b) -> std::vector<hs::Decl> {
          using B = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<B, Synonym>) {
            return {hs::Decl{hs::TypeSyn{d.name, vars, type(prepare_field(b.rhs, d.name, d.loc))}}};
          } else if constexpr (std::is_same_v<B, Algebraic>) {
            hs::DataDecl data{false, d.name, vars, {}};
            for (auto& c : b.ctors) data.ctors.push_back(ctor(c));
            return {hs::Decl{std::move(data)}};
          } else if constexpr (std::is_same_v<B, Record>) {
            hs::ConDecl c;
            c.name = d.name;
            c.record.emplace();
            for (auto& f : b.fields) c.record->push_back({hs_ident(f.name), field_type(f.type)});
            return {hs::Decl{hs::DataDecl{false, d.name, vars, {std::move(c)}}}};
          } else if constexpr (std::is_same_v<B, NewtypeLike>) {
            hs::ConDecl c = ctor(b.ctor);
            bool plain = c.args.size() == 1 && c.forall_vars.empty() && c.context.empty();
            if (!plain) {
              diags.push_back(make_diagnostic(
                  Severity::warning, rules::unsupported, d.loc.span,
                  "'=:' type '" + d.name + "' does not wrap exactly one field; emitted as data"));
            } else if (auto* bang = std::get_if<hs::TBang>(&c.args.front().node)) {
              hs::Type inner = *bang->inner;
              c.args.front() = std::move(inner);
            }
            return {hs::Decl{hs::DataDecl{plain, d.name, vars, {std::move(c)}}}};
          } else {
            return {};
          }
        },
        d.body);
  }

  std::vector<hs::Decl> class_decl(const ClassDef& c) {
    hs::ClassDecl out;
    out.name = target_class(c);
    for (auto& p : c.params) out.vars.push_back(hs_ident(p.name));
    out.context = context(c.superclasses);
    std::vector<std::string> free;
    for (auto& p : c.params)
      if (!p.determined) free.push_back(hs_ident(p.name));
    for (auto& p : c.params)
      if (p.determined && !free.empty()) out.fundeps.push_back({{hs_ident(p.name)}, free});
    for (auto& m : c.members) {
      std::string name = m.is_operator ? m.name : hs_ident(m.name);
      if (m.fixity)
        out.body.push_back(hs::Decl{fixity(*m.fixity, name)});
      out.body.push_back(hs::Decl{hs::TypeSig{name, sig_type(prepare(m.sig, m.name))}});
    }
    return {hs::Decl{std::move(out)}};
  }

  std::vector<hs::Decl> instance_decl(const InstanceDef& inst) {
    hs::InstDecl out;
    out.cls = class_name(inst.class_name, inst.loc);
    for (auto& t : inst.types) out.types.push_back(type(prepare_field(t, inst.class_name, inst.loc)));
    out.context = context(inst.context);
    for (auto& f : inst.members) {
      FunDef member = f;
      member.sig.reset();
      member.fixity.reset();
      for (auto& d : function(member, /*top_level=*/true, /*instance_member=*/true))
        out.body.push_back(std::move(d));
    }
    return {hs::Decl{std::move(out)}};
  }

  static hs::FixityDecl fixity(const Fixity& f, const std::string& op) {
    hs::Assoc a = f.assoc == Assoc::left    ? hs::Assoc::left
                  : f.assoc == Assoc::right ? hs::Assoc::right
                                            : hs::Assoc::none;
    return hs::FixityDecl{a, f.precedence, op};
  }

  // --------------------------------------------------------- functions

  std::vector<hs::Decl> function(const FunDef& f, bool top_level, bool instance_member = false) {
    std::string name;
    if (top_level) {
      auto it = global_renames.find(f.name);
      name = it != global_renames.end() ? it->second : (f.is_operator ? f.name : hs_ident(f.name));
    } else {
      name = lookup(f.name);
    }

    FreshNameSupply local_ns;
    FreshNameSupply* saved = ns_;
    if (top_level) {
      std::set<std::string> names;
      for (auto& c : f.clauses) collect(c, names);
      for (auto& n : module_values) names.insert(hs_ident(n));
      local_ns = FreshNameSupply(std::move(names));
      ns_ = &local_ns;
    }
    struct Restore {
      FreshNameSupply*& slot;
      FreshNameSupply* value;
      ~Restore() { slot = value; }
    } restore{ns_, saved};

    std::vector<hs::Decl> out;
    if (f.fixity && !instance_member) out.push_back(hs::Decl{fixity(*f.fixity, name)});
    std::optional<FunSig> plain;
    if (f.sig) {
      plain = prepare(*f.sig, f.name);
      out.push_back(hs::Decl{hs::TypeSig{name, sig_type(*plain)}});
    }
    if (plain && opts_.strictness == StrictnessMode::drop &&
        std::any_of(plain->args.begin(), plain->args.end(), [](auto& a) { return a.strict; }))
      diags.push_back(make_diagnostic(Severity::info, rules::strictness_dropped, f.loc.span,
                                      "strictness annotations on the arguments of '" + f.name +
                                          "' were dropped"));

    hs::FunBind bind{name, {}};
    if (has_dynamic_param(f)) {
      bind.matches.push_back(dynamic_match(f, plain ? &*plain : nullptr));
    } else {
      for (auto& c : f.clauses) bind.matches.push_back(match(c, plain ? &*plain : nullptr));
    }
    out.push_back(hs::Decl{std::move(bind)});
    return out;
  }

  hs::Match match(const Clause& c, const FunSig* sig) {
    ScopeGuard guard(*this);
    hs::Match m;
    std::set<std::string> param_vars;
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      hs::Pattern p = pattern(c.params[i]);
      collect(c.params[i], param_vars);
      bool strict = sig && i < sig->args.size() && sig->args[i].strict &&
                    opts_.strictness == StrictnessMode::bang;
      if (strict && (std::holds_alternative<hs::PVar>(p.node) ||
                     std::holds_alternative<hs::PWild>(p.node) ||
                     std::holds_alternative<hs::PAs>(p.node)))
        p = hs::pbang(std::move(p));
      m.params.push_back(std::move(p));
    }
    BodyOut b = body(c.body, c.where_defs, param_vars);
    m.rhs = std::move(b.rhs);
    m.where = std::move(b.where);
    return m;
  }

  // Clean's `#` chain becomes where-bindings. A step binder is renamed when
  // its name is already visible or used: a parameter, an earlier binder, a
  // name in the current or an earlier right-hand side, or any name in the
  // where block.
  BodyOut body(const GuardedBody& b, const std::vector<LocalDef>& where_defs,
               const std::set<std::string>& param_vars) {
    ScopeGuard guard(*this);
    std::vector<hs::Decl> where_decls = local_defs(where_defs);

    std::set<std::string> reserved = param_vars;
    for (auto& d : where_defs) collect(d, reserved);

    std::vector<hs::Decl> steps;
    for (auto& step : b.lets) {
      collect(step.value, reserved);
      hs::Expr value = expr(step.value);
      std::set<std::string> binders;
      collect(step.pattern, binders);
      std::map<std::string, std::string> names;
      for (auto& x : binders) names[x] = reserved.count(x) ? fresh(x) : hs_ident(x);
      reserved.insert(binders.begin(), binders.end());
      hs::Pattern p = pattern(step.pattern, &names);
      push_scope();
      for (auto& [x, n] : names) bind(x, n);
      if (step.strict) {
        steps.push_back(hs::Decl{hs::PatBind{hs::pbang(std::move(p)), std::move(value), {}}});
      } else if (auto* v = std::get_if<hs::PVar>(&p.node)) {
        steps.push_back(hs::Decl{hs::FunBind{v->name, {hs::Match{{}, std::move(value), {}}}}});
      } else {
        steps.push_back(hs::Decl{hs::PatBind{std::move(p), std::move(value), {}}});
      }
    }

    BodyOut out;
    out.rhs = rhs(b.rhs);
    out.where = std::move(steps);
    for (auto& d : where_decls) out.where.push_back(std::move(d));
    return out;
  }

  hs::Rhs rhs(const Rhs& r) {
    if (auto* e = std::get_if<Expr>(&r)) return expr(*e);
    std::vector<hs::GuardedExpr> out;
    for (auto& g : std::get<std::vector<GuardAlt>>(r)) {
      hs::Expr cond = g.guard ? expr(*g.guard) : hs::var("otherwise");
      out.push_back({std::move(cond), expr(g.body)});
    }
    return out;
  }

  std::vector<hs::Decl> local_defs(const std::vector<LocalDef>& defs) {
    // Bind every local name first: local definitions are mutually recursive.
    std::vector<std::optional<hs::Pattern>> patterns;
    for (auto& d : defs) {
      if (auto* f = std::get_if<FunDef>(&d.def)) {
        bind(f->name, f->is_operator ? f->name : hs_ident(f->name));
        patterns.emplace_back();
      } else {
        std::map<std::string, std::string> names;
        patterns.push_back(pattern(std::get<PatternBinding>(d.def).pattern, nullptr, &names));
        for (auto& [x, n] : names) bind(x, n);
      }
    }
    std::vector<hs::Decl> out;
    for (std::size_t i = 0; i < defs.size(); ++i) {
      if (auto* f = std::get_if<FunDef>(&defs[i].def)) {
        for (auto& d : function(*f, false)) out.push_back(std::move(d));
        continue;
      }
      auto& b = std::get<PatternBinding>(defs[i].def);
      BodyOut body_out = body(b.body, {}, {});
      hs::Pattern p = std::move(*patterns[i]);
      if (auto* v = std::get_if<hs::PVar>(&p.node)) {
        out.push_back(hs::Decl{
            hs::FunBind{v->name, {hs::Match{{}, std::move(body_out.rhs), std::move(body_out.where)}}}});
      } else {
        out.push_back(hs::Decl{hs::PatBind{std::move(p), std::move(body_out.rhs),
                                           std::move(body_out.where)}});
      }
    }
    return out;
  }

  // ------------------------------------------------------------ dynamics

  static bool has_dynamic_param(const FunDef& f) {
    for (auto& c : f.clauses)
      for (auto& p : c.params)
        if (std::holds_alternative<PDynamic>(p.node)) return true;
    return false;
  }

  // `g (e :: t) = e0; g e = e1` becomes one clause casing on fromDynamic.
  hs::Match dynamic_match(const FunDef& f, const FunSig*) {
    std::size_t arity = f.arity();
    std::optional<std::size_t> dyn;
    for (auto& c : f.clauses)
      for (std::size_t i = 0; i < c.params.size(); ++i)
        if (std::holds_alternative<PDynamic>(c.params[i].node)) {
          if (dyn && *dyn != i)
            throw Unsupported(c.loc.span, "dynamic pattern",
                              "dynamic patterns in more than one argument position of '" + f.name +
                                  "'");
          dyn = i;
        }

    std::vector<std::string> others(arity);
    for (std::size_t i = 0; i < arity; ++i) {
      if (i == *dyn) continue;
      for (auto& c : f.clauses) {
        auto* v = std::get_if<PVar>(&c.params[i].node);
        if (!v || (!others[i].empty() && others[i] != v->name))
          throw Unsupported(c.loc.span, "dynamic pattern",
                            "clauses of '" + f.name +
                                "' with dynamic patterns must bind other arguments to the same "
                                "variables");
        others[i] = v->name;
      }
    }

    ScopeGuard guard(*this);
    hs::Match m;
    std::string d = ns_->pick("d");
    std::set<std::string> param_vars;
    for (std::size_t i = 0; i < arity; ++i) {
      if (i == *dyn) {
        m.params.push_back(hs::pvar(d));
      } else {
        bind(others[i], hs_ident(others[i]));
        param_vars.insert(others[i]);
        m.params.push_back(hs::pvar(hs_ident(others[i])));
      }
    }

    // Build from the last clause backwards.
    std::optional<hs::Alt> fallback;  // pattern Nothing
    hs::Expr result = hs::app(hs::var("error"),
                              {hs::lit(hs::LitKind::string, "\"" + f.name + ": no dynamic match\"")});
    bool have_result = false;
    for (auto it = f.clauses.rbegin(); it != f.clauses.rend(); ++it) {
      const Clause& c = *it;
      const Pattern& p = c.params[*dyn];
      if (auto* dp = std::get_if<PDynamic>(&p.node)) {
        ScopeGuard inner(*this);
        std::string x = hs_ident(dp->var);
        bind(dp->var, x);
        std::set<std::string> vars = param_vars;
        vars.insert(dp->var);
        BodyOut b = body(c.body, c.where_defs, vars);
        hs::Expr scrut = hs::app(hs::var("fromDynamic"), {hs::var(d)});
        if (!has_type_vars(dp->type))
          scrut = hs::sig(std::move(scrut),
                          hs::tapp(hs::tcon("Maybe"), {type(prepare_field(dp->type, f.name, c.loc))}));
        hs::Alt just{hs::pcon("Just", {hs::pvar(x)}), std::move(b.rhs), std::move(b.where)};
        hs::Alt nothing = fallback ? std::move(*fallback)
                                   : hs::Alt{hs::pcon("Nothing"), std::move(result), {}};
        result = hs::Expr{hs::Case{std::move(scrut), {std::move(just), std::move(nothing)}}};
        have_result = true;
        fallback.reset();
      } else {
        ScopeGuard inner(*this);
        std::set<std::string> vars = param_vars;
        if (auto* v = std::get_if<PVar>(&p.node)) {
          bind(v->name, d);
          vars.insert(v->name);
        } else if (!std::holds_alternative<PWildcard>(p.node)) {
          throw Unsupported(p.loc.span, "dynamic pattern",
                            "fallback clause of '" + f.name + "' must take the dynamic as a variable");
        }
        BodyOut b = body(c.body, c.where_defs, vars);
        fallback = hs::Alt{hs::pcon("Nothing"), std::move(b.rhs), std::move(b.where)};
        have_result = false;
      }
    }
    if (!have_result) {
      // The first clause is a plain fallback: it matches everything.
      m.rhs = std::move(fallback->rhs);
      m.where = std::move(fallback->where);
      return m;
    }
    m.rhs = std::move(result);
    return m;
  }

  // ------------------------------------------------------------ patterns

  // names: forced target names for binders (let-before renaming).
  // bound: receives the binders with their target names; when null they are
  // bound in the current scope.
  hs::Pattern pattern(const Pattern& p, const std::map<std::string, std::string>* names = nullptr,
                      std::map<std::string, std::string>* bound = nullptr) {
    auto binder = [&](const std::string& x) {
      std::string n = hs_ident(x);
      if (names)
        if (auto it = names->find(x); it != names->end()) n = it->second;
      if (bound) (*bound)[x] = n;
      else bind(x, n);
      return n;
    };
    return std::visit(
        [&](const auto& n) -> hs::Pattern {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, PVar>) {
            return hs::pvar(binder(n.name));
          } else if constexpr (std::is_same_v<N, PWildcard>) {
            return hs::pwild();
          } else if constexpr (std::is_same_v<N, PLiteral>) {
            return hs::Pattern{hs::PLit{literal(n.lit)}};
          } else if constexpr (std::is_same_v<N, PCtor>) {
            std::vector<hs::Pattern> args;
            for (auto& a : n.args) args.push_back(pattern(a, names, bound));
            return hs::pcon(ctor_name(n.name), std::move(args));
          } else if constexpr (std::is_same_v<N, PCons>) {
            hs::Pattern tail = pattern(*n.tail, names, bound);
            std::vector<hs::Pattern> heads;
            for (auto& h : n.heads) heads.push_back(pattern(h, names, bound));
            for (auto it = heads.rbegin(); it != heads.rend(); ++it)
              tail = hs::pcons(std::move(*it), std::move(tail));
            return tail;
          } else if constexpr (std::is_same_v<N, PList>) {
            hs::PList out;
            for (auto& e : n.elems) out.elems.push_back(pattern(e, names, bound));
            return hs::Pattern{std::move(out)};
          } else if constexpr (std::is_same_v<N, PTuple>) {
            if (n.elems.empty()) return hs::Pattern{hs::PTuple{}};
            std::vector<hs::Pattern> elems;
            for (auto& e : n.elems) elems.push_back(pattern(e, names, bound));
            return hs::ptuple(std::move(elems));
          } else if constexpr (std::is_same_v<N, PRecord>) {
            std::vector<std::string> fields;
            for (auto& f : n.fields) fields.push_back(f.name);
            hs::PRec out;
            out.con = resolve_record(fields, n.type_name, p.loc);
            for (auto& f : n.fields) {
              hs::FieldPat fp;
              fp.name = hs_ident(f.name);
              if (f.pattern) {
                fp.pattern = pattern(*f.pattern, names, bound);
              } else if (opts_.no_puns) {
                std::string v = fresh(f.name);
                if (bound) (*bound)[f.name] = v;
                else bind(f.name, v);
                fp.pattern = hs::pvar(v);
              } else {
                binder(f.name);
              }
              out.fields.push_back(std::move(fp));
            }
            return hs::Pattern{std::move(out)};
          } else if constexpr (std::is_same_v<N, PAs>) {
            std::string v = binder(n.var);
            return hs::Pattern{hs::PAs{v, pattern(*n.inner, names, bound)}};
          } else {
            throw Unsupported(p.loc.span, "dynamic pattern",
                              "dynamic type patterns are only supported as function arguments");
          }
        },
        p.node);
  }

  std::string resolve_record(const std::vector<std::string>& fields,
                             const std::optional<std::string>& type_name, const Loc& loc) {
    if (type_name) return *type_name;
    std::vector<std::string> matches;
    for (auto& [type, known] : record_fields_) {
      bool all = std::all_of(fields.begin(), fields.end(), [&](const std::string& f) {
        return std::find(known.begin(), known.end(), f) != known.end();
      });
      if (all) matches.push_back(type);
    }
    std::string list;
    for (auto& f : fields) list += (list.empty() ? "" : ", ") + f;
    if (matches.empty())
      throw Error(rules::record_unknown, loc.span, "no record type in scope has field(s) " + list);
    if (matches.size() > 1) {
      std::string types;
      for (auto& t : matches) types += (types.empty() ? "" : ", ") + t;
      throw Error(rules::record_ambiguous, loc.span,
                  "field(s) " + list + " belong to several record types: " + types);
    }
    return matches.front();
  }

  static std::string ctor_name(const std::string& name) {
    if (name == "?Just") return "Just";
    if (name == "?None") return "Nothing";
    return name;
  }

  hs::Literal literal(const clean::Literal& l) {
    hs::Literal out;
    switch (l.kind) {
      case LiteralKind::integer:
        out.kind = hs::LitKind::integer;
        out.text = l.text;
        // Clean reads a leading zero as octal.
        if (std::string digits = l.text[0] == '-' ? l.text.substr(1) : l.text;
            digits.size() > 1 && digits[0] == '0' &&
            std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '7'; }))
          out.text = (l.text[0] == '-' ? "-0o" : "0o") + digits.substr(1);
        break;
      case LiteralKind::real:
        out.kind = hs::LitKind::real;
        out.text = l.text;
        break;
      case LiteralKind::character:
        out.kind = hs::LitKind::character;
        out.text = l.text;
        break;
      case LiteralKind::string:
        out.kind = hs::LitKind::string;
        out.text = l.text;
        break;
      case LiteralKind::char_list:
        out.kind = hs::LitKind::string;
        out.text = char_list_to_string(l.text);
        break;
    }
    if (l.kind == LiteralKind::string && opts_.string_type == StringType::text)
      out.overloaded = true;
    return out;
  }

  // --------------------------------------------------------- expressions

  hs::Expr expr(const Expr& e) {
    return std::visit([&](const auto& n) -> hs::Expr { return expr_node(n, e.loc); }, e.node);
  }

  hs::Expr expr_node(const EVar& n, const Loc&) { return hs::var(lookup(n.name)); }
  hs::Expr expr_node(const ECtor& n, const Loc&) { return hs::con(ctor_name(n.name)); }
  hs::Expr expr_node(const ELiteral& n, const Loc&) { return hs::Expr{hs::Lit{literal(n.lit)}}; }

  hs::Expr expr_node(const EApply& n, const Loc&) {
    if (auto* v = std::get_if<EVar>(&n.fn->node);
        v && v->name == "toInteger" && !is_bound(v->name) && n.args.size() == 1) {
      if (auto* l = std::get_if<ELiteral>(&n.args.front().node);
          l && l->lit.kind == LiteralKind::integer)
        return hs::sig(hs::Expr{hs::Lit{literal(l->lit)}}, hs::tcon("Integer"));
    }
    std::vector<hs::Expr> args;
    for (auto& a : n.args) args.push_back(expr(a));
    return hs::app(expr(*n.fn), std::move(args));
  }

  hs::Expr expr_node(const EInfix& n, const Loc&) {
    std::string op = lookup(n.op);
    if (n.op == "+++" && !is_bound(n.op) && !module_values.count(n.op))
      op = opts_.string_type == StringType::text ? "<>" : "++";
    return hs::infix(op, expr(*n.lhs), expr(*n.rhs));
  }

  hs::Expr expr_node(const ELambda& n, const Loc&) {
    ScopeGuard guard(*this);
    std::vector<hs::Pattern> params;
    for (auto& p : n.params) params.push_back(pattern(p));
    return hs::lambda(std::move(params), expr(*n.body));
  }

  hs::Expr expr_node(const EIf& n, const Loc&) {
    return hs::Expr{hs::If{expr(*n.cond), expr(*n.then_branch), expr(*n.else_branch)}};
  }

  hs::Expr expr_node(const ECase& n, const Loc&) {
    hs::Case out{expr(*n.scrutinee), {}};
    for (auto& a : n.alts) {
      ScopeGuard guard(*this);
      hs::Pattern p = pattern(a.pattern);
      out.alts.push_back(hs::Alt{std::move(p), rhs(a.rhs), {}});
    }
    return hs::Expr{std::move(out)};
  }

  hs::Expr expr_node(const ELet& n, const Loc&) {
    ScopeGuard guard(*this);
    std::vector<hs::Decl> binds = local_defs(n.defs);
    return hs::Expr{hs::Let{std::move(binds), expr(*n.body)}};
  }

  hs::Expr expr_node(const EList& n, const Loc&) {
    std::vector<hs::Expr> elems;
    for (auto& e : n.elems) elems.push_back(expr(e));
    return hs::list(std::move(elems));
  }

  hs::Expr expr_node(const ECons& n, const Loc&) {
    std::vector<hs::Expr> heads;
    for (auto& h : n.heads) heads.push_back(expr(h));
    hs::Expr tail = expr(*n.tail);
    for (auto it = heads.rbegin(); it != heads.rend(); ++it)
      tail = hs::infix(":", std::move(*it), std::move(tail));
    return tail;
  }

  hs::Expr expr_node(const ERange& n, const Loc&) {
    hs::Seq s{expr(*n.from), std::nullopt};
    if (n.to) s.to = Box<hs::Expr>(expr(**n.to));
    return hs::Expr{std::move(s)};
  }

  // Generator sources of one parallel group are translated before any of
  // their patterns bind.
  void parallel_group(const Qualifier& q, std::vector<hs::Stmt>& stmts) {
    if (q.parallel.size() == 1) {
      const Generator& g = q.parallel.front();
      hs::Expr src = source(g);
      stmts.push_back(hs::Stmt{hs::Gen{pattern(g.pattern), std::move(src)}});
    } else {
      std::vector<hs::Expr> srcs;
      for (auto& g : q.parallel) srcs.push_back(source(g));
      std::vector<hs::Pattern> pats;
      for (auto& g : q.parallel) pats.push_back(pattern(g.pattern));
      stmts.push_back(hs::Stmt{zip_generator(std::move(pats), std::move(srcs))});
    }
    if (q.guard) stmts.push_back(hs::Stmt{hs::Guard{expr(*q.guard)}});
  }

  hs::Expr source(const Generator& g) {
    hs::Expr s = expr(g.source);
    if (!g.from_array) return s;
    uses_array = true;
    return hs::app(hs::var("elems"), {std::move(s)});
  }

  // zip for two sources, zip3 for three, right-nested zips beyond that.
  static hs::Gen zip_generator(std::vector<hs::Pattern> pats, std::vector<hs::Expr> srcs) {
    if (pats.size() == 2) {
      return hs::Gen{hs::ptuple(std::move(pats)),
                     hs::app(hs::var("zip"), std::move(srcs))};
    }
    if (pats.size() == 3) {
      return hs::Gen{hs::ptuple(std::move(pats)),
                     hs::app(hs::var("zip3"), std::move(srcs))};
    }
    hs::Pattern p = std::move(pats.back());
    hs::Expr s = std::move(srcs.back());
    for (std::size_t i = pats.size() - 1; i-- > 0;) {
      p = hs::ptuple({std::move(pats[i]), std::move(p)});
      s = hs::app(hs::var("zip"), {std::move(srcs[i]), std::move(s)});
    }
    return hs::Gen{std::move(p), std::move(s)};
  }

  hs::Expr expr_node(const EComprehension& n, const Loc& loc) {
    if (n.array_result && n.qualifiers.size() == 1 && n.qualifiers.front().parallel.size() == 1 &&
        !n.qualifiers.front().guard && n.qualifiers.front().parallel.front().from_array) {
      // {e \\ p <-: a}  ->  array (0, length a - 1) [(i, e) | (i, p) <- zip [0 ..] (elems a)]
      uses_array = true;
      const Generator& g = n.qualifiers.front().parallel.front();
      hs::Expr a = expr(g.source);
      ScopeGuard guard(*this);
      std::string i = fresh("i");
      hs::Pattern p = pattern(g.pattern);
      hs::Expr body = expr(*n.body);
      hs::Expr zipped = hs::app(
          hs::var("zip"),
          {hs::Expr{hs::Seq{hs::lit(hs::LitKind::integer, "0"), std::nullopt}},
           hs::app(hs::var("elems"), {a})});
      hs::Comp comp{hs::tuple({hs::var(i), std::move(body)}),
                    {{hs::Stmt{hs::Gen{hs::ptuple({hs::pvar(i), std::move(p)}), std::move(zipped)}}}}};
      hs::Expr upper = hs::infix("-", hs::app(hs::var("length"), {std::move(a)}),
                                 hs::lit(hs::LitKind::integer, "1"));
      return hs::app(hs::var("array"),
                     {hs::tuple({hs::lit(hs::LitKind::integer, "0"), std::move(upper)}),
                      hs::Expr{std::move(comp)}});
    }

    bool parallel_ext = opts_.parallel_mode == ParallelMode::extension &&
                        n.qualifiers.size() == 1 && n.qualifiers.front().parallel.size() > 1 &&
                        !n.qualifiers.front().guard;
    bool has_parallel = std::any_of(n.qualifiers.begin(), n.qualifiers.end(),
                                    [](const Qualifier& q) { return q.parallel.size() > 1; });
    if (opts_.parallel_mode == ParallelMode::extension && has_parallel && !parallel_ext)
      diags.push_back(make_diagnostic(Severity::info, rules::parallel_fallback, loc.span,
                                      "parallel generators combined with other qualifiers are "
                                      "translated with zip"));

    ScopeGuard guard(*this);
    std::vector<std::vector<hs::Stmt>> branches;
    if (parallel_ext) {
      const Qualifier& q = n.qualifiers.front();
      std::vector<hs::Expr> srcs;
      for (auto& g : q.parallel) srcs.push_back(source(g));
      for (std::size_t i = 0; i < q.parallel.size(); ++i)
        branches.push_back({hs::Stmt{hs::Gen{pattern(q.parallel[i].pattern), std::move(srcs[i])}}});
    } else {
      std::vector<hs::Stmt> stmts;
      for (auto& q : n.qualifiers) parallel_group(q, stmts);
      branches.push_back(std::move(stmts));
    }
    hs::Comp comp{expr(*n.body), std::move(branches)};
    hs::Expr list_expr{std::move(comp)};
    if (!n.array_result) return list_expr;

    uses_array = true;
    std::string xs = fresh("xs");
    hs::Expr upper = hs::infix("-", hs::app(hs::var("length"), {hs::var(xs)}),
                               hs::lit(hs::LitKind::integer, "1"));
    hs::Expr built = hs::app(hs::var("listArray"),
                             {hs::tuple({hs::lit(hs::LitKind::integer, "0"), std::move(upper)}),
                              hs::var(xs)});
    std::vector<hs::Decl> binds;
    binds.push_back(hs::Decl{hs::FunBind{xs, {hs::Match{{}, std::move(list_expr), {}}}}});
    return hs::Expr{hs::Let{std::move(binds), std::move(built)}};
  }

  std::vector<hs::FieldBind> field_binds(const std::vector<FieldInit>& fields) {
    std::vector<hs::FieldBind> out;
    for (auto& f : fields) out.push_back({hs_ident(f.name), expr(f.value)});
    return out;
  }

  hs::Expr expr_node(const ERecord& n, const Loc& loc) {
    std::vector<std::string> names;
    for (auto& f : n.fields) names.push_back(f.name);
    std::string con = resolve_record(names, n.type_name, loc);
    return hs::Expr{hs::RecCon{con, field_binds(n.fields)}};
  }

  hs::Expr expr_node(const ERecordUpdate& n, const Loc&) {
    return hs::Expr{hs::RecUpd{expr(*n.record), field_binds(n.fields)}};
  }

  hs::Expr expr_node(const ESelect& n, const Loc&) {
    return hs::app(hs::var(hs_ident(n.field)), {expr(*n.record)});
  }

  // r!f  ->  (\v -> (f v, v)) r
  hs::Expr expr_node(const EUniqueSelect& n, const Loc&) {
    hs::Expr r = expr(*n.record);
    std::string v = fresh("v");
    hs::Expr pair = hs::tuple({hs::app(hs::var(hs_ident(n.field)), {hs::var(v)}), hs::var(v)});
    return hs::app(hs::lambda({hs::pvar(v)}, std::move(pair)), {std::move(r)});
  }

  hs::Expr expr_node(const EArray& n, const Loc&) {
    uses_array = true;
    std::vector<hs::Expr> pairs;
    for (std::size_t i = 0; i < n.elems.size(); ++i)
      pairs.push_back(hs::tuple({hs::lit(hs::LitKind::integer, std::to_string(i)), expr(n.elems[i])}));
    std::string upper = n.elems.empty() ? "-1" : std::to_string(n.elems.size() - 1);
    return hs::app(hs::var("array"),
                   {hs::tuple({hs::lit(hs::LitKind::integer, "0"),
                               hs::lit(hs::LitKind::integer, upper)}),
                    hs::list(std::move(pairs))});
  }

  hs::Expr expr_node(const EIndex& n, const Loc&) {
    uses_array = true;
    return hs::infix("!", expr(*n.array), expr(*n.index));
  }

  // a![i]  ->  (\v -> (v ! i, v)) a
  hs::Expr expr_node(const EUniqueIndex& n, const Loc&) {
    uses_array = true;
    hs::Expr a = expr(*n.array);
    hs::Expr i = expr(*n.index);
    std::string v = fresh("v");
    hs::Expr pair = hs::tuple({hs::infix("!", hs::var(v), std::move(i)), hs::var(v)});
    return hs::app(hs::lambda({hs::pvar(v)}, std::move(pair)), {std::move(a)});
  }

  hs::Expr expr_node(const EArrayUpdate& n, const Loc&) {
    uses_array = true;
    std::vector<hs::Expr> pairs;
    for (auto& u : n.updates) pairs.push_back(hs::tuple({expr(u.index), expr(u.value)}));
    return hs::infix("//", expr(*n.array), hs::list(std::move(pairs)));
  }

  hs::Expr expr_node(const EDynamic& n, const Loc&) {
    uses_dynamic = true;
    return hs::app(hs::var("toDyn"), {expr(*n.value)});
  }

  // e =: p  ->  case e of { p -> True; _ -> False }
  hs::Expr expr_node(const EAsPredicate& n, const Loc&) {
    hs::Expr scrut = expr(*n.scrutinee);
    ScopeGuard guard(*this);
    hs::Pattern p = pattern(n.pattern);
    hs::Case c{std::move(scrut), {}};
    c.alts.push_back(hs::Alt{std::move(p), hs::con("True"), {}});
    c.alts.push_back(hs::Alt{hs::pwild(), hs::con("False"), {}});
    return hs::Expr{std::move(c)};
  }

  hs::Expr expr_node(const ETuple& n, const Loc&) {
    if (n.elems.empty()) return hs::Expr{hs::TupleE{}};
    std::vector<hs::Expr> elems;
    for (auto& e : n.elems) elems.push_back(expr(e));
    return hs::tuple(std::move(elems));
  }

  // --------------------------------------------------------------- scope

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }
  void bind(const std::string& name, const std::string& target) {
    if (scopes_.empty()) push_scope();
    scopes_.back()[name] = target;
  }
  bool is_bound(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (it->count(name)) return true;
    return false;
  }

  std::string lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return f->second;
    if (auto it = global_renames.find(name); it != global_renames.end()) return it->second;
    if (module_values.count(name)) return is_symbolic_name(name) ? name : hs_ident(name);
    if (auto it = stdlib_renames().find(name); it != stdlib_renames().end()) return it->second;
    return is_symbolic_name(name) ? name : hs_ident(name);
  }

  std::string fresh(const std::string& base) {
    if (!ns_) {
      own_ns_ = std::make_unique<FreshNameSupply>();
      ns_ = own_ns_.get();
    }
    return ns_->fresh(base);
  }

  void set_supply(FreshNameSupply* ns) { ns_ = ns; }

  struct ScopeGuard {
    Translator& t;
    std::size_t depth;
    explicit ScopeGuard(Translator& tr) : t(tr), depth(tr.scopes_.size()) { t.push_scope(); }
    ~ScopeGuard() { t.scopes_.resize(depth); }
  };

 private:
  TranslateOptions opts_;
  std::map<std::string, std::vector<std::string>> record_fields_;
  std::set<std::string> type_names_;
  std::map<std::string, std::string> class_renames_;
  std::vector<std::map<std::string, std::string>> scopes_;
  FreshNameSupply* ns_ = nullptr;
  std::unique_ptr<FreshNameSupply> own_ns_;
};

bool is_std_module(const std::string& name) { return name.rfind("Std", 0) == 0; }

std::vector<hs::Import> translate_import(const ImportDecl& d, std::vector<Diagnostic>& diags) {
  if (is_std_module(d.module_name)) {
    diags.push_back(make_diagnostic(Severity::info, rules::stdlib_import_dropped, d.loc.span,
                                    "standard library module '" + d.module_name +
                                        "' has no direct counterpart; import dropped"));
    return {};
  }
  if (d.form == ImportForm::whole_module) return {hs::Import{d.module_name, false, false, {}}};
  std::vector<hs::ImportItem> plain, qualified;
  for (auto& e : d.entries) (e.qualified ? qualified : plain).push_back({e.name, false});
  std::vector<hs::Import> out;
  if (!qualified.empty()) out.push_back(hs::Import{d.module_name, true, false, qualified});
  if (!plain.empty()) out.push_back(hs::Import{d.module_name, false, false, plain});
  return out;
}

bool is_world(const AttrType& t) {
  auto* b = std::get_if<TyBase>(&t.shape);
  return b && b->name == "World";
}

}  // namespace

// ------------------------------------------------------------------ public

TranslationResult translate_module(const CleanModule& m,
                                   const std::optional<std::vector<hs::ExportItem>>& exports,
                                   const TranslateOptions& opts,
                                   const std::vector<TypeDef>& extra_typedefs,
                                   const std::vector<ClassDef>& extra_classes) {
  Translator t(opts);
  t.add_typedefs(m.typedefs);
  t.add_typedefs(extra_typedefs);
  std::vector<ClassDef> classes = m.classes;
  classes.insert(classes.end(), extra_classes.begin(), extra_classes.end());
  t.add_classes(classes);
  for (auto& f : m.functions) t.module_values.insert(f.name);
  for (auto& c : m.classes)
    for (auto& mem : c.members) t.module_values.insert(mem.name);

  hs::HsModule out;
  out.name = m.name;
  out.exports = exports;

  for (auto& imp : m.imports)
    for (auto& i : translate_import(imp, t.diags)) out.imports.push_back(std::move(i));

  auto guarded = [&](auto&& produce) {
    try {
      for (auto& d : produce()) out.decls.push_back(std::move(d));
    } catch (const Error& e) {
      t.diags.push_back(e.to_diagnostic());
    }
  };

  for (auto& d : m.typedefs) guarded([&] { return t.typedef_decl(d); });
  for (auto& c : m.classes) guarded([&] { return t.class_decl(c); });
  for (auto& i : m.instances) guarded([&] { return t.instance_decl(i); });

  // Start: world-threading programs are renamed to main; pure ones get a
  // printing main.
  bool pure_start = false;
  std::string start_name;
  for (auto& f : m.functions) {
    if (f.name != "Start" || f.clauses.empty()) continue;
    bool world = f.arity() > 0;
    if (f.sig) {
      for (auto& a : f.sig->args) world = world || is_world(a);
      world = world || is_world(f.sig->result);
    }
    if (world) {
      start_name = "main";
      t.diags.push_back(make_diagnostic(
          Severity::warning, rules::start_world, f.loc.span,
          "Start threads the World; renamed to main, its signature dropped. World-threading "
          "requires a manual port to IO"));
    } else {
      start_name = t.module_values.count("start") ? "start'" : "start";
      pure_start = true;
      t.diags.push_back(make_diagnostic(Severity::info, rules::start_pure, f.loc.span,
                                        "pure Start renamed to " + start_name +
                                            "; main prints its value"));
    }
    t.global_renames["Start"] = start_name;
  }

  for (auto& f : m.functions) {
    if (f.clauses.empty()) {
      t.diags.push_back(make_diagnostic(Severity::error, rules::missing_definition, f.loc.span,
                                        "'" + f.name + "' has a type but no definition"));
      continue;
    }
    guarded([&] {
      bool world_start = f.name == "Start" && start_name == "main";
      FunDef copy = f;
      if (world_start) copy.sig.reset();
      auto decls = t.function(copy, true);
      if (f.name == "Start" && pure_start) {
        decls.push_back(hs::Decl{hs::TypeSig{"main", hs::tapp(hs::tcon("IO"), {hs::ttuple({})})}});
        decls.push_back(hs::Decl{hs::FunBind{
            "main",
            {hs::Match{{}, hs::app(hs::var("print"), {hs::var(start_name)}), {}}}}});
      }
      return decls;
    });
  }

  for (auto& g : m.generics) {
    std::string what = g.kind == StubKind::declaration ? "generic function"
                       : g.kind == StubKind::derive    ? "generic derivation"
                                                       : "generic instance";
    t.diags.push_back(make_diagnostic(Severity::warning, rules::generics_unsupported, g.loc.span,
                                      what + " '" + g.name +
                                          "' needs a manual port to a generics library; kept as "
                                          "a comment"));
    out.decls.push_back(hs::Decl{hs::Comment{g.signature_text}});
  }

  if (t.uses_array) out.imports.push_back(hs::Import{"Data.Array", false, false, {}});
  if (t.uses_dynamic) out.imports.push_back(hs::Import{"Data.Dynamic", false, false, {}});
  if (t.uses_text)
    out.imports.push_back(hs::Import{"Data.Text", false, false, std::vector<hs::ImportItem>{{"Text", false}}});

  out.pragmas = hs::required_extensions(out);
  return {std::move(out), std::move(t.diags), std::move(t.uniq)};
}

hs::ExtensionSet extensions_of(const std::vector<hs::Decl>& decls) {
  hs::HsModule m;
  m.decls = decls;
  return hs::required_extensions(m);
}

DeclResult translate_typedef(const TypeDef& d, const TranslateOptions& opts) {
  Translator t(opts);
  t.add_typedefs({d});
  DeclResult r;
  r.decls = t.typedef_decl(d);
  r.extensions = extensions_of(r.decls);
  r.diagnostics = std::move(t.diags);
  return r;
}

DeclResult translate_sig(const std::string& name, const FunSig& sig,
                         const std::optional<Fixity>& fixity, const TranslateOptions& opts) {
  Translator t(opts);
  DeclResult r;
  bool op = is_symbolic_name(name);
  std::string target = op ? name : hs_ident(name);
  if (fixity) {
    hs::Assoc a = fixity->assoc == Assoc::left    ? hs::Assoc::left
                  : fixity->assoc == Assoc::right ? hs::Assoc::right
                                                  : hs::Assoc::none;
    r.decls.push_back(hs::Decl{hs::FixityDecl{a, fixity->precedence, target}});
  }
  r.decls.push_back(hs::Decl{hs::TypeSig{target, t.sig_type(t.prepare(sig, name))}});
  r.extensions = extensions_of(r.decls);
  r.diagnostics = std::move(t.diags);
  return r;
}

DeclResult translate_class(const ClassDef& c, const TranslateOptions& opts) {
  Translator t(opts);
  t.add_classes({c});
  DeclResult r;
  r.decls = t.class_decl(c);
  r.extensions = extensions_of(r.decls);
  r.diagnostics = std::move(t.diags);
  return r;
}

ExprResult translate_expr(const Expr& e, FreshNameSupply& ns, const TranslateOptions& opts,
                          const std::vector<TypeDef>& typedefs) {
  Translator t(opts);
  t.add_typedefs(typedefs);
  std::set<std::string> names;
  collect(e, names);
  ns.reserve_all(names);
  t.set_supply(&ns);
  ExprResult r{t.expr(e), {}, {}};
  std::vector<hs::Decl> wrapper;
  wrapper.push_back(hs::Decl{hs::FunBind{"it", {hs::Match{{}, r.expr, {}}}}});
  r.extensions = extensions_of(wrapper);
  r.diagnostics = std::move(t.diags);
  return r;
}

hs::Match translate_let_before(const Clause& clause, FreshNameSupply& ns,
                               const TranslateOptions& opts) {
  Translator t(opts);
  std::set<std::string> names;
  collect(clause, names);
  ns.reserve_all(names);
  t.set_supply(&ns);
  return t.match(clause, nullptr);
}

std::string target_value_name(const std::string& name) {
  return is_symbolic_name(name) ? name : hs_ident(name);
}

std::map<std::string, std::string> target_class_names(const std::vector<ClassDef>& classes,
                                                      const std::vector<TypeDef>& typedefs) {
  Translator t({});
  t.add_typedefs(typedefs);
  t.add_classes(classes);
  std::map<std::string, std::string> out;
  for (auto& c : classes) {
    try {
      out[c.name] = t.target_class(c);
    } catch (const Error&) {
      out[c.name] = c.name;
    }
  }
  return out;
}

std::set<std::string> clause_names(const Clause& c) {
  std::set<std::string> out;
  collect(c, out);
  return out;
}

}  // namespace clean2hs
