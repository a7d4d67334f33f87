#include "clean2hs/clean_printer.hpp"

#include <cctype>

namespace clean2hs {

using namespace clean;

namespace {

// Expression contexts, from loosest to tightest.
constexpr int kTail = 0;     // end of a line or block item: open forms allowed
constexpr int kInfix = 1;    // operator chains
constexpr int kOperand = 2;  // operand of an infix operator
constexpr int kApply = 3;    // application
constexpr int kArg = 4;      // argument or selector target

std::string pad(int n) { return std::string(static_cast<std::size_t>(n), ' '); }

template <class T, class F>
std::string join(const std::vector<T>& xs, const std::string& sep, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

bool symbolic(const std::string& name) {
  return !name.empty() && std::isalpha(static_cast<unsigned char>(name[0])) == 0 &&
         name[0] != '_' && name[0] != '?';
}

std::string fun_name(const std::string& name, bool is_operator) {
  return is_operator || symbolic(name) ? "(" + name + ")" : name;
}

std::string ctor_text(const std::string& name) { return name; }

// ----------------------------------------------------------------- types

std::string attr_prefix(const AttrType& t) {
  std::string out = t.strict ? "! " : "";
  switch (t.attr.kind) {
    case AttrKind::unique:
      return out + "*";
    case AttrKind::var:
      return out + t.attr.var + ":";
    case AttrKind::anon_dot:
      return out + ".";
    case AttrKind::none:
      return out;
  }
  return out;
}

std::string type(const AttrType& t, bool atomic);

// The shape without attribute or strictness.
std::string shape(const AttrType& t, bool atomic) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, TyBase> || std::is_same_v<N, TyVar>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, TyApply>) {
          std::string out = type(*n.head, true);
          for (auto& a : n.args) out += " " + type(a, true);
          return atomic ? "(" + out + ")" : out;
        } else if constexpr (std::is_same_v<N, TyTuple>) {
          return "(" + join(n.elems, ", ", [](const AttrType& e) { return type(e, false); }) + ")";
        } else if constexpr (std::is_same_v<N, TyList>) {
          return "[" + type(*n.elem, false) + "]";
        } else if constexpr (std::is_same_v<N, TyArray>) {
          return "{" + type(*n.elem, false) + "}";
        } else if constexpr (std::is_same_v<N, TyOptional>) {
          return "?" + type(*n.elem, true);
        } else if constexpr (std::is_same_v<N, TyFunction>) {
          std::string out = type(*n.arg, true) + " -> " + type(*n.result, false);
          return atomic ? "(" + out + ")" : out;
        } else {
          std::string out = "A." + join(n.vars, " ", [](auto& v) { return v; }) + ": " +
                            type(*n.body, false);
          return atomic ? "(" + out + ")" : out;
        }
      },
      t.shape);
}

bool composite(const AttrType& t) {
  return std::holds_alternative<TyApply>(t.shape) || std::holds_alternative<TyFunction>(t.shape) ||
         std::holds_alternative<TyForall>(t.shape);
}

std::string type(const AttrType& t, bool atomic) {
  std::string prefix = attr_prefix(t);
  if (prefix.empty()) return shape(t, atomic);
  // An attribute before a bare application moves onto the application when
  // parsed, so only strict or nested composites need parentheses.
  if (composite(t) &&
      (atomic || t.strict || !std::holds_alternative<TyApply>(t.shape)))
    return prefix + "(" + shape(t, false) + ")";
  return prefix + shape(t, atomic);
}

std::string constraints(const std::vector<ClassConstraint>& cs) {
  return join(cs, " & ", [](const ClassConstraint& c) {
    std::string out = c.class_name;
    for (auto& a : c.args) out += " " + type(a, true);
    return out;
  });
}

std::string signature(const FunSig& s) {
  std::string out;
  if (!s.quantified.empty())
    out += "A." + join(s.quantified, " ", [](auto& v) { return v; }) + ": ";
  if (s.args.empty()) {
    bool wrap = std::holds_alternative<TyFunction>(s.result.shape) ||
                std::holds_alternative<TyForall>(s.result.shape);
    out += type(s.result, wrap);
  } else {
    out += join(s.args, " ", [](const AttrType& a) { return type(a, true); }) + " -> " +
           type(s.result, false);
  }
  if (!s.context.empty()) out += " | " + constraints(s.context);
  if (!s.attr_constraints.empty())
    out += ", [" + join(s.attr_constraints, ", ", [](const AttrConstraint& c) {
             return c.lesser + "<=" + c.greater;
           }) + "]";
  return out;
}

// -------------------------------------------------------------- patterns

std::string pattern(const Pattern& p, bool atomic) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PVar>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, PWildcard>) {
          return "_";
        } else if constexpr (std::is_same_v<N, PLiteral>) {
          return n.lit.text;
        } else if constexpr (std::is_same_v<N, PCtor>) {
          std::string out = ctor_text(n.name);
          for (auto& a : n.args) out += " " + pattern(a, true);
          return atomic && !n.args.empty() ? "(" + out + ")" : out;
        } else if constexpr (std::is_same_v<N, PCons>) {
          return "[" + join(n.heads, ", ", [](const Pattern& h) { return pattern(h, false); }) +
                 " : " + pattern(*n.tail, false) + "]";
        } else if constexpr (std::is_same_v<N, PList>) {
          return "[" + join(n.elems, ", ", [](const Pattern& e) { return pattern(e, false); }) + "]";
        } else if constexpr (std::is_same_v<N, PTuple>) {
          return "(" + join(n.elems, ", ", [](const Pattern& e) { return pattern(e, false); }) + ")";
        } else if constexpr (std::is_same_v<N, PRecord>) {
          std::string out = "{";
          if (n.type_name) out += *n.type_name + " | ";
          out += join(n.fields, ", ", [](const FieldPattern& f) {
            return f.pattern ? f.name + " = " + pattern(*f.pattern, false) : f.name;
          });
          return out + "}";
        } else if constexpr (std::is_same_v<N, PAs>) {
          return n.var + " =: " + pattern(*n.inner, true);
        } else {
          return "(" + n.var + " :: " + type(n.type, false) + ")";
        }
      },
      p.node);
}

// ----------------------------------------------------------- expressions

class Printer {
 public:
  int level(const Expr& e) const {
    return std::visit(
        [](const auto& n) -> int {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, EApply> || std::is_same_v<N, EDynamic> ||
                        std::is_same_v<N, EIf>) {
            return kApply;
          } else if constexpr (std::is_same_v<N, EAsPredicate>) {
            return kOperand;
          } else if constexpr (std::is_same_v<N, EInfix>) {
            return kInfix;
          } else if constexpr (std::is_same_v<N, ELambda> || std::is_same_v<N, ECase> ||
                               std::is_same_v<N, ELet>) {
            return kTail;
          } else {
            return kArg;
          }
        },
        e.node);
  }

  // indent: spaces before the line on which the expression starts.
  std::string expr(const Expr& e, int ctx, int indent) const {
    std::string body = std::visit([&](const auto& n) { return node(n, indent); }, e.node);
    return level(e) < ctx ? "(" + body + ")" : body;
  }

  std::string node(const EVar& n, int) const { return symbolic(n.name) ? "(" + n.name + ")" : n.name; }
  std::string node(const ECtor& n, int) const { return ctor_text(n.name); }
  std::string node(const ELiteral& n, int) const { return n.lit.text; }

  std::string node(const EApply& n, int indent) const {
    std::string out = expr(*n.fn, kArg, indent);
    for (auto& a : n.args) out += " " + expr(a, kArg, indent);
    return out;
  }

  std::string node(const EInfix& n, int indent) const {
    return expr(*n.lhs, kOperand, indent) + " " + n.op + " " + expr(*n.rhs, kOperand, indent);
  }

  std::string node(const ELambda& n, int indent) const {
    return "\\ " + join(n.params, " ", [](const Pattern& p) { return pattern(p, true); }) + " -> " +
           expr(*n.body, kTail, indent);
  }

  std::string node(const EIf& n, int indent) const {
    return "if " + expr(*n.cond, kArg, indent) + " " + expr(*n.then_branch, kArg, indent) + " " +
           expr(*n.else_branch, kArg, indent);
  }

  std::string node(const ECase& n, int indent) const {
    std::string out = "case " + expr(*n.scrutinee, kInfix, indent) + " of";
    for (auto& a : n.alts) out += "\n" + pad(indent + 4) + alt(a, indent + 4);
    return out;
  }

  std::string alt(const Alt& a, int indent) const {
    return pattern(a.pattern, false) + rhs(a.rhs, "->", indent, false);
  }

  std::string node(const ELet& n, int indent) const {
    std::string out = "let";
    for (auto& d : n.defs) out += "\n" + pad(indent + 4) + local_def(d, indent + 4);
    return out + "\n" + pad(indent + 2) + "in " + expr(*n.body, kTail, indent + 2);
  }

  std::string elems(const std::vector<Expr>& xs, int indent) const {
    return join(xs, ", ", [&](const Expr& x) { return expr(x, kInfix, indent); });
  }

  std::string node(const EList& n, int indent) const { return "[" + elems(n.elems, indent) + "]"; }

  std::string node(const ECons& n, int indent) const {
    return "[" + elems(n.heads, indent) + " : " + expr(*n.tail, kInfix, indent) + "]";
  }

  std::string node(const ERange& n, int indent) const {
    std::string out = "[" + expr(*n.from, kInfix, indent) + " ..";
    if (n.to) out += " " + expr(**n.to, kInfix, indent);
    return out + "]";
  }

  std::string qualifiers(const std::vector<Qualifier>& qs, int indent) const {
    return join(qs, ", ", [&](const Qualifier& q) {
      std::string out = join(q.parallel, " & ", [&](const Generator& g) {
        return pattern(g.pattern, false) + (g.from_array ? " <-: " : " <- ") +
               expr(g.source, kInfix, indent);
      });
      if (q.guard) out += " | " + expr(*q.guard, kInfix, indent);
      return out;
    });
  }

  std::string node(const EComprehension& n, int indent) const {
    std::string inner = expr(*n.body, kInfix, indent) + " \\\\ " + qualifiers(n.qualifiers, indent);
    return n.array_result ? "{" + inner + "}" : "[" + inner + "]";
  }

  std::string fields(const std::vector<FieldInit>& fs, int indent) const {
    return join(fs, ", ", [&](const FieldInit& f) { return f.name + " = " + expr(f.value, kInfix, indent); });
  }

  std::string node(const ERecord& n, int indent) const {
    return "{" + (n.type_name ? *n.type_name + " | " : std::string()) + fields(n.fields, indent) + "}";
  }

  std::string node(const ERecordUpdate& n, int indent) const {
    return "{" + expr(*n.record, kInfix, indent) + " & " + fields(n.fields, indent) + "}";
  }

  std::string node(const ESelect& n, int indent) const {
    return expr(*n.record, kArg, indent) + "." + n.field;
  }
  std::string node(const EUniqueSelect& n, int indent) const {
    return expr(*n.record, kArg, indent) + "!" + n.field;
  }
  std::string node(const EArray& n, int indent) const { return "{" + elems(n.elems, indent) + "}"; }
  std::string node(const EIndex& n, int indent) const {
    return expr(*n.array, kArg, indent) + ".[" + expr(*n.index, kInfix, indent) + "]";
  }
  std::string node(const EUniqueIndex& n, int indent) const {
    return expr(*n.array, kArg, indent) + "![" + expr(*n.index, kInfix, indent) + "]";
  }

  std::string node(const EArrayUpdate& n, int indent) const {
    return "{" + expr(*n.array, kInfix, indent) + " & " +
           join(n.updates, ", ", [&](const ArrayAssign& u) {
             return "[" + expr(u.index, kInfix, indent) + "] = " + expr(u.value, kInfix, indent);
           }) +
           "}";
  }

  std::string node(const EDynamic& n, int indent) const {
    return "dynamic " + expr(*n.value, kApply, indent);
  }

  std::string node(const EAsPredicate& n, int indent) const {
    return expr(*n.scrutinee, kApply, indent) + " =: " + pattern(n.pattern, false);
  }

  std::string node(const ETuple& n, int indent) const { return "(" + elems(n.elems, indent) + ")"; }

  // ------------------------------------------------------ definitions

  // `= e`, guards, or `-> e` in case alternatives.
  std::string rhs(const Rhs& r, const char* eq, int indent, bool own_line) const {
    if (auto* e = std::get_if<Expr>(&r)) {
      std::string lead = own_line ? "\n" + pad(indent + 2) : std::string(" ");
      int at = own_line ? indent + 2 : indent;
      return lead + eq + " " + expr(*e, kTail, at);
    }
    std::string out;
    for (auto& g : std::get<std::vector<GuardAlt>>(r)) {
      out += "\n" + pad(indent + 2);
      if (g.guard) out += "| " + expr(*g.guard, kInfix, indent + 2) + " ";
      out += std::string(eq) + " " + expr(g.body, kTail, indent + 2);
    }
    return out;
  }

  std::string body(const GuardedBody& b, int indent) const {
    std::string out;
    for (auto& l : b.lets)
      out += "\n" + pad(indent + 2) + (l.strict ? "#! " : "# ") + pattern(l.pattern, false) +
             " = " + expr(l.value, kTail, indent + 2);
    return out + rhs(b.rhs, "=", indent, !b.lets.empty());
  }

  std::string clause(const std::string& head, const Clause& c, int indent) const {
    std::string out = head;
    for (auto& p : c.params) out += " " + pattern(p, true);
    out += body(c.body, indent);
    if (!c.where_defs.empty()) {
      out += "\n" + pad(indent + 2) + "where";
      for (auto& d : c.where_defs) out += "\n" + pad(indent + 4) + local_def(d, indent + 4);
    }
    return out;
  }

  static std::string fixity(const Fixity& f) {
    const char* kw = f.assoc == Assoc::left ? "infixl" : f.assoc == Assoc::right ? "infixr" : "infix";
    return std::string(kw) + " " + std::to_string(f.precedence);
  }

  std::string fun_def(const FunDef& f, int indent) const {
    std::string head = fun_name(f.name, f.is_operator);
    std::vector<std::string> lines;
    if (f.fixity || f.sig) {
      std::string line = head;
      if (f.fixity) line += " " + fixity(*f.fixity);
      if (f.sig) line += " :: " + signature(*f.sig);
      lines.push_back(line);
    }
    for (auto& c : f.clauses) lines.push_back(clause(head, c, indent));
    return join(lines, "\n" + pad(indent), [](const std::string& s) { return s; });
  }

  std::string local_def(const LocalDef& d, int indent) const {
    if (auto* f = std::get_if<FunDef>(&d.def)) return fun_def(*f, indent);
    auto& b = std::get<PatternBinding>(d.def);
    return pattern(b.pattern, true) + body(b.body, indent);
  }
};

std::string ctor(const CtorDef& c) {
  std::string out;
  if (!c.existentials.empty())
    out += "E." + join(c.existentials, " ", [](auto& v) { return v; }) + ": ";
  out += c.name;
  for (auto& a : c.args) out += " " + type(a, true);
  if (!c.context.empty()) out += " & " + constraints(c.context);
  return out;
}

std::string typedef_text(const TypeDef& d) {
  std::string out = ":: " + d.name;
  for (auto& v : d.type_vars) out += " " + v;
  return std::visit(
      [&](const auto& b) -> std::string {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, Synonym>) {
          return out + " :== " + type(b.rhs, false);
        } else if constexpr (std::is_same_v<B, Algebraic>) {
          return out + " = " + join(b.ctors, " | ", ctor);
        } else if constexpr (std::is_same_v<B, Record>) {
          return out + " = {" + join(b.fields, ", ", [](const FieldDef& f) {
                   return f.name + " :: " + type(f.type, false);
                 }) + "}";
        } else if constexpr (std::is_same_v<B, NewtypeLike>) {
          return out + " =: " + ctor(b.ctor);
        } else {
          return out;
        }
      },
      d.body);
}

std::string params(const std::vector<ClassParam>& ps) {
  return join(ps, " ", [](const ClassParam& p) { return (p.determined ? "~" : "") + p.name; });
}

std::string member(const ClassMember& m) {
  std::string out = fun_name(m.name, m.is_operator);
  if (m.fixity) out += " " + Printer::fixity(*m.fixity);
  return out + " :: " + signature(m.sig);
}

std::string class_text(const ClassDef& c) {
  if (c.single_member && c.members.size() == 1) {
    const ClassMember& m = c.members.front();
    std::string out = "class " + fun_name(c.name, m.is_operator);
    if (m.fixity) out += " " + Printer::fixity(*m.fixity);
    return out + " " + params(c.params) + " :: " + signature(m.sig);
  }
  std::string out = "class " + c.name + " " + params(c.params);
  if (!c.superclasses.empty()) out += " | " + constraints(c.superclasses);
  if (!c.members.empty()) {
    out += " where";
    for (auto& m : c.members) out += "\n" + pad(4) + member(m);
  }
  return out;
}

std::string instance_text(const InstanceDef& i) {
  std::string out = "instance " + i.class_name;
  for (auto& t : i.types) out += " " + type(t, true);
  if (!i.context.empty()) out += " | " + constraints(i.context);
  if (!i.members.empty()) {
    out += " where";
    Printer p;
    for (auto& f : i.members) out += "\n" + pad(4) + p.fun_def(f, 4);
  }
  return out;
}

std::string entry(const ImportEntry& e) {
  switch (e.kind) {
    case EntryKind::type:
      return ":: " + e.name;
    case EntryKind::class_:
      return "class " + e.name;
    case EntryKind::function:
      break;
  }
  return symbolic(e.name) ? "(" + e.name + ")" : e.name;
}

std::string import_text(const ImportDecl& d) {
  if (d.form == ImportForm::whole_module) return "import " + d.module_name;
  bool any_qualified = false;
  for (auto& e : d.entries) any_qualified = any_qualified || e.qualified;
  if (!any_qualified) return "from " + d.module_name + " import " + join(d.entries, ", ", entry);
  std::string out = "import " + d.module_name + " =>";
  bool in_qualified = false;
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    out += i ? ", " : " ";
    if (d.entries[i].qualified && !in_qualified) {
      out += "qualified ";
      in_qualified = true;
    }
    out += entry(d.entries[i]);
  }
  return out;
}

}  // namespace

std::string print_expr(const Expr& e) { return Printer().expr(e, kTail, 0); }
std::string print_pattern(const Pattern& p) { return pattern(p, false); }
std::string print_type(const AttrType& t) { return type(t, false); }
std::string print_signature(const FunSig& s) { return signature(s); }

std::string print_module(const CleanModule& m) {
  std::vector<std::string> items;
  items.push_back(std::string(m.kind == ModuleKind::definition ? "definition" : "implementation") +
                  " module " + m.name);
  for (auto& i : m.imports) items.push_back(import_text(i));
  for (auto& d : m.typedefs) items.push_back(typedef_text(d));
  for (auto& c : m.classes) items.push_back(class_text(c));
  for (auto& i : m.instances) items.push_back(instance_text(i));
  Printer p;
  for (auto& f : m.functions) items.push_back(p.fun_def(f, 0));
  for (auto& g : m.generics) items.push_back(g.signature_text);
  return join(items, "\n\n", [](const std::string& s) { return s; }) + "\n";
}

}  // namespace clean2hs
