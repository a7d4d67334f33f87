#include "clean2hs/emitter.hpp"

#include <cctype>
#include <map>

namespace clean2hs {

using namespace hs;

namespace {

constexpr int kOpenEnded = -1;
constexpr int kApp = 10;
constexpr int kAtom = 11;

bool is_alpha_op(const std::string& op) {
  return !op.empty() && (std::isalpha(static_cast<unsigned char>(op[0])) != 0 || op[0] == '_');
}

std::string value_name(const std::string& name) {
  return is_symbolic(name) ? "(" + name + ")" : name;
}

std::string infix_name(const std::string& op) { return is_alpha_op(op) ? "`" + op + "`" : op; }

bool is_negative(const Literal& l) {
  return (l.kind == LitKind::integer || l.kind == LitKind::real) && !l.text.empty() &&
         l.text[0] == '-';
}

template <class T, class F>
std::string join(const std::vector<T>& xs, const std::string& sep, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

std::string paren_if(bool cond, const std::string& s) { return cond ? "(" + s + ")" : s; }

// ------------------------------------------------------------------ types

std::string type(const Type& t, int prec);

std::string constraint(const Constraint& c) {
  std::string out = c.cls;
  for (auto& a : c.args) out += " " + type(a, 2);
  return out;
}

std::string context(const std::vector<Constraint>& cs) {
  if (cs.empty()) return "";
  if (cs.size() == 1) return constraint(cs.front()) + " => ";
  return "(" + join(cs, ", ", constraint) + ") => ";
}

// prec 0: anywhere; 1: function argument; 2: application argument.
std::string type(const Type& t, int prec) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, TCon> || std::is_same_v<N, TVar>) {
          return n.name;
        } else if constexpr (std::is_same_v<N, TApp>) {
          std::string out = type(*n.head, 2);
          for (auto& a : n.args) out += " " + type(a, 2);
          return paren_if(prec >= 2, out);
        } else if constexpr (std::is_same_v<N, TFun>) {
          return paren_if(prec >= 1, type(*n.arg, 1) + " -> " + type(*n.result, 0));
        } else if constexpr (std::is_same_v<N, TList>) {
          return "[" + type(*n.elem, 0) + "]";
        } else if constexpr (std::is_same_v<N, TTuple>) {
          return "(" + join(n.elems, ", ", [](const Type& e) { return type(e, 0); }) + ")";
        } else if constexpr (std::is_same_v<N, TForall>) {
          std::string out;
          if (!n.vars.empty()) out = "forall " + join(n.vars, " ", [](auto& v) { return v; }) + ". ";
          out += context(n.context) + type(*n.body, 0);
          return paren_if(prec >= 1, out);
        } else {
          return "!" + type(*n.inner, 2);
        }
      },
      t.node);
}

// --------------------------------------------------------------- patterns

// prec 0: anywhere; 1: operand of `:`; 2: constructor or function argument.
std::string pattern(const Pattern& p, int prec) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, PVar>) {
          return value_name(n.name);
        } else if constexpr (std::is_same_v<N, PWild>) {
          return "_";
        } else if constexpr (std::is_same_v<N, PLit>) {
          return paren_if(prec >= 1 && is_negative(n.lit), n.lit.text);
        } else if constexpr (std::is_same_v<N, PCon>) {
          if (n.name == ":" && n.args.size() == 2)
            return paren_if(prec >= 1, pattern(n.args[0], 1) + " : " + pattern(n.args[1], 0));
          std::string out = n.name;
          for (auto& a : n.args) out += " " + pattern(a, 2);
          return paren_if(prec >= 2 && !n.args.empty(), out);
        } else if constexpr (std::is_same_v<N, PTuple>) {
          return "(" + join(n.elems, ", ", [](const Pattern& e) { return pattern(e, 0); }) + ")";
        } else if constexpr (std::is_same_v<N, PList>) {
          return "[" + join(n.elems, ", ", [](const Pattern& e) { return pattern(e, 0); }) + "]";
        } else if constexpr (std::is_same_v<N, PRec>) {
          std::string fields = join(n.fields, ", ", [](const FieldPat& f) {
            return f.pattern ? f.name + " = " + pattern(*f.pattern, 0) : f.name;
          });
          return paren_if(prec >= 2, n.con + " {" + (fields.empty() ? "" : " " + fields + " ") + "}");
        } else if constexpr (std::is_same_v<N, PAs>) {
          return n.name + "@" + pattern(*n.inner, 2);
        } else {
          return "!" + pattern(*n.inner, 2);
        }
      },
      p.node);
}

// ------------------------------------------------------------ renderer

class Renderer {
 public:
  explicit Renderer(const RenderStyle& style) : style_(style) {}

  void add_fixity(const FixityDecl& f) { fixities_[f.op] = f; }

  FixityDecl fixity(const std::string& op) const {
    if (auto it = fixities_.find(op); it != fixities_.end()) return it->second;
    return haskell_fixity(op);
  }

  std::string pad(int indent) const { return std::string(static_cast<std::size_t>(indent), ' '); }
  int w() const { return style_.indent_width; }

  // ----------------------------------------------------- expressions

  int level(const Expr& e) const {
    return std::visit(
        [&](const auto& n) -> int {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, Lit>) {
            return is_negative(n.lit) ? kOpenEnded : kAtom;
          } else if constexpr (std::is_same_v<N, App> || std::is_same_v<N, RecCon> ||
                               std::is_same_v<N, RecUpd>) {
            return kApp;
          } else if constexpr (std::is_same_v<N, Infix>) {
            return fixity(n.op).precedence;
          } else if constexpr (std::is_same_v<N, Lambda> || std::is_same_v<N, If> ||
                               std::is_same_v<N, Case> || std::is_same_v<N, Let> ||
                               std::is_same_v<N, Sig>) {
            return kOpenEnded;
          } else {
            return kAtom;
          }
        },
        e.node);
  }

  // Inline rendering; prec is the binding strength the context demands.
  std::string expr(const Expr& e, int prec) const {
    std::string body = std::visit([&](const auto& n) { return node(n); }, e.node);
    int l = level(e);
    bool wrap = l == kOpenEnded ? prec > 0 : l < prec;
    return paren_if(wrap, body);
  }

  std::string node(const Var& n) const { return value_name(n.name); }
  std::string node(const Con& n) const { return value_name(n.name); }
  std::string node(const Lit& n) const { return n.lit.text; }

  std::string node(const App& n) const {
    std::string out = expr(*n.fn, kAtom);
    for (auto& a : n.args) out += " " + expr(a, kAtom);
    return out;
  }

  std::string operand(const Expr& child, const FixityDecl& parent, bool left) const {
    if (auto* inf = std::get_if<Infix>(&child.node)) {
      FixityDecl f = fixity(inf->op);
      bool wrap = f.precedence < parent.precedence;
      if (f.precedence == parent.precedence) {
        Assoc side = left ? Assoc::left : Assoc::right;
        wrap = !(f.assoc == parent.assoc && parent.assoc == side);
      }
      return paren_if(wrap, node(*inf));
    }
    return expr(child, parent.precedence + 1);
  }

  std::string node(const Infix& n) const {
    FixityDecl f = fixity(n.op);
    return operand(*n.lhs, f, true) + " " + infix_name(n.op) + " " + operand(*n.rhs, f, false);
  }

  std::string node(const Lambda& n) const {
    std::string params = join(n.params, " ", [](const Pattern& p) { return pattern(p, 2); });
    std::string sep = !params.empty() && (params[0] == '!' || params[0] == '~') ? " " : "";
    return "\\" + sep + params + " -> " + expr(*n.body, 0);
  }

  std::string node(const If& n) const {
    return "if " + expr(*n.cond, 0) + " then " + expr(*n.then_branch, 0) + " else " +
           expr(*n.else_branch, 0);
  }

  std::string node(const Case& n) const {
    return "case " + expr(*n.scrutinee, 0) + " of { " +
           join(n.alts, "; ", [&](const Alt& a) { return alt_inline(a); }) + " }";
  }

  std::string node(const Let& n) const {
    return "let { " + join(n.binds, "; ", [&](const Decl& d) { return decl_inline(d); }) +
           " } in " + expr(*n.body, 0);
  }

  std::string node(const ListE& n) const {
    return "[" + join(n.elems, ", ", [&](const Expr& e) { return expr(e, 0); }) + "]";
  }

  std::string node(const TupleE& n) const {
    return "(" + join(n.elems, ", ", [&](const Expr& e) { return expr(e, 0); }) + ")";
  }

  std::string stmt(const Stmt& s) const {
    if (auto* g = std::get_if<Gen>(&s.node)) return pattern(g->pattern, 0) + " <- " + expr(g->source, 0);
    return expr(std::get<Guard>(s.node).cond, 0);
  }

  std::string node(const Comp& n) const {
    std::string out = "[" + expr(*n.body, 0);
    for (auto& b : n.branches)
      out += " | " + join(b, ", ", [&](const Stmt& s) { return stmt(s); });
    return out + "]";
  }

  std::string node(const Seq& n) const {
    std::string out = "[" + expr(*n.from, 0) + " ..";
    if (n.to) out += " " + expr(**n.to, 0);
    return out + "]";
  }

  std::string fields(const std::vector<FieldBind>& fs) const {
    if (fs.empty()) return "{}";
    return "{ " + join(fs, ", ", [&](const FieldBind& f) { return f.name + " = " + expr(f.value, 0); }) +
           " }";
  }

  std::string node(const RecCon& n) const { return n.con + " " + fields(n.fields); }
  // `C { .. }` would read as construction, so a bare constructor is wrapped.
  std::string node(const RecUpd& n) const {
    std::string r = expr(*n.record, kAtom);
    if (std::holds_alternative<Con>(n.record->node)) r = "(" + r + ")";
    return r + " " + fields(n.fields);
  }
  std::string node(const Sig& n) const { return expr(*n.expr, 1) + " :: " + type(n.type, 0); }

  // Rhs root, guard bodies and alternative bodies: case breaks over lines.
  std::string tail(const Expr& e, int indent) const {
    auto* c = std::get_if<Case>(&e.node);
    if (!c) return expr(e, 0);
    std::string out = "case " + expr(*c->scrutinee, 0) + " of";
    for (auto& a : c->alts) out += "\n" + pad(indent + w()) + alt_block(a, indent + w());
    return out;
  }

  std::string alt_block(const Alt& a, int indent) const {
    std::string out = pattern(a.pattern, 0) + rhs_block(a.rhs, "->", indent);
    return out + where_block(a.where, indent);
  }

  std::string rhs_block(const Rhs& r, const char* eq, int indent) const {
    if (auto* e = std::get_if<Expr>(&r)) return std::string(" ") + eq + " " + tail(*e, indent);
    std::string out;
    for (auto& g : std::get<std::vector<GuardedExpr>>(r))
      out += "\n" + pad(indent + w()) + "| " + expr(g.guard, 0) + " " + eq + " " +
             tail(g.body, indent + w());
    return out;
  }

  std::string where_block(const std::vector<Decl>& where, int indent) const {
    if (where.empty()) return "";
    std::string out = "\n" + pad(indent + w()) + "where";
    for (auto& d : where) out += "\n" + pad(indent + 2 * w()) + decl(d, indent + 2 * w());
    return out;
  }

  std::string alt_inline(const Alt& a) const {
    std::string out = pattern(a.pattern, 0) + rhs_inline(a.rhs, "->");
    if (!a.where.empty())
      out += " where { " + join(a.where, "; ", [&](const Decl& d) { return decl_inline(d); }) + " }";
    return out;
  }

  std::string rhs_inline(const Rhs& r, const char* eq) const {
    if (auto* e = std::get_if<Expr>(&r)) return std::string(" ") + eq + " " + expr(*e, 0);
    std::string out;
    for (auto& g : std::get<std::vector<GuardedExpr>>(r))
      out += " | " + expr(g.guard, 0) + " " + eq + " " + expr(g.body, 0);
    return out;
  }

  // ----------------------------------------------------- declarations

  static std::string match_head(const std::string& name, const Match& m) {
    std::string out = value_name(name);
    for (auto& p : m.params) out += " " + pattern(p, 2);
    return out;
  }

  std::string decl_inline(const Decl& d) const {
    if (auto* f = std::get_if<FunBind>(&d.node)) {
      return join(f->matches, "; ", [&](const Match& m) {
        std::string out = match_head(f->name, m) + rhs_inline(m.rhs, "=");
        if (!m.where.empty())
          out += " where { " + join(m.where, "; ", [&](const Decl& x) { return decl_inline(x); }) + " }";
        return out;
      });
    }
    if (auto* b = std::get_if<PatBind>(&d.node)) {
      std::string out = pattern(b->pattern, 0) + rhs_inline(b->rhs, "=");
      if (!b->where.empty())
        out += " where { " + join(b->where, "; ", [&](const Decl& x) { return decl_inline(x); }) + " }";
      return out;
    }
    return decl(d, 0);
  }

  // First line unindented; later lines carry their full indentation.
  std::string decl(const Decl& d, int indent) const {
    return std::visit([&](const auto& n) { return decl_node(n, indent); }, d.node);
  }

  std::string decl_node(const TypeSig& n, int) const {
    return value_name(n.name) + " :: " + type(n.type, 0);
  }

  std::string decl_node(const FixityDecl& n, int) const {
    const char* kw = n.assoc == Assoc::left ? "infixl" : n.assoc == Assoc::right ? "infixr" : "infix";
    return std::string(kw) + " " + std::to_string(n.precedence) + " " + infix_name(n.op);
  }

  std::string decl_node(const FunBind& n, int indent) const {
    return join(n.matches, "\n" + pad(indent), [&](const Match& m) {
      return match_head(n.name, m) + rhs_block(m.rhs, "=", indent) + where_block(m.where, indent);
    });
  }

  std::string decl_node(const PatBind& n, int indent) const {
    return pattern(n.pattern, 0) + rhs_block(n.rhs, "=", indent) + where_block(n.where, indent);
  }

  static std::string con_decl(const ConDecl& c) {
    std::string out;
    if (!c.forall_vars.empty())
      out += "forall " + join(c.forall_vars, " ", [](auto& v) { return v; }) + ". ";
    out += context(c.context) + c.name;
    if (c.record) {
      std::string fs = join(*c.record, ", ", [](const FieldDecl& f) {
        return f.name + " :: " + type(f.type, 0);
      });
      return out + (fs.empty() ? " {}" : " { " + fs + " }");
    }
    for (auto& a : c.args) out += " " + type(a, 2);
    return out;
  }

  static std::string type_head(const std::string& name, const std::vector<std::string>& vars) {
    std::string out = name;
    for (auto& v : vars) out += " " + v;
    return out;
  }

  std::string decl_node(const DataDecl& n, int indent) const {
    std::string head = std::string(n.is_newtype ? "newtype " : "data ") + type_head(n.name, n.vars);
    if (n.ctors.empty()) return head;
    std::string one_line = head + " = " + join(n.ctors, " | ", con_decl);
    if (indent + static_cast<int>(one_line.size()) <= style_.max_line) return one_line;
    std::string out = head;
    for (std::size_t i = 0; i < n.ctors.size(); ++i)
      out += "\n" + pad(indent + w()) + (i ? "| " : "= ") + con_decl(n.ctors[i]);
    return out;
  }

  std::string decl_node(const TypeSyn& n, int) const {
    return "type " + type_head(n.name, n.vars) + " = " + type(n.rhs, 0);
  }

  std::string body_block(const std::vector<Decl>& body, int indent) const {
    if (body.empty()) return "";
    std::string out = " where";
    for (auto& d : body) out += "\n" + pad(indent + w()) + decl(d, indent + w());
    return out;
  }

  std::string decl_node(const ClassDecl& n, int indent) const {
    std::string out = "class " + context(n.context) + type_head(n.name, n.vars);
    if (!n.fundeps.empty())
      out += " | " + join(n.fundeps, ", ", [](const FunDep& f) {
        return join(f.from, " ", [](auto& v) { return v; }) + " -> " +
               join(f.to, " ", [](auto& v) { return v; });
      });
    return out + body_block(n.body, indent);
  }

  std::string decl_node(const InstDecl& n, int indent) const {
    std::string out = "instance " + context(n.context) + n.cls;
    for (auto& t : n.types) out += " " + type(t, 2);
    return out + body_block(n.body, indent);
  }

  std::string decl_node(const Comment& n, int) const { return "{- " + n.text + " -}"; }

 private:
  RenderStyle style_;
  std::map<std::string, FixityDecl> fixities_;
};

void collect_fixities(const std::vector<Decl>& decls, Renderer& r) {
  for (auto& d : decls) {
    if (auto* f = std::get_if<FixityDecl>(&d.node)) r.add_fixity(*f);
    if (auto* c = std::get_if<ClassDecl>(&d.node)) collect_fixities(c->body, r);
  }
}

std::string export_item(const ExportItem& e) { return value_name(e.name) + (e.all ? "(..)" : ""); }

std::string import_line(const Import& i) {
  std::string out = "import ";
  if (i.qualified) out += "qualified ";
  out += i.module;
  if (i.items) {
    if (i.hiding) out += " hiding";
    out += " (" + join(*i.items, ", ", [](const ImportItem& it) {
             return value_name(it.name) + (it.all ? "(..)" : "");
           }) + ")";
  }
  return out;
}

std::string strip_trailing(const std::string& text) {
  std::string out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
    out += line;
    if (end == std::string::npos) break;
    out += '\n';
    start = end + 1;
  }
  return out;
}

}  // namespace

hs::FixityDecl haskell_fixity(const std::string& op) {
  static const std::map<std::string, FixityDecl> table = [] {
    std::map<std::string, FixityDecl> t;
    auto add = [&](Assoc a, int p, std::initializer_list<const char*> ops) {
      for (auto* o : ops) t[o] = FixityDecl{a, p, o};
    };
    add(Assoc::right, 9, {"."});
    add(Assoc::left, 9, {"!!", "!", "//"});
    add(Assoc::right, 8, {"^", "^^", "**"});
    add(Assoc::left, 7, {"*", "/", "div", "mod", "rem", "quot"});
    add(Assoc::left, 6, {"+", "-"});
    add(Assoc::right, 6, {"<>"});
    add(Assoc::right, 5, {":", "++"});
    add(Assoc::none, 4, {"==", "/=", "<", "<=", ">", ">=", "elem", "notElem"});
    add(Assoc::right, 3, {"&&"});
    add(Assoc::right, 2, {"||"});
    add(Assoc::left, 1, {">>", ">>="});
    add(Assoc::right, 0, {"$", "$!", "seq"});
    return t;
  }();
  if (auto it = table.find(op); it != table.end()) return it->second;
  return FixityDecl{Assoc::left, 9, op};
}

std::string emit_type(const hs::Type& t) { return type(t, 0); }
std::string emit_pattern(const hs::Pattern& p) { return pattern(p, 0); }

std::string emit_expr(const hs::Expr& e, const RenderStyle& style) {
  return Renderer(style).tail(e, 0);
}

std::string emit_decl(const hs::Decl& d, const RenderStyle& style) {
  Renderer r(style);
  collect_fixities({d}, r);
  return strip_trailing(r.decl(d, 0));
}

std::string emit(const hs::HsModule& m, const RenderStyle& style) {
  Renderer r(style);
  collect_fixities(m.decls, r);
  std::string out;
  if (!m.pragmas.empty()) {
    if (style.pragma_style == PragmaStyle::combined) {
      out += "{-# LANGUAGE " +
             join(std::vector<Extension>(m.pragmas.begin(), m.pragmas.end()), ", ",
                  [](Extension e) { return std::string(to_string(e)); }) +
             " #-}\n";
    } else {
      for (auto e : m.pragmas) out += "{-# LANGUAGE " + std::string(to_string(e)) + " #-}\n";
    }
  }

  std::string header = "module " + m.name;
  if (m.exports) {
    std::string items = join(*m.exports, ", ", export_item);
    std::string one_line = header + " (" + items + ") where";
    if (static_cast<int>(one_line.size()) <= style.max_line || m.exports->empty()) {
      header = one_line;
    } else {
      std::string p(static_cast<std::size_t>(style.indent_width), ' ');
      for (std::size_t i = 0; i < m.exports->size(); ++i)
        header += "\n" + p + (i ? ", " : "( ") + export_item((*m.exports)[i]);
      header += "\n" + p + ") where";
    }
  } else {
    header += " where";
  }
  out += header + "\n";

  if (!m.imports.empty()) {
    out += "\n";
    for (auto& i : m.imports) out += import_line(i) + "\n";
  }

  bool attached = false;
  for (auto& d : m.decls) {
    if (!attached) out += "\n";
    out += r.decl(d, 0) + "\n";
    attached = std::holds_alternative<TypeSig>(d.node) || std::holds_alternative<FixityDecl>(d.node);
  }
  return strip_trailing(out);
}

}  // namespace clean2hs
