#include "clean2hs/parser.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace clean2hs {

using namespace clean;

namespace {

struct OpFixity {
  Assoc assoc;
  int precedence;
};

// Operator fixities of the standard environment. User declarations override.
const std::map<std::string, OpFixity>& standard_fixities() {
  static const std::map<std::string, OpFixity> table = {
      {"o", {Assoc::right, 9}},   {"!!", {Assoc::left, 9}},   {"^", {Assoc::right, 8}},
      {"*", {Assoc::left, 7}},    {"/", {Assoc::left, 7}},    {"rem", {Assoc::none, 7}},
      {"mod", {Assoc::none, 7}},  {"+", {Assoc::left, 6}},    {"-", {Assoc::left, 6}},
      {"++", {Assoc::right, 5}},  {"+++", {Assoc::right, 5}}, {"==", {Assoc::none, 4}},
      {"<>", {Assoc::none, 4}},   {"<", {Assoc::none, 4}},    {"<=", {Assoc::none, 4}},
      {">", {Assoc::none, 4}},    {">=", {Assoc::none, 4}},   {"&&", {Assoc::right, 3}},
      {"||", {Assoc::right, 2}},  {"$", {Assoc::right, 0}},
  };
  return table;
}

const std::set<std::string>& reserved_ops() {
  static const std::set<std::string> ops = {"=",  "|",  "&",  "\\\\", "<-", "<-:", "->", "=:",
                                            "::", ":==", "#", "#!",   "\\", "..",  ".",  "!",
                                            ":=", "A.", "E.", "~",    "?",  "{|",  "|}"};
  return ops;
}

bool is_reserved_op(const Token& t) {
  return t.kind == TokenKind::op && reserved_ops().count(t.text) != 0;
}

Loc loc_of(const Token& t) { return Loc{t.span}; }
Loc loc_span(const Token& a, const Token& b) { return Loc{{a.span.start, b.span.end}}; }

LiteralKind literal_kind(TokenKind k) {
  switch (k) {
    case TokenKind::real_literal:
      return LiteralKind::real;
    case TokenKind::char_literal:
      return LiteralKind::character;
    case TokenKind::string_literal:
      return LiteralKind::string;
    case TokenKind::char_list_literal:
      return LiteralKind::char_list;
    default:
      return LiteralKind::integer;
  }
}

bool is_literal(const Token& t) {
  switch (t.kind) {
    case TokenKind::integer_literal:
    case TokenKind::real_literal:
    case TokenKind::char_literal:
    case TokenKind::string_literal:
    case TokenKind::char_list_literal:
      return true;
    default:
      return false;
  }
}

std::string describe(const Token& t) {
  if (t.kind == TokenKind::layout_marker) {
    switch (t.layout) {
      case Layout::open:
        return "start of block";
      case Layout::separator:
        return "new declaration";
      case Layout::close:
        return "end of block";
      default:
        return "end of input";
    }
  }
  return "'" + t.text + "'";
}

// Function-level items are grouped into FunDefs after parsing a block.
struct SigItem {
  std::string name;
  bool is_operator = false;
  std::optional<Fixity> fixity;
  std::optional<FunSig> sig;
  Loc loc;
};
struct ClauseItem {
  std::string name;
  bool is_operator = false;
  Clause clause;
  Loc loc;
};
using FunItem = std::variant<SigItem, ClauseItem, PatternBinding>;

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    eof_.kind = TokenKind::layout_marker;
    eof_.layout = Layout::none;
    if (!toks_.empty()) eof_.span = {toks_.back().span.end, toks_.back().span.end};
    collect_fixities();
  }

  CleanModule module(ModuleKind expected_kind) {
    CleanModule m;
    expect_layout(Layout::open, "module header");
    skip_separators();
    parse_header(m, expected_kind);
    std::vector<FunItem> items;
    while (true) {
      if (peek().is_layout(Layout::close)) {
        next();
        break;
      }
      if (at_eof()) fail({"end of block"});
      if (is_separator(peek())) {
        next();
        continue;
      }
      top_item(m, items);
      if (!is_separator(peek()) && !peek().is_layout(Layout::close))
        fail({"new declaration"});
    }
    if (!at_eof()) fail({"end of input"});
    m.functions = group_functions(std::move(items), nullptr);
    attach_derives(m);
    return m;
  }

  Expr standalone_expr() {
    Expr e = expr();
    if (!at_eof()) fail({"end of expression"});
    return e;
  }

  AttrType standalone_type() {
    AttrType t = type();
    if (!at_eof()) fail({"end of type"});
    return t;
  }

  FunSig standalone_sig() {
    FunSig s = signature();
    if (!at_eof()) fail({"end of signature"});
    return s;
  }

  Pattern standalone_pattern() {
    Pattern p = pattern();
    if (!at_eof()) fail({"end of pattern"});
    return p;
  }

 private:
  // ------------------------------------------------------------ tokens

  const Token& peek(std::size_t k = 0) const {
    return pos_ + k < toks_.size() ? toks_[pos_ + k] : eof_;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size()) ++pos_;
    return t;
  }
  const Token& prev() const { return pos_ > 0 ? toks_[pos_ - 1] : eof_; }
  bool at_eof() const { return pos_ >= toks_.size(); }

  static bool is_separator(const Token& t) {
    return t.is_layout(Layout::separator) || t.is_punct(";");
  }
  bool at_item_end() const {
    const Token& t = peek();
    return at_eof() || is_separator(t) || t.is_layout(Layout::close);
  }
  void skip_separators() {
    while (is_separator(peek())) next();
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + describe(t);
    throw ParseError(t.span, std::move(expected), t.text, msg);
  }

  const Token& expect_op(std::string_view text) {
    if (!peek().is_op(text)) fail({"'" + std::string(text) + "'"});
    return next();
  }
  const Token& expect_punct(std::string_view text) {
    if (!peek().is_punct(text)) fail({"'" + std::string(text) + "'"});
    return next();
  }
  const Token& expect_keyword(std::string_view text) {
    if (!peek().is_keyword(text)) fail({"'" + std::string(text) + "'"});
    return next();
  }
  void expect_layout(Layout l, const std::string& what) {
    if (!peek().is_layout(l)) fail({what});
    next();
  }
  std::string expect_ident() {
    if (peek().kind != TokenKind::identifier) fail({"identifier"});
    return next().text;
  }
  std::string expect_ctor() {
    if (peek().kind != TokenKind::constructor_identifier) fail({"constructor name"});
    return next().text;
  }

  // --------------------------------------------------------- fixities

  void collect_fixities() {
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      std::string name;
      std::size_t kw = 0;
      if (toks_[i].is_punct("(") && i + 3 < toks_.size() && toks_[i + 1].kind == TokenKind::op &&
          toks_[i + 2].is_punct(")")) {
        name = toks_[i + 1].text;
        kw = i + 3;
      } else if (toks_[i].kind == TokenKind::identifier) {
        name = toks_[i].text;
        kw = i + 1;
      } else {
        continue;
      }
      if (kw >= toks_.size()) continue;
      const Token& k = toks_[kw];
      if (k.kind != TokenKind::keyword) continue;
      Assoc assoc;
      if (k.text == "infixl") assoc = Assoc::left;
      else if (k.text == "infixr") assoc = Assoc::right;
      else if (k.text == "infix") assoc = Assoc::none;
      else continue;
      int prec = 9;
      if (kw + 1 < toks_.size() && toks_[kw + 1].kind == TokenKind::integer_literal)
        prec = std::stoi(toks_[kw + 1].text);
      fixities_[name] = {assoc, prec};
    }
  }

  std::optional<OpFixity> fixity_of(const std::string& op) const {
    if (auto it = fixities_.find(op); it != fixities_.end()) return it->second;
    if (auto it = standard_fixities().find(op); it != standard_fixities().end()) return it->second;
    return std::nullopt;
  }

  OpFixity fixity_or_default(const std::string& op) const {
    if (auto f = fixity_of(op)) return *f;
    return {Assoc::left, 9};
  }

  // An infix operator in expression position.
  bool is_infix_op(const Token& t) const {
    if (t.kind == TokenKind::op) return !is_reserved_op(t);
    if (t.kind == TokenKind::identifier) {
      if (fixities_.count(t.text) != 0) return true;
      return t.text == "o" || t.text == "rem" || t.text == "mod";
    }
    return false;
  }

  // ----------------------------------------------------------- header

  void parse_header(CleanModule& m, ModuleKind expected) {
    const Token& first = peek();
    ModuleKind kind = ModuleKind::implementation;
    if (peek().is_keyword("definition") || peek().is_keyword("system")) {
      next();
      kind = ModuleKind::definition;
    } else if (peek().is_keyword("implementation")) {
      next();
    }
    expect_keyword("module");
    if (peek().kind != TokenKind::identifier && peek().kind != TokenKind::constructor_identifier)
      fail({"module name"});
    m.name = next().text;
    m.kind = kind;
    m.loc = loc_span(first, prev());
    if (kind != expected) {
      throw KindMismatch(m.loc.span,
                         std::string("module header declares a ") +
                             (kind == ModuleKind::definition ? "definition" : "implementation") +
                             " module, expected " +
                             (expected == ModuleKind::definition ? "definition" : "implementation"));
    }
    if (!is_separator(peek()) && !peek().is_layout(Layout::close)) fail({"new declaration"});
  }

  // -------------------------------------------------------- top level

  void top_item(CleanModule& m, std::vector<FunItem>& items) {
    const Token& t = peek();
    if (t.is_keyword("import") || t.is_keyword("from")) {
      parse_import(m);
    } else if (t.is_op("::")) {
      m.typedefs.push_back(typedef_decl());
    } else if (t.is_keyword("class")) {
      m.classes.push_back(class_decl());
    } else if (t.is_keyword("instance")) {
      m.instances.push_back(instance_decl());
    } else if (t.is_keyword("generic") || t.is_keyword("derive")) {
      m.generics.push_back(generic_stub());
    } else if (t.kind == TokenKind::identifier && peek(1).is_punct("{") && peek(2).is_op("|")) {
      m.generics.push_back(generic_stub());
    } else {
      items.push_back(fun_item(/*top_level=*/true));
    }
  }

  void parse_import(CleanModule& m) {
    const Token& first = next();
    if (first.is_keyword("from")) {
      ImportDecl d;
      d.module_name = module_name();
      expect_keyword("import");
      d.form = ImportForm::selective;
      d.entries = import_entries();
      d.loc = loc_span(first, prev());
      m.imports.push_back(std::move(d));
      return;
    }
    bool qualified_all = false;
    if (peek().kind == TokenKind::identifier && peek().text == "qualified") {
      next();
      qualified_all = true;
    }
    while (true) {
      ImportDecl d;
      d.module_name = module_name();
      if (peek().is_op("=>")) {
        next();
        d.form = ImportForm::selective;
        d.entries = import_entries();
      }
      if (qualified_all)
        for (auto& e : d.entries) e.qualified = true;
      d.loc = loc_span(first, prev());
      m.imports.push_back(std::move(d));
      if (!peek().is_punct(",")) break;
      next();
    }
  }

  std::string module_name() {
    if (peek().kind != TokenKind::identifier && peek().kind != TokenKind::constructor_identifier)
      fail({"module name"});
    std::string name = next().text;
    // Hierarchical names: Data.Map
    while (peek().is_op(".") && (peek(1).kind == TokenKind::constructor_identifier ||
                                 peek(1).kind == TokenKind::identifier) &&
           peek().span.start.byte_offset == prev().span.end.byte_offset) {
      next();
      name += "." + next().text;
    }
    return name;
  }

  std::vector<ImportEntry> import_entries() {
    std::vector<ImportEntry> entries;
    bool qualified = false;
    do {
      if (peek().kind == TokenKind::identifier && peek().text == "qualified") {
        next();
        qualified = true;
      }
      ImportEntry e;
      e.qualified = qualified;
      if (peek().is_op("::")) {
        next();
        e.kind = EntryKind::type;
        e.name = expect_ctor();
      } else if (peek().is_keyword("class")) {
        next();
        e.kind = EntryKind::class_;
        if (peek().kind != TokenKind::identifier && peek().kind != TokenKind::constructor_identifier)
          fail({"class name"});
        e.name = next().text;
      } else if (peek().is_punct("(") && peek(1).kind == TokenKind::op && peek(2).is_punct(")")) {
        next();
        e.name = next().text;
        next();
      } else if (peek().kind == TokenKind::identifier) {
        e.name = next().text;
      } else {
        fail({"import entry"});
      }
      entries.push_back(std::move(e));
    } while (peek().is_punct(",") && (next(), true));
    return entries;
  }

  // ------------------------------------------------------------ types

  TypeDef typedef_decl() {
    const Token& first = expect_op("::");
    TypeDef d;
    if (peek().is_op("*")) next();  // `:: *T` unique type declarations
    d.name = expect_ctor();
    while (peek().kind == TokenKind::identifier || peek().is_op("*") || peek().is_op(".")) {
      if (peek().kind != TokenKind::identifier) {
        next();
        continue;
      }
      d.type_vars.push_back(next().text);
    }
    if (peek().is_op(":==")) {
      next();
      d.body = Synonym{type()};
    } else if (peek().is_op("=:")) {
      next();
      d.body = NewtypeLike{ctor_def()};
    } else if (peek().is_op("=")) {
      next();
      if (peek().is_punct("{")) {
        d.body = record_def();
      } else {
        Algebraic alg;
        alg.ctors.push_back(ctor_def());
        while (peek().is_op("|")) {
          next();
          alg.ctors.push_back(ctor_def());
        }
        d.body = std::move(alg);
      }
    } else if (at_item_end()) {
      d.body = Abstract{};
    } else {
      fail({"':=='", "'=:'", "'='"});
    }
    d.loc = loc_span(first, prev());
    return d;
  }

  Record record_def() {
    expect_punct("{");
    Record r;
    std::set<std::string> seen;
    do {
      const Token& name_tok = peek();
      FieldDef f;
      f.name = expect_ident();
      if (!seen.insert(f.name).second)
        throw ParseError(name_tok.span, {"distinct field name"}, name_tok.text,
                         "duplicate record field '" + f.name + "'");
      expect_op("::");
      f.type = type();
      f.loc = loc_span(name_tok, prev());
      r.fields.push_back(std::move(f));
    } while (peek().is_punct(",") && (next(), true));
    expect_punct("}");
    return r;
  }

  CtorDef ctor_def() {
    const Token& first = peek();
    CtorDef c;
    if (peek().is_op("E.")) {
      next();
      c.existentials.push_back(expect_ident());
      while (peek().kind == TokenKind::identifier) c.existentials.push_back(next().text);
      expect_punct(":");
    }
    c.name = expect_ctor();
    while (starts_atype(peek())) c.args.push_back(atype());
    if (peek().is_op("&")) {
      next();
      c.context = class_context();
    }
    c.loc = loc_span(first, prev());
    return c;
  }

  bool starts_atype(const Token& t) const {
    if (t.kind == TokenKind::identifier || t.kind == TokenKind::constructor_identifier) return true;
    if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) return true;
    return t.is_op("*") || t.is_op(".") || t.is_op("!") || t.is_op("?");
  }

  Attr attribute() {
    const Token& t = peek();
    if (t.is_op("*")) {
      next();
      return Attr::unique(loc_of(t));
    }
    if (t.is_op(".")) {
      next();
      return Attr::dot(loc_of(t));
    }
    if (t.kind == TokenKind::identifier && peek(1).is_punct(":")) {
      next();
      next();
      return Attr::variable(t.text, loc_span(t, prev()));
    }
    return Attr::none();
  }

  AttrType atype() {
    const Token& first = peek();
    bool strict = false;
    if (peek().is_op("!")) {
      next();
      strict = true;
    }
    Attr attr = attribute();
    if (!strict && peek().is_op("!")) {
      next();
      strict = true;
    }
    AttrType t;
    const Token& tok = peek();
    if (tok.kind == TokenKind::constructor_identifier) {
      next();
      t = base_type(tok.text);
    } else if (tok.kind == TokenKind::identifier) {
      next();
      t = var_type(tok.text);
    } else if (tok.is_op("?")) {
      next();
      t = optional_type(atype());
    } else if (tok.is_punct("[")) {
      next();
      t = list_type(type());
      expect_punct("]");
    } else if (tok.is_punct("{")) {
      next();
      t = array_type(type());
      expect_punct("}");
    } else if (tok.is_punct("(")) {
      next();
      if (peek().is_punct(")")) {
        next();
        t = tuple_type({});
      } else if (peek().is_op("A.")) {
        next();
        std::vector<std::string> vars{expect_ident()};
        while (peek().kind == TokenKind::identifier) vars.push_back(next().text);
        expect_punct(":");
        AttrType body = type();
        expect_punct(")");
        t = AttrType{TyForall{std::move(vars), std::move(body)}, {}};
      } else {
        AttrType inner = type();
        if (peek().is_punct(",")) {
          std::vector<AttrType> elems{std::move(inner)};
          while (peek().is_punct(",")) {
            next();
            elems.push_back(type());
          }
          expect_punct(")");
          t = tuple_type(std::move(elems));
        } else {
          expect_punct(")");
          t = std::move(inner);
        }
      }
    } else {
      fail({"type"});
    }
    if (attr.kind != AttrKind::none) t.attr = attr;
    if (strict) t.strict = true;
    t.loc = loc_span(first, prev());
    return t;
  }

  // Juxtaposed atypes followed by `->` are curried arguments; without an
  // arrow they form a type application.
  AttrType type() {
    const Token& first = peek();
    if (peek().is_op("A.")) {
      next();
      std::vector<std::string> vars{expect_ident()};
      while (peek().kind == TokenKind::identifier) vars.push_back(next().text);
      expect_punct(":");
      AttrType body = type();
      AttrType t{TyForall{std::move(vars), std::move(body)}, {}};
      t.loc = loc_span(first, prev());
      return t;
    }
    std::vector<AttrType> seq;
    seq.push_back(atype());
    while (starts_atype(peek()) && !peek().is_op("!")) seq.push_back(atype());
    if (peek().is_op("->")) {
      next();
      AttrType result = type();
      for (auto it = seq.rbegin(); it != seq.rend(); ++it)
        result = function_type(std::move(*it), std::move(result));
      result.loc = loc_span(first, prev());
      return result;
    }
    return application(std::move(seq), first);
  }

  AttrType application(std::vector<AttrType> seq, const Token& first) {
    if (seq.size() == 1) return std::move(seq.front());
    AttrType head = std::move(seq.front());
    Attr attr = head.attr;
    head.attr = Attr::none();
    std::vector<AttrType> args(std::make_move_iterator(seq.begin() + 1),
                               std::make_move_iterator(seq.end()));
    AttrType t = apply_type(std::move(head), std::move(args), attr);
    t.loc = loc_span(first, prev());
    return t;
  }

  FunSig signature() {
    const Token& first = peek();
    FunSig s;
    if (peek().is_op("A.")) {
      next();
      s.quantified.push_back(expect_ident());
      while (peek().kind == TokenKind::identifier) s.quantified.push_back(next().text);
      expect_punct(":");
    }
    std::vector<AttrType> seq;
    seq.push_back(atype());
    while (starts_atype(peek())) seq.push_back(atype());
    if (peek().is_op("->")) {
      next();
      s.args = std::move(seq);
      s.result = type();
    } else {
      s.result = application(std::move(seq), first);
    }
    if (peek().is_op("|")) {
      next();
      s.context = class_context();
    }
    if (peek().is_punct(",") && peek(1).is_punct("[")) {
      next();
      s.attr_constraints = attr_constraints();
    }
    s.loc = loc_span(first, prev());
    return s;
  }

  // `C0 v0 & C1, C2 v1`
  std::vector<ClassConstraint> class_context() {
    std::vector<ClassConstraint> out;
    while (true) {
      const Token& first = peek();
      std::vector<std::string> names;
      if (peek().kind != TokenKind::constructor_identifier && peek().kind != TokenKind::identifier)
        fail({"class name"});
      names.push_back(next().text);
      while (peek().is_punct(",") &&
             (peek(1).kind == TokenKind::constructor_identifier ||
              peek(1).kind == TokenKind::identifier) &&
             !peek(2).is_op("&") && !peek(2).is_punct(",") && !at_end_of_context(2)) {
        next();
        names.push_back(next().text);
      }
      std::vector<AttrType> args;
      while (starts_atype(peek()) && !peek().is_op("!")) args.push_back(atype());
      if (args.empty()) fail({"type variable"});
      for (auto& n : names) out.push_back(ClassConstraint{n, args, loc_span(first, prev())});
      if (!peek().is_op("&")) break;
      next();
    }
    return out;
  }

  bool at_end_of_context(std::size_t k) const {
    const Token& t = peek(k);
    return t.kind == TokenKind::layout_marker || t.is_keyword("where") || t.is_op("=") ||
           (k + pos_ >= toks_.size());
  }

  // `[v<=u, w<=u]`
  std::vector<AttrConstraint> attr_constraints() {
    expect_punct("[");
    std::vector<AttrConstraint> out;
    do {
      const Token& first = peek();
      std::vector<std::string> lesser{expect_ident()};
      while (peek().kind == TokenKind::identifier) lesser.push_back(next().text);
      expect_op("<=");
      std::string greater = expect_ident();
      for (auto& l : lesser) out.push_back({l, greater, loc_span(first, prev())});
    } while (peek().is_punct(",") && (next(), true));
    expect_punct("]");
    return out;
  }

  // ---------------------------------------------------------- classes

  ClassDef class_decl() {
    const Token& first = expect_keyword("class");
    ClassDef c;
    bool op_name = false;
    if (peek().is_punct("(") && peek(1).kind == TokenKind::op && peek(2).is_punct(")")) {
      next();
      c.name = next().text;
      next();
      op_name = true;
    } else if (peek().kind == TokenKind::identifier ||
               peek().kind == TokenKind::constructor_identifier) {
      c.name = next().text;
    } else {
      fail({"class name"});
    }
    std::optional<Fixity> fix;
    if (peek().is_keyword("infixl") || peek().is_keyword("infixr") || peek().is_keyword("infix"))
      fix = fixity_decl();
    while (peek().kind == TokenKind::identifier || peek().is_op("~")) {
      ClassParam p;
      if (peek().is_op("~")) {
        next();
        p.determined = true;
      }
      p.name = expect_ident();
      c.params.push_back(std::move(p));
    }
    if (c.params.empty()) fail({"class parameter"});
    if (peek().is_op("::")) {
      next();
      ClassMember mem;
      mem.name = c.name;
      mem.is_operator = op_name;
      mem.fixity = fix;
      mem.sig = signature();
      mem.loc = loc_span(first, prev());
      c.members.push_back(std::move(mem));
      c.single_member = true;
    } else {
      if (peek().is_op("|")) {
        next();
        c.superclasses = class_context();
      }
      if (peek().is_keyword("where")) {
        next();
        block([&] { c.members.push_back(class_member()); });
      }
    }
    c.loc = loc_span(first, prev());
    return c;
  }

  ClassMember class_member() {
    const Token& first = peek();
    ClassMember m;
    if (peek().is_punct("(") && peek(1).kind == TokenKind::op && peek(2).is_punct(")")) {
      next();
      m.name = next().text;
      next();
      m.is_operator = true;
    } else {
      m.name = expect_ident();
    }
    if (peek().is_keyword("infixl") || peek().is_keyword("infixr") || peek().is_keyword("infix"))
      m.fixity = fixity_decl();
    expect_op("::");
    m.sig = signature();
    m.loc = loc_span(first, prev());
    return m;
  }

  InstanceDef instance_decl() {
    const Token& first = expect_keyword("instance");
    InstanceDef d;
    if (peek().kind != TokenKind::identifier && peek().kind != TokenKind::constructor_identifier)
      fail({"class name"});
    d.class_name = next().text;
    while (starts_atype(peek()) && !peek().is_op("!")) d.types.push_back(atype());
    if (d.types.empty()) fail({"instance type"});
    if (peek().is_op("|")) {
      next();
      d.context = class_context();
    }
    if (peek().is_keyword("where")) {
      next();
      std::vector<FunItem> items;
      block([&] { items.push_back(fun_item(false)); });
      d.members = group_functions(std::move(items), nullptr);
    }
    d.loc = loc_span(first, prev());
    return d;
  }

  // ---------------------------------------------------------- generics

  GenericStub generic_stub() {
    const Token& first = peek();
    GenericStub g;
    if (first.is_keyword("generic")) {
      next();
      g.kind = StubKind::declaration;
      g.name = expect_ident();
      if (peek().kind == TokenKind::identifier) g.kind_var = peek().text;
    } else if (first.is_keyword("derive")) {
      next();
      g.kind = StubKind::derive;
      g.name = expect_ident();
      if (peek().is_keyword("class")) next();
    } else {
      g.kind = StubKind::instance;
      g.name = next().text;
    }
    std::size_t body_start = pos_;
    int depth = 0;
    while (!at_eof()) {
      const Token& t = peek();
      if (t.is_layout(Layout::open)) ++depth;
      if (t.is_layout(Layout::close)) {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 && is_separator(t)) break;
      next();
    }
    if (g.kind == StubKind::derive) {
      for (std::size_t i = body_start; i < pos_; ++i)
        if (toks_[i].kind == TokenKind::constructor_identifier ||
            toks_[i].kind == TokenKind::identifier)
          g.derives.push_back(toks_[i].text);
    }
    g.signature_text = reconstruct(pos_of(first), pos_);
    g.loc = loc_span(first, prev());
    return g;
  }

  std::size_t pos_of(const Token& t) const { return static_cast<std::size_t>(&t - toks_.data()); }

  // Source text of tokens [from, to), with single spaces between tokens that
  // were separated in the original text.
  std::string reconstruct(std::size_t from, std::size_t to) const {
    std::string out;
    const Token* last = nullptr;
    for (std::size_t i = from; i < to; ++i) {
      const Token& t = toks_[i];
      if (t.kind == TokenKind::layout_marker) continue;
      if (last && last->span.end.byte_offset != t.span.start.byte_offset) out += ' ';
      out += t.text;
      last = &t;
    }
    return out;
  }

  void attach_derives(CleanModule& m) {
    std::vector<GenericStub> kept;
    for (auto& g : m.generics) {
      if (g.kind == StubKind::derive) {
        auto decl = std::find_if(kept.begin(), kept.end(), [&](const GenericStub& s) {
          return s.kind == StubKind::declaration && s.name == g.name;
        });
        if (decl != kept.end()) {
          decl->derives.insert(decl->derives.end(), g.derives.begin(), g.derives.end());
          decl->signature_text += "\n" + g.signature_text;
          continue;
        }
      }
      kept.push_back(std::move(g));
    }
    m.generics = std::move(kept);
  }

  // -------------------------------------------------------- functions

  Fixity fixity_decl() {
    const Token& k = next();
    Fixity f;
    f.assoc = k.text == "infixl" ? Assoc::left : k.text == "infixr" ? Assoc::right : Assoc::none;
    f.precedence = 9;
    if (peek().kind == TokenKind::integer_literal) {
      const Token& p = next();
      f.precedence = std::stoi(p.text);
      if (f.precedence < 0 || f.precedence > 9)
        throw ParseError(p.span, {"precedence 0..9"}, p.text, "precedence must be in 0..9");
    }
    return f;
  }

  bool is_body_start(const Token& t) const {
    return t.is_op("=") || t.is_op("|") || t.is_op("#") || t.is_op("#!");
  }

  bool starts_operator_name() const {
    return peek().is_punct("(") && peek(1).kind == TokenKind::op && !is_reserved_op(peek(1)) &&
           peek(2).is_punct(")");
  }

  FunItem fun_item(bool top_level) {
    const Token& first = peek();
    bool named = first.kind == TokenKind::identifier || first.is_keyword("Start");
    if ((named && (peek(1).is_op("::") || is_fixity_kw(peek(1)))) ||
        (starts_operator_name() && (peek(3).is_op("::") || is_fixity_kw(peek(3))))) {
      SigItem s;
      if (named) {
        s.name = next().text;
      } else {
        next();
        s.name = next().text;
        next();
        s.is_operator = true;
      }
      if (is_fixity_kw(peek())) s.fixity = fixity_decl();
      if (peek().is_op("::")) {
        next();
        s.sig = signature();
      }
      s.loc = loc_span(first, prev());
      return s;
    }

    ClauseItem c;
    if (starts_operator_name()) {
      next();
      c.name = next().text;
      next();
      c.is_operator = true;
      while (!is_body_start(peek())) c.clause.params.push_back(atomic_pattern());
    } else {
      Pattern head = atomic_pattern();
      if (is_infix_op(peek()) && peek().kind == TokenKind::op) {
        c.name = next().text;
        c.is_operator = true;
        c.clause.params.push_back(std::move(head));
        c.clause.params.push_back(atomic_pattern());
      } else if (auto* v = std::get_if<PVar>(&head.node)) {
        c.name = v->name;
        while (!is_body_start(peek())) {
          if (at_item_end()) fail({"'='", "'|'", "'#'"});
          c.clause.params.push_back(atomic_pattern());
        }
      } else if (!top_level) {
        PatternBinding b;
        b.pattern = std::move(head);
        b.body = guarded_body(false);
        b.loc = loc_span(first, prev());
        return b;
      } else {
        pos_ = pos_of(first);
        fail({"declaration"});
      }
    }
    c.clause.body = guarded_body(false);
    if (peek().is_keyword("where") || peek().is_keyword("with")) {
      next();
      std::vector<FunItem> items;
      block([&] { items.push_back(fun_item(false)); });
      c.clause.where_defs = local_defs(std::move(items));
    }
    c.clause.loc = loc_span(first, prev());
    c.loc = c.clause.loc;
    return c;
  }

  static bool is_fixity_kw(const Token& t) {
    return t.is_keyword("infixl") || t.is_keyword("infixr") || t.is_keyword("infix");
  }

  template <class F>
  void block(F&& item) {
    expect_layout(Layout::open, "block");
    while (true) {
      if (peek().is_layout(Layout::close)) {
        next();
        return;
      }
      if (at_eof()) fail({"end of block"});
      if (is_separator(peek())) {
        next();
        continue;
      }
      item();
      if (!is_separator(peek()) && !peek().is_layout(Layout::close)) fail({"end of block item"});
    }
  }

  std::vector<LocalDef> local_defs(std::vector<FunItem> items) {
    std::vector<LocalDef> out;
    std::vector<PatternBinding> bindings;
    std::vector<FunDef> funs = group_functions(std::move(items), &bindings);
    for (auto& f : funs) out.push_back(LocalDef{std::move(f)});
    for (auto& b : bindings) out.push_back(LocalDef{std::move(b)});
    return out;
  }

  std::vector<FunDef> group_functions(std::vector<FunItem> items,
                                      std::vector<PatternBinding>* bindings) {
    std::vector<FunDef> out;
    std::map<std::string, std::size_t> index;
    auto slot = [&](const std::string& name, bool is_op, const Loc& loc) -> FunDef& {
      auto it = index.find(name);
      if (it != index.end()) return out[it->second];
      index[name] = out.size();
      FunDef f;
      f.name = name;
      f.is_operator = is_op;
      f.loc = loc;
      out.push_back(std::move(f));
      return out.back();
    };
    for (auto& item : items) {
      if (auto* s = std::get_if<SigItem>(&item)) {
        FunDef& f = slot(s->name, s->is_operator, s->loc);
        if (s->sig) {
          if (f.sig) throw ParseError(s->loc.span, {"single signature"}, s->name,
                                      "duplicate type signature for '" + s->name + "'");
          f.sig = std::move(s->sig);
        }
        if (s->fixity) f.fixity = s->fixity;
      } else if (auto* c = std::get_if<ClauseItem>(&item)) {
        FunDef& f = slot(c->name, c->is_operator, c->loc);
        if (!f.clauses.empty() && f.clauses.front().params.size() != c->clause.params.size())
          throw ParseError(c->loc.span, {std::to_string(f.clauses.front().params.size()) + " arguments"},
                           c->name,
                           "clauses of '" + c->name + "' have different numbers of arguments");
        f.clauses.push_back(std::move(c->clause));
      } else if (bindings) {
        bindings->push_back(std::move(std::get<PatternBinding>(item)));
      }
    }
    for (auto& f : out) normalize_arity(f);
    return out;
  }

  // Moves result arrows into the argument list so that the signature's
  // argument count equals the clause arity.
  void normalize_arity(FunDef& f) {
    if (!f.sig || f.clauses.empty()) return;
    std::size_t arity = f.clauses.front().params.size();
    FunSig& s = *f.sig;
    while (s.args.size() < arity) {
      auto* fn = std::get_if<TyFunction>(&s.result.shape);
      if (!fn || s.result.attr.kind != AttrKind::none) break;
      AttrType arg = std::move(*fn->arg);
      AttrType res = std::move(*fn->result);
      s.args.push_back(std::move(arg));
      s.result = std::move(res);
    }
    if (s.args.size() != arity)
      throw ParseError(f.clauses.front().loc.span,
                       {std::to_string(s.args.size()) + " arguments"}, f.name,
                       "'" + f.name + "' is defined with " + std::to_string(arity) +
                           " arguments but its type has " + std::to_string(s.args.size()));
  }

  GuardedBody guarded_body(bool alternative) {
    GuardedBody b;
    while (peek().is_op("#") || peek().is_op("#!")) {
      const Token& first = next();
      LetBefore l;
      l.strict = first.text == "#!";
      l.pattern = pattern();
      expect_op("=");
      l.value = expr();
      l.loc = loc_span(first, prev());
      b.lets.push_back(std::move(l));
    }
    auto arrow = [&] {
      if (peek().is_op("=") || (alternative && peek().is_op("->"))) {
        next();
        return;
      }
      fail(alternative ? std::vector<std::string>{"'->'", "'='"} : std::vector<std::string>{"'='"});
    };
    if (peek().is_op("|")) {
      std::vector<GuardAlt> guards;
      while (peek().is_op("|")) {
        const Token& first = next();
        GuardAlt g;
        g.guard = expr();
        arrow();
        g.body = expr();
        g.loc = loc_span(first, prev());
        guards.push_back(std::move(g));
      }
      if (peek().is_op("=") || (alternative && peek().is_op("->"))) {
        const Token& first = peek();
        arrow();
        GuardAlt g;
        g.body = expr();
        g.loc = loc_span(first, prev());
        guards.push_back(std::move(g));
      }
      b.rhs = std::move(guards);
    } else {
      arrow();
      b.rhs = expr();
    }
    return b;
  }

  // --------------------------------------------------------- patterns

  Pattern pattern() {
    const Token& first = peek();
    if (first.kind == TokenKind::constructor_identifier) {
      next();
      PCtor c{first.text, {}};
      while (starts_atomic_pattern(peek())) c.args.push_back(atomic_pattern());
      return make_pattern(std::move(c), loc_span(first, prev()));
    }
    if (first.is_op("?") && peek(1).kind == TokenKind::constructor_identifier &&
        (peek(1).text == "Just" || peek(1).text == "None")) {
      next();
      next();
      PCtor c{"?" + prev().text, {}};
      while (starts_atomic_pattern(peek())) c.args.push_back(atomic_pattern());
      return make_pattern(std::move(c), loc_span(first, prev()));
    }
    return atomic_pattern();
  }

  bool starts_atomic_pattern(const Token& t) const {
    if (t.kind == TokenKind::identifier || t.kind == TokenKind::constructor_identifier ||
        is_literal(t))
      return true;
    if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) return true;
    return t.is_op("?") && peek(1).kind == TokenKind::constructor_identifier;
  }

  Pattern atomic_pattern() {
    const Token& first = peek();
    if (first.kind == TokenKind::identifier || first.is_keyword("Start")) {
      next();
      if (first.text == "_") return make_pattern(PWildcard{}, loc_of(first));
      if (peek().is_op("=:")) {
        next();
        Pattern inner = atomic_pattern();
        return make_pattern(PAs{first.text, std::move(inner)}, loc_span(first, prev()));
      }
      return make_pattern(PVar{first.text}, loc_of(first));
    }
    if (first.kind == TokenKind::constructor_identifier) {
      next();
      return make_pattern(PCtor{first.text, {}}, loc_of(first));
    }
    if (is_literal(first)) {
      next();
      return make_pattern(PLiteral{{literal_kind(first.kind), first.text}}, loc_of(first));
    }
    if (first.is_op("?") && peek(1).kind == TokenKind::constructor_identifier) {
      next();
      const Token& c = next();
      return make_pattern(PCtor{"?" + c.text, {}}, loc_span(first, c));
    }
    if (first.is_punct("(")) {
      next();
      if (peek().is_punct(")")) {
        next();
        return make_pattern(PTuple{}, loc_span(first, prev()));
      }
      Pattern p = pattern();
      if (peek().is_op("::")) {
        next();
        auto* v = std::get_if<PVar>(&p.node);
        if (!v) throw ParseError(p.loc.span, {"variable"}, "",
                                 "dynamic type patterns must bind a variable");
        std::string var = v->name;
        AttrType t = type();
        expect_punct(")");
        return make_pattern(PDynamic{var, std::move(t)}, loc_span(first, prev()));
      }
      if (peek().is_punct(",")) {
        std::vector<Pattern> elems{std::move(p)};
        while (peek().is_punct(",")) {
          next();
          elems.push_back(pattern());
        }
        expect_punct(")");
        return make_pattern(PTuple{std::move(elems)}, loc_span(first, prev()));
      }
      expect_punct(")");
      p.loc = loc_span(first, prev());
      return p;
    }
    if (first.is_punct("[")) {
      next();
      if (peek().is_punct("]")) {
        next();
        return make_pattern(PList{}, loc_span(first, prev()));
      }
      std::vector<Pattern> elems{pattern()};
      while (peek().is_punct(",")) {
        next();
        elems.push_back(pattern());
      }
      if (peek().is_punct(":")) {
        next();
        Pattern tail = pattern();
        expect_punct("]");
        return make_pattern(PCons{std::move(elems), std::move(tail)}, loc_span(first, prev()));
      }
      expect_punct("]");
      return make_pattern(PList{std::move(elems)}, loc_span(first, prev()));
    }
    if (first.is_punct("{")) {
      next();
      PRecord r;
      if (peek().kind == TokenKind::constructor_identifier && peek(1).is_op("|")) {
        r.type_name = next().text;
        next();
      }
      do {
        FieldPattern f;
        f.name = expect_ident();
        if (peek().is_op("=")) {
          next();
          f.pattern = pattern();
        }
        r.fields.push_back(std::move(f));
      } while (peek().is_punct(",") && (next(), true));
      expect_punct("}");
      return make_pattern(std::move(r), loc_span(first, prev()));
    }
    fail({"pattern"});
  }

  // ------------------------------------------------------ expressions

  bool starts_atom(const Token& t) const {
    if (t.kind == TokenKind::identifier) return !is_infix_op(t);
    if (t.kind == TokenKind::constructor_identifier || is_literal(t)) return true;
    if (t.is_keyword("Start")) return true;
    if (t.is_punct("(") || t.is_punct("[") || t.is_punct("{")) return true;
    return t.is_op("?") && peek(1).kind == TokenKind::constructor_identifier;
  }

  Expr expr() {
    std::vector<Expr> operands;
    std::vector<const Token*> ops;
    operands.push_back(operand());
    while (is_infix_op(peek())) {
      ops.push_back(&next());
      operands.push_back(operand());
    }
    if (ops.empty()) return std::move(operands.front());
    return resolve(std::move(operands), ops);
  }

  // Precedence climbing over a flat operand/operator sequence.
  Expr resolve(std::vector<Expr> operands, const std::vector<const Token*>& ops) {
    std::size_t i = 0;
    std::size_t next_operand = 1;
    Expr lhs = std::move(operands[0]);
    return climb(std::move(lhs), 0, operands, ops, i, next_operand);
  }

  Expr climb(Expr lhs, int min_prec, std::vector<Expr>& operands,
             const std::vector<const Token*>& ops, std::size_t& i, std::size_t& k) {
    while (i < ops.size()) {
      OpFixity f = fixity_or_default(ops[i]->text);
      if (f.precedence < min_prec) break;
      const Token* op = ops[i++];
      Expr rhs = std::move(operands[k++]);
      while (i < ops.size()) {
        OpFixity g = fixity_or_default(ops[i]->text);
        if (g.precedence > f.precedence ||
            (g.precedence == f.precedence && g.assoc == Assoc::right && f.assoc == Assoc::right)) {
          rhs = climb(std::move(rhs), g.precedence > f.precedence ? f.precedence + 1 : f.precedence,
                      operands, ops, i, k);
        } else {
          break;
        }
      }
      Loc loc{{lhs.loc.span.start, rhs.loc.span.end}};
      lhs = make_expr(EInfix{op->text, std::move(lhs), std::move(rhs)}, loc);
    }
    return lhs;
  }

  Expr operand() {
    Expr e = application();
    if (peek().is_op("=:")) {
      next();
      Pattern p = pattern();
      Loc loc{{e.loc.span.start, prev().span.end}};
      e = make_expr(EAsPredicate{std::move(e), std::move(p)}, loc);
    }
    return e;
  }

  Expr application() {
    const Token& first = peek();
    if (first.is_op("\\")) {
      next();
      std::vector<Pattern> params;
      while (!peek().is_op("->") && !peek().is_op(".") && !peek().is_op("=")) {
        if (at_item_end()) fail({"'->'"});
        params.push_back(atomic_pattern());
      }
      if (params.empty()) fail({"lambda parameter"});
      next();
      Expr body = expr();
      return make_expr(ELambda{std::move(params), std::move(body)}, loc_span(first, prev()));
    }
    if (first.is_keyword("if")) {
      next();
      Expr c = argument();
      Expr t = argument();
      Expr e = argument();
      return make_expr(EIf{std::move(c), std::move(t), std::move(e)}, loc_span(first, prev()));
    }
    if (first.is_keyword("case")) {
      next();
      Expr scrut = expr();
      expect_keyword("of");
      std::vector<Alt> alts;
      block([&] {
        const Token& a = peek();
        Alt alt;
        alt.pattern = pattern();
        GuardedBody b = guarded_body(true);
        if (!b.lets.empty()) fail({"'->'"});
        alt.rhs = std::move(b.rhs);
        alt.loc = loc_span(a, prev());
        alts.push_back(std::move(alt));
      });
      if (alts.empty()) fail({"case alternative"});
      return make_expr(ECase{std::move(scrut), std::move(alts)}, loc_span(first, prev()));
    }
    if (first.is_keyword("let")) {
      next();
      std::vector<FunItem> items;
      block([&] { items.push_back(fun_item(false)); });
      expect_keyword("in");
      Expr body = expr();
      return make_expr(ELet{local_defs(std::move(items)), std::move(body)}, loc_span(first, prev()));
    }
    if (first.is_keyword("dynamic")) {
      next();
      Expr v = application();
      return make_expr(EDynamic{std::move(v)}, loc_span(first, prev()));
    }
    Expr fn = argument();
    std::vector<Expr> args;
    while (starts_atom(peek())) args.push_back(argument());
    if (args.empty()) return fn;
    return make_expr(EApply{std::move(fn), std::move(args)}, loc_span(first, prev()));
  }

  // Atom followed by selections `.f`, `.[i]`, `!f`, `![i]`.
  Expr argument() {
    const Token& first = peek();
    Expr e = atom();
    while (true) {
      bool unique = peek().is_op("!");
      if (!peek().is_op(".") && !unique) break;
      if (peek().span.start.byte_offset != prev().span.end.byte_offset) break;
      const Token& sel = peek(1);
      if (sel.is_punct("[")) {
        next();
        next();
        Expr idx = expr();
        expect_punct("]");
        Loc loc = loc_span(first, prev());
        if (unique) e = make_expr(EUniqueIndex{std::move(e), std::move(idx)}, loc);
        else e = make_expr(EIndex{std::move(e), std::move(idx)}, loc);
      } else if (sel.kind == TokenKind::identifier) {
        next();
        std::string field = next().text;
        Loc loc = loc_span(first, prev());
        if (unique) e = make_expr(EUniqueSelect{std::move(e), field}, loc);
        else e = make_expr(ESelect{std::move(e), field}, loc);
      } else {
        break;
      }
    }
    return e;
  }

  Expr atom() {
    const Token& first = peek();
    if (first.kind == TokenKind::identifier || first.is_keyword("Start")) {
      next();
      return make_expr(EVar{first.text}, loc_of(first));
    }
    if (first.kind == TokenKind::constructor_identifier) {
      next();
      return make_expr(ECtor{first.text}, loc_of(first));
    }
    if (is_literal(first)) {
      next();
      return make_expr(ELiteral{{literal_kind(first.kind), first.text}}, loc_of(first));
    }
    if (first.is_op("?") && peek(1).kind == TokenKind::constructor_identifier) {
      next();
      const Token& c = next();
      return make_expr(ECtor{"?" + c.text}, loc_span(first, c));
    }
    if (first.is_punct("(")) return paren_expr();
    if (first.is_punct("[")) return bracket_expr();
    if (first.is_punct("{")) return brace_expr();
    fail({"expression"});
  }

  Expr paren_expr() {
    const Token& first = next();
    if (peek().is_punct(")")) {
      next();
      return make_expr(ETuple{}, loc_span(first, prev()));
    }
    if (peek().kind == TokenKind::op && !is_reserved_op(peek()) && peek(1).is_punct(")")) {
      const Token& op = next();
      next();
      return make_expr(EVar{op.text}, loc_span(first, prev()));
    }
    Expr e = expr();
    if (peek().is_punct(",")) {
      std::vector<Expr> elems{std::move(e)};
      while (peek().is_punct(",")) {
        next();
        elems.push_back(expr());
      }
      expect_punct(")");
      return make_expr(ETuple{std::move(elems)}, loc_span(first, prev()));
    }
    expect_punct(")");
    e.loc = loc_span(first, prev());
    return e;
  }

  Expr bracket_expr() {
    const Token& first = next();
    if (peek().is_punct("]")) {
      next();
      return make_expr(EList{}, loc_span(first, prev()));
    }
    Expr e = expr();
    if (peek().is_op("\\\\")) {
      next();
      std::vector<Qualifier> quals = qualifiers();
      expect_punct("]");
      return make_expr(EComprehension{std::move(e), std::move(quals), false},
                       loc_span(first, prev()));
    }
    if (peek().is_op("..")) {
      next();
      std::optional<Box<Expr>> to;
      if (!peek().is_punct("]")) to = Box<Expr>(expr());
      expect_punct("]");
      return make_expr(ERange{std::move(e), std::move(to)}, loc_span(first, prev()));
    }
    std::vector<Expr> elems{std::move(e)};
    while (peek().is_punct(",")) {
      next();
      elems.push_back(expr());
    }
    if (peek().is_punct(":")) {
      next();
      Expr tail = expr();
      expect_punct("]");
      return make_expr(ECons{std::move(elems), std::move(tail)}, loc_span(first, prev()));
    }
    expect_punct("]");
    return make_expr(EList{std::move(elems)}, loc_span(first, prev()));
  }

  std::vector<Qualifier> qualifiers() {
    std::vector<Qualifier> out;
    do {
      Qualifier q;
      q.parallel.push_back(generator());
      while (peek().is_op("&")) {
        next();
        q.parallel.push_back(generator());
      }
      if (peek().is_op("|")) {
        next();
        q.guard = expr();
      }
      out.push_back(std::move(q));
    } while (peek().is_punct(",") && (next(), true));
    return out;
  }

  Generator generator() {
    Generator g;
    g.pattern = pattern();
    if (peek().is_op("<-")) {
      next();
    } else if (peek().is_op("<-:")) {
      next();
      g.from_array = true;
    } else {
      fail({"'<-'", "'<-:'"});
    }
    g.source = expr();
    return g;
  }

  std::vector<FieldInit> field_inits() {
    std::vector<FieldInit> out;
    do {
      FieldInit f;
      f.name = expect_ident();
      expect_op("=");
      f.value = expr();
      out.push_back(std::move(f));
    } while (peek().is_punct(",") && (next(), true));
    return out;
  }

  Expr brace_expr() {
    const Token& first = next();
    if (peek().is_punct("}")) {
      next();
      return make_expr(EArray{}, loc_span(first, prev()));
    }
    if (peek().kind == TokenKind::constructor_identifier && peek(1).is_op("|")) {
      std::string type_name = next().text;
      next();
      ERecord r{type_name, field_inits()};
      expect_punct("}");
      return make_expr(std::move(r), loc_span(first, prev()));
    }
    if (peek().kind == TokenKind::identifier && peek(1).is_op("=")) {
      ERecord r{std::nullopt, field_inits()};
      expect_punct("}");
      return make_expr(std::move(r), loc_span(first, prev()));
    }
    Expr e = expr();
    if (peek().is_op("&")) {
      next();
      if (peek().is_punct("[")) {
        std::vector<ArrayAssign> updates;
        do {
          expect_punct("[");
          Expr idx = expr();
          expect_punct("]");
          expect_op("=");
          Expr v = expr();
          updates.push_back({std::move(idx), std::move(v)});
        } while (peek().is_punct(",") && (next(), true));
        expect_punct("}");
        return make_expr(EArrayUpdate{std::move(e), std::move(updates)}, loc_span(first, prev()));
      }
      ERecordUpdate u{std::move(e), field_inits()};
      expect_punct("}");
      return make_expr(std::move(u), loc_span(first, prev()));
    }
    if (peek().is_op("\\\\")) {
      next();
      std::vector<Qualifier> quals = qualifiers();
      expect_punct("}");
      return make_expr(EComprehension{std::move(e), std::move(quals), true},
                       loc_span(first, prev()));
    }
    std::vector<Expr> elems{std::move(e)};
    while (peek().is_punct(",")) {
      next();
      elems.push_back(expr());
    }
    expect_punct("}");
    return make_expr(EArray{std::move(elems)}, loc_span(first, prev()));
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  Token eof_;
  std::map<std::string, OpFixity> fixities_;
};

// Layout for a standalone fragment: drop the outer module block and its
// top-level separators.
std::vector<Token> fragment_tokens(std::string_view source) {
  std::vector<Token> laid = layout_insert(tokenize(source));
  std::vector<Token> out;
  int depth = 0;
  for (auto& t : laid) {
    if (t.kind == TokenKind::layout_marker) {
      if (t.layout == Layout::open) {
        if (depth++ == 0) continue;
      } else if (t.layout == Layout::close) {
        if (--depth == 0) continue;
      } else if (t.layout == Layout::separator && depth == 1) {
        continue;
      }
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace

CleanModule parse_module(const std::vector<Token>& tokens, ModuleKind expected_kind) {
  return Parser(tokens).module(expected_kind);
}

CleanModule parse_source(std::string_view source, ModuleKind expected_kind) {
  return parse_module(layout_insert(tokenize(source)), expected_kind);
}

Expr parse_expr(std::string_view source) {
  auto toks = fragment_tokens(source);
  return Parser(toks).standalone_expr();
}

Expr parse_expr(const std::vector<Token>& tokens) { return Parser(tokens).standalone_expr(); }

AttrType parse_type(std::string_view source) {
  auto toks = fragment_tokens(source);
  return Parser(toks).standalone_type();
}

AttrType parse_type(const std::vector<Token>& tokens) { return Parser(tokens).standalone_type(); }

FunSig parse_signature(std::string_view source) {
  auto toks = fragment_tokens(source);
  return Parser(toks).standalone_sig();
}

Pattern parse_pattern(std::string_view source) {
  auto toks = fragment_tokens(source);
  return Parser(toks).standalone_pattern();
}

}  // namespace clean2hs
