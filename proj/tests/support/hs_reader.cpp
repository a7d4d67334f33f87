#include "hs_reader.hpp"

#include <cctype>
#include <functional>
#include <map>

namespace testsupport {

using namespace clean2hs::hs;

namespace {

// ------------------------------------------------------------------ lexer

enum class K { varid, conid, sym, reserved, keyword, integer, real, chr, str, special, pragma, comment, eof };

struct Tok {
  K kind = K::eof;
  std::string text;
  int line = 0;
  int col = 0;
  bool bol = false;  // first token on its line
};

const char* kSymbols = "!#$%&*+./<=>?@\\^|-~:";

bool is_sym(char c) { return c != 0 && std::string_view(kSymbols).find(c) != std::string_view::npos; }
bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

bool is_keyword(const std::string& s) {
  static const char* kws[] = {"case",   "class",  "data",   "deriving", "do",       "else",
                              "if",     "import", "in",     "infix",    "infixl",   "infixr",
                              "instance", "let",  "module", "newtype",  "of",       "then",
                              "type",   "where"};
  for (auto* k : kws)
    if (s == k) return true;
  return false;
}

bool is_reserved_op(const std::string& s) {
  return s == ".." || s == "::" || s == "=" || s == "\\" || s == "|" || s == "<-" || s == "->" ||
         s == "@" || s == "=>";
}

std::string trim_one(std::string s) {
  if (!s.empty() && s.front() == ' ') s.erase(0, 1);
  if (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : s_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> out;
    bool bol = true;
    while (true) {
      skip_space(bol);
      if (i_ >= s_.size()) break;
      Tok t;
      t.line = line_;
      t.col = col_;
      t.bol = bol;
      bol = false;
      char c = s_[i_];
      if (starts("{-#")) {
        std::size_t end = s_.find("#-}", i_);
        if (end == std::string_view::npos) fail("unterminated pragma");
        t.kind = K::pragma;
        t.text = std::string(s_.substr(i_ + 3, end - i_ - 3));
        advance(end + 3 - i_);
      } else if (starts("{-")) {
        std::size_t start = i_;
        nested_comment();
        if (!t.bol || t.col != 1) continue;
        t.kind = K::comment;
        t.text = trim_one(std::string(s_.substr(start + 2, i_ - start - 4)));
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && negative_literal_allowed() && i_ + 1 < s_.size() &&
                  std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
        number(t);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        name(t);
      } else if (c == '\'') {
        quoted(t, '\'', K::chr);
      } else if (c == '"') {
        quoted(t, '"', K::str);
      } else if (std::string_view("()[]{},;`").find(c) != std::string_view::npos) {
        t.kind = K::special;
        t.text = std::string(1, c);
        advance(1);
      } else if (is_sym(c)) {
        std::size_t j = i_;
        while (j < s_.size() && is_sym(s_[j])) ++j;
        t.text = std::string(s_.substr(i_, j - i_));
        t.kind = is_reserved_op(t.text) ? K::reserved : K::sym;
        advance(j - i_);
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(t));
    }
    Tok eof;
    eof.line = line_ + 1;
    eof.col = 0;
    eof.bol = true;
    out.push_back(eof);
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ReadError(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg);
  }

  bool starts(std::string_view p) const { return s_.substr(i_, p.size()) == p; }

  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < s_.size(); ++k, ++i_) {
      if (s_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space(bool& bol) {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n') {
        bol = true;
        advance(1);
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else if (starts("--")) {
        std::size_t j = i_;
        while (j < s_.size() && s_[j] == '-') ++j;
        if (j < s_.size() && is_sym(s_[j])) return;
        while (i_ < s_.size() && s_[i_] != '\n') advance(1);
      } else {
        return;
      }
    }
  }

  void nested_comment() {
    int depth = 0;
    do {
      if (i_ >= s_.size()) fail("unterminated comment");
      if (starts("{-")) {
        ++depth;
        advance(2);
      } else if (starts("-}")) {
        --depth;
        advance(2);
      } else {
        advance(1);
      }
    } while (depth > 0);
  }

  // A minus directly before a digit starts a negative literal when it
  // follows whitespace or an opening bracket.
  bool negative_literal_allowed() const {
    if (i_ == 0) return true;
    char before = s_[i_ - 1];
    return before == ' ' || before == '\n' || before == '(' || before == '[' || before == ',';
  }

  void number(Tok& t) {
    std::size_t j = i_;
    if (s_[j] == '-') ++j;
    auto digits = [&](auto pred) {
      while (j < s_.size() && pred(s_[j])) ++j;
    };
    auto dec = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
    t.kind = K::integer;
    if (s_[j] == '0' && j + 1 < s_.size() && (s_[j + 1] == 'o' || s_[j + 1] == 'O')) {
      j += 2;
      digits([](char c) { return c >= '0' && c <= '7'; });
    } else if (s_[j] == '0' && j + 1 < s_.size() && (s_[j + 1] == 'x' || s_[j + 1] == 'X')) {
      j += 2;
      digits([](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
    } else {
      digits(dec);
      if (j + 1 < s_.size() && s_[j] == '.' && dec(s_[j + 1])) {
        t.kind = K::real;
        ++j;
        digits(dec);
      }
      if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && dec(s_[k])) {
          t.kind = K::real;
          j = k;
          digits(dec);
        }
      }
    }
    t.text = std::string(s_.substr(i_, j - i_));
    advance(j - i_);
  }

  void name(Tok& t) {
    std::size_t j = i_;
    std::string text;
    while (true) {
      std::size_t k = j;
      while (k < s_.size() && is_ident(s_[k])) ++k;
      std::string part(s_.substr(j, k - j));
      text += part;
      bool module_part = std::isupper(static_cast<unsigned char>(part[0])) != 0;
      if (module_part && k + 1 < s_.size() && s_[k] == '.' &&
          (std::isalpha(static_cast<unsigned char>(s_[k + 1])) || s_[k + 1] == '_')) {
        text += ".";
        j = k + 1;
        continue;
      }
      j = k;
      break;
    }
    t.text = text;
    std::size_t last = text.rfind('.');
    std::string base = last == std::string::npos ? text : text.substr(last + 1);
    if (text == "_")
      t.kind = K::reserved;
    else if (is_keyword(text))
      t.kind = K::keyword;
    else
      t.kind = std::isupper(static_cast<unsigned char>(base[0])) ? K::conid : K::varid;
    advance(j - i_);
  }

  void quoted(Tok& t, char q, K kind) {
    std::size_t j = i_ + 1;
    while (j < s_.size() && s_[j] != q) {
      if (s_[j] == '\\') ++j;
      if (s_[j] == '\n') fail("newline in literal");
      ++j;
    }
    if (j >= s_.size()) fail("unterminated literal");
    t.kind = kind;
    t.text = std::string(s_.substr(i_, j + 1 - i_));
    advance(j + 1 - i_);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ------------------------------------------------------------------ fixity

FixityDecl standard_fixity(const std::string& op) {
  struct Row {
    Assoc a;
    int p;
    std::vector<std::string> ops;
  };
  static const std::vector<Row> rows = {
      {Assoc::right, 9, {"."}},
      {Assoc::left, 9, {"!!", "!", "//"}},
      {Assoc::right, 8, {"^", "^^", "**"}},
      {Assoc::left, 7, {"*", "/", "quot", "rem", "div", "mod"}},
      {Assoc::left, 6, {"+", "-"}},
      {Assoc::right, 6, {"<>"}},
      {Assoc::right, 5, {":", "++"}},
      {Assoc::none, 4, {"==", "/=", "<", "<=", ">=", ">", "elem", "notElem"}},
      {Assoc::left, 4, {"<$>", "<$", "<*>", "*>", "<*"}},
      {Assoc::right, 3, {"&&"}},
      {Assoc::right, 2, {"||"}},
      {Assoc::left, 1, {">>", ">>="}},
      {Assoc::right, 1, {"=<<"}},
      {Assoc::right, 0, {"$", "$!", "seq"}},
  };
  for (auto& r : rows)
    for (auto& o : r.ops)
      if (o == op) return FixityDecl{r.a, r.p, op};
  return FixityDecl{Assoc::left, 9, op};
}

// ------------------------------------------------------------------ parser

Literal literal_of(const Tok& t, bool overloaded_strings) {
  Literal l;
  l.text = t.text;
  switch (t.kind) {
    case K::integer: l.kind = LitKind::integer; break;
    case K::real: l.kind = LitKind::real; break;
    case K::chr: l.kind = LitKind::character; break;
    default:
      l.kind = LitKind::string;
      l.overloaded = overloaded_strings;
      break;
  }
  return l;
}

bool is_literal(const Tok& t) {
  return t.kind == K::integer || t.kind == K::real || t.kind == K::chr || t.kind == K::str;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : t_(std::move(toks)) { scan_fixities(); }

  bool overloaded_strings = false;

  // ------------------------------------------------------ token access

  const Tok& raw() const { return t_[pos_]; }

  bool boundary(std::size_t i) const {
    if (ctx_.empty()) return false;
    const Ctx& c = ctx_.back();
    return c.col > 0 && i != c.start && t_[i].bol && t_[i].col <= c.col;
  }

  const Tok& peek() const { return boundary(pos_) ? eof_ : t_[pos_]; }
  const Tok& peek_at(std::size_t k) const {
    for (std::size_t i = pos_; i <= pos_ + k && i < t_.size(); ++i)
      if (boundary(i)) return eof_;
    return pos_ + k < t_.size() ? t_[pos_ + k] : eof_;
  }
  const Tok& next() {
    const Tok& t = peek();
    if (t.kind == K::eof) fail("unexpected end of block");
    return t_[pos_++];
  }
  bool at_end() const { return peek().kind == K::eof; }

  bool is(const Tok& t, K k, std::string_view text) const { return t.kind == k && t.text == text; }
  bool peek_is(K k, std::string_view text) const { return is(peek(), k, text); }
  bool special(std::string_view s) const { return peek_is(K::special, s); }
  bool reserved(std::string_view s) const { return peek_is(K::reserved, s); }
  bool keyword(std::string_view s) const { return peek_is(K::keyword, s); }

  void expect(K k, std::string_view text) {
    if (!peek_is(k, text)) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  std::string expect_kind(K k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = t_[pos_];
    throw ReadError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg +
                    " (found '" + t.text + "')");
  }

  // ------------------------------------------------------ blocks

  struct Ctx {
    int col;
    std::size_t start;
  };

  template <class F>
  void block(F&& item) {
    if (special("{")) {
      ++pos_;
      ctx_.push_back({0, pos_});
      if (!special("}")) {
        item();
        while (special(";")) {
          ++pos_;
          item();
        }
      }
      ctx_.pop_back();
      expect(K::special, "}");
      return;
    }
    if (at_end()) return;
    int col = raw().col;
    ctx_.push_back({col, pos_});
    while (true) {
      item();
      const Tok& t = raw();
      if (t.kind == K::eof || !t.bol || t.col != col || is(t, K::keyword, "where")) break;
      ctx_.back().start = pos_;
    }
    ctx_.pop_back();
  }

  // ------------------------------------------------------ module

  HsModule module() {
    HsModule m;
    while (peek().kind == K::pragma) pragma(m, next().text);
    overloaded_strings = m.pragmas.count(Extension::OverloadedStrings) != 0;
    expect(K::keyword, "module");
    m.name = expect_kind(K::conid, "module name");
    if (special("(")) {
      ++pos_;
      std::vector<ExportItem> items;
      while (!special(")")) {
        ExportItem e;
        e.name = item_name();
        e.all = dotdot();
        items.push_back(e);
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, ")");
      m.exports = std::move(items);
    }
    expect(K::keyword, "where");
    std::vector<Decl> decls;
    block([&] {
      if (keyword("import"))
        m.imports.push_back(import());
      else
        decls.push_back(decl(true));
    });
    if (raw().kind != K::eof) fail("trailing input");
    m.decls = group(std::move(decls));
    return m;
  }

  void pragma(HsModule& m, const std::string& text) {
    std::string body = text;
    auto trim = [](std::string s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
      return s;
    };
    body = trim(body);
    if (body.rfind("LANGUAGE", 0) != 0) fail("unknown pragma");
    body = body.substr(8);
    std::size_t start = 0;
    while (start <= body.size()) {
      std::size_t comma = body.find(',', start);
      std::string name = trim(body.substr(start, comma == std::string::npos ? std::string::npos
                                                                              : comma - start));
      auto e = extension_from_string(name);
      if (!e) fail("unknown extension " + name);
      m.pragmas.insert(*e);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  std::string item_name() {
    if (special("(")) {
      ++pos_;
      if (peek().kind != K::sym) fail("expected operator");
      std::string op = next().text;
      expect(K::special, ")");
      return op;
    }
    if (peek().kind == K::varid || peek().kind == K::conid) return next().text;
    fail("expected name");
  }

  bool dotdot() {
    if (special("(") && is(peek_at(1), K::reserved, "..")) {
      pos_ += 2;
      expect(K::special, ")");
      return true;
    }
    return false;
  }

  Import import() {
    expect(K::keyword, "import");
    Import i;
    if (peek_is(K::varid, "qualified")) {
      ++pos_;
      i.qualified = true;
    }
    i.module = expect_kind(K::conid, "module name");
    if (peek_is(K::varid, "hiding")) {
      ++pos_;
      i.hiding = true;
    }
    if (special("(")) {
      ++pos_;
      std::vector<ImportItem> items;
      while (!special(")")) {
        ImportItem it;
        it.name = item_name();
        it.all = dotdot();
        items.push_back(it);
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, ")");
      i.items = std::move(items);
    }
    return i;
  }

  // Consecutive clauses of one function form one binding.
  static std::vector<Decl> group(std::vector<Decl> decls) {
    std::vector<Decl> out;
    for (auto& d : decls) {
      auto* f = std::get_if<FunBind>(&d.node);
      if (f && !out.empty()) {
        auto* prev = std::get_if<FunBind>(&out.back().node);
        if (prev && prev->name == f->name && !f->matches.empty() &&
            prev->matches.back().params.size() == f->matches.front().params.size() &&
            !f->matches.front().params.empty()) {
          for (auto& m : f->matches) prev->matches.push_back(std::move(m));
          continue;
        }
      }
      out.push_back(std::move(d));
    }
    return out;
  }

  std::vector<Decl> decl_block() {
    std::vector<Decl> ds;
    block([&] { ds.push_back(decl(false)); });
    return group(std::move(ds));
  }

  // ------------------------------------------------------ declarations

  Decl decl(bool top) {
    const Tok& t = peek();
    if (t.kind == K::comment) return Decl{Comment{next().text}};
    if (t.kind == K::keyword) {
      if (t.text == "infixl" || t.text == "infixr" || t.text == "infix") return fixity();
      if (top && (t.text == "data" || t.text == "newtype")) return data();
      if (top && t.text == "type") return synonym();
      if (top && t.text == "class") return class_decl();
      if (top && t.text == "instance") return instance();
    }
    if (is_sig_start()) return type_sig();
    if (t.kind == K::varid || is_paren_op(0)) return fun_clause();
    return pat_bind();
  }

  bool is_paren_op(std::size_t k) const {
    return is(peek_at(k), K::special, "(") && peek_at(k + 1).kind == K::sym &&
           is(peek_at(k + 2), K::special, ")");
  }

  bool is_sig_start() const {
    if (peek().kind == K::varid) return is(peek_at(1), K::reserved, "::");
    if (is_paren_op(0)) return is(peek_at(3), K::reserved, "::");
    return false;
  }

  std::string value_binder() {
    if (is_paren_op(0)) {
      ++pos_;
      std::string op = next().text;
      ++pos_;
      return op;
    }
    return expect_kind(K::varid, "variable");
  }

  Decl fixity() {
    std::string kw = next().text;
    FixityDecl f;
    f.assoc = kw == "infixl" ? Assoc::left : kw == "infixr" ? Assoc::right : Assoc::none;
    f.precedence = std::stoi(expect_kind(K::integer, "precedence"));
    f.op = operator_token();
    return Decl{f};
  }

  std::string operator_token() {
    if (special("`")) {
      ++pos_;
      std::string name = next().text;
      expect(K::special, "`");
      return name;
    }
    return expect_kind(K::sym, "operator");
  }

  Decl type_sig() {
    TypeSig s;
    s.name = value_binder();
    expect(K::reserved, "::");
    s.type = type();
    return Decl{s};
  }

  Decl fun_clause() {
    std::string name = value_binder();
    Match m;
    while (!reserved("=") && !reserved("|")) m.params.push_back(apat());
    m.rhs = rhs("=");
    m.where = where();
    return Decl{FunBind{name, {std::move(m)}}};
  }

  Decl pat_bind() {
    PatBind b;
    b.pattern = pattern();
    b.rhs = rhs("=");
    b.where = where();
    return Decl{b};
  }

  Rhs rhs(std::string_view eq) {
    if (reserved("|")) {
      std::vector<GuardedExpr> gs;
      while (reserved("|")) {
        ++pos_;
        Expr g = expr();
        expect(K::reserved, eq);
        gs.push_back({std::move(g), expr()});
      }
      return gs;
    }
    expect(K::reserved, eq);
    return expr();
  }

  std::vector<Decl> where() {
    if (!keyword("where")) return {};
    ++pos_;
    return decl_block();
  }

  std::vector<std::string> tyvars() {
    std::vector<std::string> vs;
    while (peek().kind == K::varid) vs.push_back(next().text);
    return vs;
  }

  // A context followed by `=>`, if one starts here.
  std::optional<std::vector<Constraint>> try_context() {
    std::size_t save = pos_;
    try {
      Type t = btype();
      if (reserved("=>")) {
        ++pos_;
        return constraints(t);
      }
    } catch (const ReadError&) {
    }
    pos_ = save;
    return std::nullopt;
  }

  std::vector<Constraint> constraints(const Type& t) {
    std::vector<Constraint> out;
    if (auto* tup = std::get_if<TTuple>(&t.node)) {
      for (auto& e : tup->elems) out.push_back(constraint(e));
    } else {
      out.push_back(constraint(t));
    }
    return out;
  }

  Constraint constraint(const Type& t) {
    if (auto* c = std::get_if<TCon>(&t.node)) return Constraint{c->name, {}};
    if (auto* a = std::get_if<TApp>(&t.node))
      if (auto* c = std::get_if<TCon>(&a->head->node)) return Constraint{c->name, a->args};
    fail("malformed constraint");
  }

  Decl data() {
    DataDecl d;
    d.is_newtype = next().text == "newtype";
    d.name = expect_kind(K::conid, "type name");
    d.vars = tyvars();
    if (reserved("=")) {
      ++pos_;
      d.ctors.push_back(con_decl());
      while (reserved("|")) {
        ++pos_;
        d.ctors.push_back(con_decl());
      }
    }
    return Decl{d};
  }

  ConDecl con_decl() {
    ConDecl c;
    if (peek_is(K::varid, "forall")) {
      ++pos_;
      c.forall_vars = tyvars();
      expect(K::sym, ".");
    }
    if (auto ctx = try_context()) c.context = std::move(*ctx);
    c.name = expect_kind(K::conid, "constructor");
    if (special("{")) {
      ++pos_;
      std::vector<FieldDecl> fs;
      while (!special("}")) {
        FieldDecl f;
        f.name = expect_kind(K::varid, "field");
        expect(K::reserved, "::");
        f.type = type();
        fs.push_back(std::move(f));
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, "}");
      c.record = std::move(fs);
      return c;
    }
    while (starts_atype()) c.args.push_back(atype());
    return c;
  }

  Decl synonym() {
    ++pos_;
    TypeSyn s;
    s.name = expect_kind(K::conid, "type name");
    s.vars = tyvars();
    expect(K::reserved, "=");
    s.rhs = type();
    return Decl{s};
  }

  Decl class_decl() {
    ++pos_;
    ClassDecl c;
    if (auto ctx = try_context()) c.context = std::move(*ctx);
    c.name = expect_kind(K::conid, "class name");
    c.vars = tyvars();
    if (reserved("|")) {
      ++pos_;
      while (true) {
        FunDep f;
        f.from = tyvars();
        expect(K::reserved, "->");
        f.to = tyvars();
        c.fundeps.push_back(std::move(f));
        if (!special(",")) break;
        ++pos_;
      }
    }
    if (keyword("where")) {
      ++pos_;
      c.body = decl_block();
    }
    return Decl{c};
  }

  Decl instance() {
    ++pos_;
    InstDecl i;
    if (auto ctx = try_context()) i.context = std::move(*ctx);
    i.cls = expect_kind(K::conid, "class name");
    while (starts_atype()) i.types.push_back(atype());
    if (keyword("where")) {
      ++pos_;
      i.body = decl_block();
    }
    return Decl{i};
  }

  // ------------------------------------------------------ types

  Type type() {
    if (peek_is(K::varid, "forall")) {
      ++pos_;
      std::vector<std::string> vars = tyvars();
      expect(K::sym, ".");
      std::vector<Constraint> ctx;
      if (auto c = try_context()) ctx = std::move(*c);
      return tforall(std::move(vars), std::move(ctx), type());
    }
    if (auto c = try_context()) return tforall({}, std::move(*c), type());
    Type t = btype();
    if (reserved("->")) {
      ++pos_;
      return tfun(std::move(t), type());
    }
    return t;
  }

  bool starts_atype() const {
    const Tok& t = peek();
    return t.kind == K::conid || (t.kind == K::varid && t.text != "forall") ||
           is(t, K::special, "(") || is(t, K::special, "[") || is(t, K::sym, "!");
  }

  Type btype() {
    Type head = atype();
    std::vector<Type> args;
    while (starts_atype()) args.push_back(atype());
    return args.empty() ? head : tapp(std::move(head), std::move(args));
  }

  Type atype() {
    const Tok& t = peek();
    if (t.kind == K::conid) return tcon(next().text);
    if (t.kind == K::varid) return tvar(next().text);
    if (is(t, K::sym, "!")) {
      ++pos_;
      return tbang(atype());
    }
    if (is(t, K::special, "[")) {
      ++pos_;
      Type e = type();
      expect(K::special, "]");
      return tlist(std::move(e));
    }
    if (is(t, K::special, "(")) {
      ++pos_;
      std::vector<Type> elems;
      while (!special(")")) {
        elems.push_back(type());
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, ")");
      if (elems.size() == 1) return std::move(elems.front());
      return ttuple(std::move(elems));
    }
    fail("expected type");
  }

  // ------------------------------------------------------ patterns

  Pattern pattern() {
    Pattern lhs = lpat();
    if (peek_is(K::sym, ":")) {
      ++pos_;
      return pcons(std::move(lhs), pattern());
    }
    return lhs;
  }

  Pattern lpat() {
    if (peek().kind == K::conid && !is(peek_at(1), K::special, "{")) {
      std::string name = next().text;
      std::vector<Pattern> args;
      while (starts_apat()) args.push_back(apat());
      return pcon(name, std::move(args));
    }
    return apat();
  }

  bool starts_apat() const {
    const Tok& t = peek();
    return t.kind == K::varid || t.kind == K::conid || is_literal(t) || is(t, K::reserved, "_") ||
           is(t, K::special, "(") || is(t, K::special, "[") || is(t, K::sym, "!");
  }

  Pattern apat() {
    const Tok& t = peek();
    if (t.kind == K::varid) {
      std::string name = next().text;
      if (reserved("@")) {
        ++pos_;
        return Pattern{PAs{name, apat()}};
      }
      return pvar(name);
    }
    if (is(t, K::reserved, "_")) {
      ++pos_;
      return pwild();
    }
    if (is_literal(t)) return Pattern{PLit{literal_of(next(), overloaded_strings)}};
    if (is(t, K::sym, "!")) {
      ++pos_;
      return pbang(apat());
    }
    if (t.kind == K::conid) {
      std::string name = next().text;
      if (!special("{")) return pcon(name);
      ++pos_;
      PRec r;
      r.con = name;
      while (!special("}")) {
        FieldPat f;
        f.name = expect_kind(K::varid, "field");
        if (reserved("=")) {
          ++pos_;
          f.pattern = pattern();
        }
        r.fields.push_back(std::move(f));
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, "}");
      return Pattern{r};
    }
    if (is(t, K::special, "(") || is(t, K::special, "[")) {
      bool list = t.text == "[";
      ++pos_;
      std::vector<Pattern> elems;
      const char* close = list ? "]" : ")";
      while (!special(close)) {
        elems.push_back(pattern());
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, close);
      if (list) return Pattern{PList{std::move(elems)}};
      if (elems.size() == 1) return std::move(elems.front());
      return ptuple(std::move(elems));
    }
    fail("expected pattern");
  }

  // ------------------------------------------------------ expressions

  void scan_fixities() {
    for (std::size_t i = 0; i + 2 < t_.size(); ++i) {
      const Tok& k = t_[i];
      if (k.kind != K::keyword || (k.text != "infixl" && k.text != "infixr" && k.text != "infix"))
        continue;
      FixityDecl f;
      f.assoc = k.text == "infixl" ? Assoc::left : k.text == "infixr" ? Assoc::right : Assoc::none;
      f.precedence = std::stoi(t_[i + 1].text);
      f.op = is(t_[i + 2], K::special, "`") ? t_[i + 3].text : t_[i + 2].text;
      fixities_[f.op] = f;
    }
  }

  FixityDecl fixity_of(const std::string& op) const {
    if (auto it = fixities_.find(op); it != fixities_.end()) return it->second;
    return standard_fixity(op);
  }

  Expr expr() {
    Expr e = infix_expr();
    if (reserved("::")) {
      ++pos_;
      return sig(std::move(e), type());
    }
    return e;
  }

  bool peek_operator() const {
    return peek().kind == K::sym || (special("`") && peek_at(1).kind != K::eof);
  }

  Expr infix_expr() {
    std::vector<Expr> operands;
    std::vector<std::string> ops;
    while (true) {
      bool open_ended = false;
      operands.push_back(operand(open_ended));
      if (open_ended || !peek_operator()) break;
      ops.push_back(operator_token());
    }
    std::size_t i = 0;
    Expr out = climb(operands, ops, i, 0);
    if (i != ops.size()) fail("operator precedence conflict");
    return out;
  }

  Expr climb(std::vector<Expr>& operands, const std::vector<std::string>& ops, std::size_t& i,
             int min_prec) const {
    Expr lhs = std::move(operands[i]);
    while (i < ops.size()) {
      FixityDecl f = fixity_of(ops[i]);
      if (f.precedence < min_prec) break;
      std::string op = ops[i];
      ++i;
      int next_min = f.assoc == Assoc::right ? f.precedence : f.precedence + 1;
      Expr rhs = climb(operands, ops, i, next_min);
      lhs = infix(op, std::move(lhs), std::move(rhs));
      if (f.assoc == Assoc::none && i < ops.size() && fixity_of(ops[i]).precedence == f.precedence)
        fail("non-associative operator chained");
    }
    return lhs;
  }

  Expr operand(bool& open_ended) {
    const Tok& t = peek();
    if (is(t, K::reserved, "\\")) {
      ++pos_;
      std::vector<Pattern> ps;
      while (!reserved("->")) ps.push_back(apat());
      ++pos_;
      open_ended = true;
      return lambda(std::move(ps), expr());
    }
    if (is(t, K::keyword, "if")) {
      ++pos_;
      Expr c = expr();
      expect(K::keyword, "then");
      Expr a = expr();
      expect(K::keyword, "else");
      open_ended = true;
      return Expr{If{std::move(c), std::move(a), expr()}};
    }
    if (is(t, K::keyword, "case")) {
      ++pos_;
      Expr s = expr();
      expect(K::keyword, "of");
      std::vector<Alt> alts;
      block([&] { alts.push_back(alt()); });
      open_ended = true;
      return Expr{Case{std::move(s), std::move(alts)}};
    }
    if (is(t, K::keyword, "let")) {
      ++pos_;
      std::vector<Decl> binds = decl_block();
      expect(K::keyword, "in");
      open_ended = true;
      return Expr{Let{std::move(binds), expr()}};
    }
    Expr f = aexp();
    std::vector<Expr> args;
    while (starts_aexp()) args.push_back(aexp());
    return args.empty() ? f : app(std::move(f), std::move(args));
  }

  Alt alt() {
    Alt a;
    a.pattern = pattern();
    a.rhs = rhs("->");
    a.where = where();
    return a;
  }

  bool starts_aexp() const {
    const Tok& t = peek();
    return t.kind == K::varid || t.kind == K::conid || is_literal(t) || is(t, K::special, "(") ||
           is(t, K::special, "[");
  }

  Expr aexp() {
    bool bare_con = peek().kind == K::conid;
    Expr e = aexp_base();
    while (special("{")) {
      ++pos_;
      std::vector<FieldBind> fs;
      while (!special("}")) {
        std::string name = expect_kind(K::varid, "field");
        expect(K::reserved, "=");
        fs.push_back({name, expr()});
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, "}");
      auto* c = std::get_if<Con>(&e.node);
      if (c && bare_con)
        e = Expr{RecCon{c->name, std::move(fs)}};
      else
        e = Expr{RecUpd{std::move(e), std::move(fs)}};
      bare_con = false;
    }
    return e;
  }

  Expr aexp_base() {
    const Tok& t = peek();
    if (t.kind == K::varid) return var(next().text);
    if (t.kind == K::conid) return con(next().text);
    if (is_literal(t)) return Expr{Lit{literal_of(next(), overloaded_strings)}};
    if (is(t, K::special, "(")) {
      if (is_paren_op(0)) {
        ++pos_;
        std::string op = next().text;
        ++pos_;
        return op[0] == ':' ? con(op) : var(op);
      }
      ++pos_;
      std::vector<Expr> elems;
      while (!special(")")) {
        elems.push_back(expr());
        if (!special(",")) break;
        ++pos_;
      }
      expect(K::special, ")");
      if (elems.size() == 1) return std::move(elems.front());
      return tuple(std::move(elems));
    }
    if (is(t, K::special, "[")) {
      ++pos_;
      if (special("]")) {
        ++pos_;
        return list({});
      }
      Expr first = expr();
      if (reserved("..")) {
        ++pos_;
        Seq s{std::move(first), std::nullopt};
        if (!special("]")) s.to = clean2hs::Box<Expr>(expr());
        expect(K::special, "]");
        return Expr{std::move(s)};
      }
      if (reserved("|")) {
        std::vector<std::vector<Stmt>> branches;
        while (reserved("|")) {
          ++pos_;
          std::vector<Stmt> b;
          while (true) {
            b.push_back(stmt());
            if (!special(",")) break;
            ++pos_;
          }
          branches.push_back(std::move(b));
        }
        expect(K::special, "]");
        return Expr{Comp{std::move(first), std::move(branches)}};
      }
      std::vector<Expr> elems{std::move(first)};
      while (special(",")) {
        ++pos_;
        elems.push_back(expr());
      }
      expect(K::special, "]");
      return list(std::move(elems));
    }
    fail("expected expression");
  }

  Stmt stmt() {
    std::size_t save = pos_;
    try {
      Pattern p = pattern();
      if (reserved("<-")) {
        ++pos_;
        return Stmt{Gen{std::move(p), expr()}};
      }
    } catch (const ReadError&) {
    }
    pos_ = save;
    return Stmt{Guard{expr()}};
  }

  std::size_t pos() const { return pos_; }
  const std::vector<Tok>& tokens() const { return t_; }

 private:
  std::vector<Tok> t_;
  std::size_t pos_ = 0;
  std::vector<Ctx> ctx_;
  std::map<std::string, FixityDecl> fixities_;
  Tok eof_;
};

template <class F>
auto read_whole(std::string_view text, F&& f) {
  Parser p(Lexer(text).run());
  auto out = f(p);
  if (p.raw().kind != K::eof) p.fail("trailing input");
  return out;
}

}  // namespace

HsModule read_module(std::string_view text) {
  return read_whole(text, [](Parser& p) { return p.module(); });
}

Expr read_expr(std::string_view text) {
  return read_whole(text, [](Parser& p) { return p.expr(); });
}

Type read_type(std::string_view text) {
  return read_whole(text, [](Parser& p) { return p.type(); });
}

Pattern read_pattern(std::string_view text) {
  return read_whole(text, [](Parser& p) { return p.pattern(); });
}

}  // namespace testsupport
