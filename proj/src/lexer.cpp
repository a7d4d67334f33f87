#include "clean2hs/lexer.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace clean2hs {

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::identifier:
      return "identifier";
    case TokenKind::constructor_identifier:
      return "constructor-identifier";
    case TokenKind::integer_literal:
      return "integer-literal";
    case TokenKind::real_literal:
      return "real-literal";
    case TokenKind::char_literal:
      return "char-literal";
    case TokenKind::char_list_literal:
      return "char-list-literal";
    case TokenKind::string_literal:
      return "string-literal";
    case TokenKind::keyword:
      return "keyword";
    case TokenKind::op:
      return "operator";
    case TokenKind::punctuation:
      return "punctuation";
    case TokenKind::layout_marker:
      return "layout-marker";
  }
  return "?";
}

const std::vector<std::string_view>& keywords() {
  static const std::vector<std::string_view> kws = {
      "module", "implementation", "definition", "system", "import", "from",
      "where",  "in",             "of",         "case",   "if",     "let",
      "with",   "class",          "instance",   "generic", "derive", "infixl",
      "infixr", "infix",          "dynamic",    "Start"};
  return kws;
}

namespace {

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '`';
}

bool is_op_char(char c) {
  static constexpr std::string_view chars = "~@#$%^?!+-*<>\\/|&=:.";
  return chars.find(c) != std::string_view::npos;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool ends_operand(const Token& t) {
  switch (t.kind) {
    case TokenKind::identifier:
    case TokenKind::constructor_identifier:
    case TokenKind::integer_literal:
    case TokenKind::real_literal:
    case TokenKind::char_literal:
    case TokenKind::char_list_literal:
    case TokenKind::string_literal:
      return true;
    case TokenKind::punctuation:
      return t.text == ")" || t.text == "]" || t.text == "}";
    default:
      return false;
  }
}

class Scanner {
 public:
  explicit Scanner(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        skip_block_comment();
        continue;
      }
      // `-` directly before a digit is a sign unless it follows an operand.
      if (c == '-' && is_digit(peek(1)) && (out.empty() || !ends_operand(out.back()))) {
        SourcePos start = pos_;
        advance();
        out.push_back(number(start));
        continue;
      }
      out.push_back(next_token());
    }
    return out;
  }

 private:
  bool at_end() const { return pos_.byte_offset >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    std::size_t i = pos_.byte_offset + ahead;
    return i < src_.size() ? src_[i] : '\0';
  }

  void advance() {
    char c = src_[pos_.byte_offset++];
    if (c == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else if (c == '\t') {
      pos_.column = ((pos_.column - 1) / 4 + 1) * 4 + 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++pos_.column;
    }
  }

  void skip_block_comment() {
    SourcePos start = pos_;
    int depth = 0;
    do {
      if (peek() == '/' && peek(1) == '*') {
        advance();
        advance();
        ++depth;
      } else if (peek() == '*' && peek(1) == '/') {
        advance();
        advance();
        --depth;
      } else if (at_end()) {
        throw LexError("unterminated-comment", {start, pos_},
                       "unterminated block comment (depth " + std::to_string(depth) +
                           " at end of input)");
      } else {
        advance();
      }
    } while (depth > 0);
  }

  Token make(TokenKind kind, SourcePos start) const {
    return Token{kind,
                 std::string(src_.substr(start.byte_offset, pos_.byte_offset - start.byte_offset)),
                 {start, pos_}};
  }

  // Skips a quoted body; the opening quote has been consumed.
  bool skip_quoted(char quote) {
    while (!at_end() && peek() != quote && peek() != '\n') {
      if (peek() == '\\' && pos_.byte_offset + 1 < src_.size() && peek(1) != '\n') advance();
      advance();
    }
    if (peek() != quote) return false;
    advance();
    return true;
  }

  Token next_token() {
    SourcePos start = pos_;
    char c = peek();

    if (is_ident_start(c)) {
      // `A.` and `E.` quantifiers, followed by a type variable.
      if ((c == 'A' || c == 'E') && peek(1) == '.' &&
          std::islower(static_cast<unsigned char>(peek(2))) != 0) {
        advance();
        advance();
        return make(TokenKind::op, start);
      }
      while (!at_end() && is_ident_char(peek())) advance();
      Token t = make(TokenKind::identifier, start);
      const auto& kws = keywords();
      if (std::find(kws.begin(), kws.end(), t.text) != kws.end()) {
        t.kind = TokenKind::keyword;
      } else if (std::isupper(static_cast<unsigned char>(t.text[0])) != 0) {
        t.kind = TokenKind::constructor_identifier;
      }
      return t;
    }

    if (is_digit(c)) return number(start);

    if (c == '"') {
      advance();
      if (!skip_quoted('"'))
        throw LexError("unterminated-string", {start, pos_}, "unterminated string literal");
      return make(TokenKind::string_literal, start);
    }

    if (c == '\'') {
      advance();
      if (!skip_quoted('\''))
        throw LexError("unterminated-string", {start, pos_}, "unterminated character literal");
      return make(TokenKind::char_literal, start);
    }

    if (c == '[' && peek(1) == '\'') {
      if (auto t = char_list(start)) return *t;
    }

    if (c == '(' || c == ')' || c == '[' || c == ']' || c == '{' || c == '}' || c == ',' ||
        c == ';') {
      advance();
      return make(TokenKind::punctuation, start);
    }

    if (is_op_char(c)) {
      while (!at_end() && is_op_char(peek())) {
        if (pos_.byte_offset > start.byte_offset && peek() == '/' &&
            (peek(1) == '/' || peek(1) == '*'))
          break;
        advance();
      }
      Token t = make(TokenKind::op, start);
      if (t.text == ":") t.kind = TokenKind::punctuation;
      return t;
    }

    advance();
    throw LexError("invalid-char", {start, pos_},
                   "invalid character in source: '" +
                       std::string(src_.substr(start.byte_offset, pos_.byte_offset - start.byte_offset)) +
                       "'");
  }

  // `['...']` scanned as one token when the quoted run closes directly
  // before `]`; otherwise the `[` is ordinary punctuation.
  std::optional<Token> char_list(SourcePos start) {
    std::size_t i = start.byte_offset + 2;
    while (i < src_.size() && src_[i] != '\'' && src_[i] != '\n') {
      if (src_[i] == '\\' && i + 1 < src_.size()) ++i;
      ++i;
    }
    if (i + 1 >= src_.size() || src_[i] != '\'' || src_[i + 1] != ']') return std::nullopt;
    while (pos_.byte_offset <= i + 1) advance();
    return make(TokenKind::char_list_literal, start);
  }

  Token number(SourcePos start) {
    bool real = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X') &&
        std::isxdigit(static_cast<unsigned char>(peek(2))) != 0) {
      advance();
      advance();
      while (std::isxdigit(static_cast<unsigned char>(peek())) != 0) advance();
      return make(TokenKind::integer_literal, start);
    }
    while (is_digit(peek())) advance();
    if (peek() == '.' && is_digit(peek(1))) {
      real = true;
      advance();
      while (is_digit(peek())) advance();
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (is_digit(peek(1)) || ((peek(1) == '-' || peek(1) == '+') && is_digit(peek(2))))) {
      real = true;
      advance();
      if (peek() == '-' || peek() == '+') advance();
      while (is_digit(peek())) advance();
    }
    return make(real ? TokenKind::real_literal : TokenKind::integer_literal, start);
  }

  std::string_view src_;
  SourcePos pos_{1, 1, 0};
};

enum class Opener { top, where, of, let, with };

struct Context {
  int column;
  int depth;
  Opener opener;
};

Token marker(Layout l, SourcePos at) {
  Token t;
  t.kind = TokenKind::layout_marker;
  t.span = {at, at};
  t.layout = l;
  return t;
}

bool is_block_keyword(const Token& t, Opener& opener) {
  if (t.kind != TokenKind::keyword) return false;
  if (t.text == "where") opener = Opener::where;
  else if (t.text == "of") opener = Opener::of;
  else if (t.text == "let") opener = Opener::let;
  else if (t.text == "with") opener = Opener::with;
  else return false;
  return true;
}

// Tokens that may start a line at a column between two block levels.
bool continuation_exempt(const Token& t) {
  if (t.kind == TokenKind::keyword)
    return t.text == "in" || t.text == "where" || t.text == "with" || t.text == "of";
  if (t.kind == TokenKind::punctuation)
    return t.text == ")" || t.text == "]" || t.text == "}" || t.text == ",";
  if (t.kind == TokenKind::op)
    return t.text == "|" || t.text == "=" || t.text == "#" || t.text == "#!" || t.text == "->" ||
           t.text == "&" || t.text == "\\\\";
  return false;
}

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Scanner(source).run(); }

std::vector<Token> layout_insert(const std::vector<Token>& tokens) {
  std::vector<Token> out;
  if (tokens.empty()) return out;
  out.reserve(tokens.size() * 2);

  std::vector<Context> stack;
  int depth = 0;
  bool pending = false;
  Opener pending_opener = Opener::top;

  const Token& first = tokens.front();
  out.push_back(marker(Layout::open, first.span.start));
  stack.push_back({first.span.start.column, 0, Opener::top});
  int prev_line = first.span.start.line;
  bool first_token = true;

  auto close_top = [&](SourcePos at) {
    out.push_back(marker(Layout::close, at));
    stack.pop_back();
  };

  for (const Token& t : tokens) {
    const SourcePos at = t.span.start;
    bool opened_here = false;
    if (pending) {
      pending = false;
      int enclosing = stack.empty() ? 0 : stack.back().column;
      if (at.column > enclosing) {
        out.push_back(marker(Layout::open, at));
        stack.push_back({at.column, depth, pending_opener});
        opened_here = true;
      } else {
        out.push_back(marker(Layout::open, at));
        out.push_back(marker(Layout::close, at));
      }
    }

    if (!opened_here && !first_token && at.line > prev_line) {
      bool popped = false;
      while (!stack.empty() && at.column < stack.back().column) {
        if (stack.size() == 1)
          throw LayoutError(t.span, "inconsistent indentation: line starts left of the module's "
                                    "first declaration");
        close_top(at);
        popped = true;
      }
      if (at.column == stack.back().column) {
        out.push_back(marker(Layout::separator, at));
      } else if (popped && !continuation_exempt(t)) {
        throw LayoutError(t.span, "inconsistent indentation: column " +
                                      std::to_string(at.column) +
                                      " does not match any enclosing block");
      }
    }
    first_token = false;

    if (t.is_keyword("in") && stack.size() > 1 && stack.back().opener == Opener::let &&
        !opened_here) {
      close_top(at);
    }
    if (t.kind == TokenKind::punctuation && (t.text == ")" || t.text == "]" || t.text == "}")) {
      while (stack.size() > 1 && stack.back().depth >= depth && depth > 0) close_top(at);
      if (depth > 0) --depth;
    } else if (t.kind == TokenKind::punctuation &&
               (t.text == "(" || t.text == "[" || t.text == "{")) {
      ++depth;
    }

    out.push_back(t);
    prev_line = t.span.end.line;

    Opener opener;
    if (is_block_keyword(t, opener)) {
      pending = true;
      pending_opener = opener;
    }
  }

  SourcePos end = tokens.back().span.end;
  if (pending) {
    out.push_back(marker(Layout::open, end));
    out.push_back(marker(Layout::close, end));
  }
  while (!stack.empty()) close_top(end);
  return out;
}

}  // namespace clean2hs
