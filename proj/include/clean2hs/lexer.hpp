#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "clean2hs/diagnostic.hpp"
#include "clean2hs/source.hpp"

namespace clean2hs {

enum class TokenKind {
  identifier,
  constructor_identifier,
  integer_literal,
  real_literal,
  char_literal,
  char_list_literal,
  string_literal,
  keyword,
  op,
  punctuation,
  layout_marker,
};

std::string_view to_string(TokenKind k);

/// Virtual block structure inserted by layout_insert. Tokens produced by
/// tokenize always carry Layout::none.
enum class Layout { none, open, separator, close };

struct Token {
  TokenKind kind = TokenKind::identifier;
  std::string text;
  SourceSpan span;
  Layout layout = Layout::none;

  bool operator==(const Token&) const = default;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view t) const { return is(TokenKind::keyword, t); }
  bool is_op(std::string_view t) const { return kind == TokenKind::op && text == t; }
  bool is_punct(std::string_view t) const { return kind == TokenKind::punctuation && text == t; }
  bool is_layout(Layout l) const { return kind == TokenKind::layout_marker && layout == l; }
};

/// Keywords recognised by the lexer, in a fixed order.
const std::vector<std::string_view>& keywords();

/// Raised for lexical failures. rule_id() is always rules::lex_error;
/// reason() is one of "unterminated-comment", "unterminated-string",
/// "invalid-char".
class LexError : public Error {
 public:
  LexError(std::string reason, SourceSpan span, const std::string& message)
      : Error(rules::lex_error, span, message), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

class LayoutError : public Error {
 public:
  LayoutError(SourceSpan span, const std::string& message)
      : Error(rules::layout_error, span, message) {}
};

/// Splits Clean source text into tokens. Comments (`//` and nested `/* */`)
/// and whitespace are dropped.
std::vector<Token> tokenize(std::string_view source);

/// Inserts offside-rule block markers: one block for the whole module and
/// one after each of `where`, `of`, `let` and `with`.
std::vector<Token> layout_insert(const std::vector<Token>& tokens);

}  // namespace clean2hs
