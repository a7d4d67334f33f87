#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "clean2hs/clean_ast.hpp"
#include "clean2hs/diagnostic.hpp"
#include "clean2hs/lexer.hpp"

namespace clean2hs {

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, std::vector<std::string> expected, std::string found,
             const std::string& message)
      : Error(rules::parse_error, span, message),
        expected_(std::move(expected)),
        found_(std::move(found)) {}

  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::vector<std::string> expected_;
  std::string found_;
};

/// Header says `definition module` where an implementation was expected, or
/// the reverse.
class KindMismatch : public Error {
 public:
  KindMismatch(SourceSpan span, const std::string& message)
      : Error(rules::kind_mismatch, span, message) {}
};

/// Parses a layout-annotated token stream into a module of the expected kind.
clean::CleanModule parse_module(const std::vector<Token>& tokens, clean::ModuleKind expected_kind);

/// Convenience: tokenize, insert layout, parse.
clean::CleanModule parse_source(std::string_view source, clean::ModuleKind expected_kind);

/// Parse a standalone expression / type / pattern from source text.
clean::Expr parse_expr(std::string_view source);
clean::AttrType parse_type(std::string_view source);
clean::FunSig parse_signature(std::string_view source);
clean::Pattern parse_pattern(std::string_view source);

/// Token-level entry points; tokens need not carry layout markers unless the
/// expression contains `case`/`let` blocks.
clean::Expr parse_expr(const std::vector<Token>& tokens);
clean::AttrType parse_type(const std::vector<Token>& tokens);

}  // namespace clean2hs
