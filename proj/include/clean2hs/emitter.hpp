#pragma once

#include <string>

#include "clean2hs/hs_ast.hpp"

namespace clean2hs {

enum class PragmaStyle { one_per_line, combined };

struct RenderStyle {
  int indent_width = 2;
  int max_line = 100;
  PragmaStyle pragma_style = PragmaStyle::one_per_line;
};

/// Complete module text, newline-terminated.
std::string emit(const hs::HsModule& m, const RenderStyle& style = {});

/// Expression on one line (multi-line only for nested case expressions in
/// tail position).
std::string emit_expr(const hs::Expr& e, const RenderStyle& style = {});
std::string emit_type(const hs::Type& t);
std::string emit_pattern(const hs::Pattern& p);

/// One declaration at column 0, without a trailing newline.
std::string emit_decl(const hs::Decl& d, const RenderStyle& style = {});

/// Infix operator table used for parenthesization: precedence and
/// associativity of a target-language operator (unknown operators are
/// infixl 9).
hs::FixityDecl haskell_fixity(const std::string& op);

}  // namespace clean2hs
