#pragma once

#include <string>

#include "clean2hs/clean_ast.hpp"

namespace clean2hs {

/// Canonical Clean source for an AST. Parsing the output yields an AST equal
/// to the input. Infix operands are fully parenthesized; blocks (case, let,
/// where) always start on a new line.
std::string print_module(const clean::CleanModule& m);
std::string print_expr(const clean::Expr& e);
std::string print_pattern(const clean::Pattern& p);
std::string print_type(const clean::AttrType& t);
std::string print_signature(const clean::FunSig& s);

}  // namespace clean2hs
