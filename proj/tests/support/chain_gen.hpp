#pragma once

#include <random>
#include <set>
#include <string>

#include "clean2hs/clean_ast.hpp"

namespace testsupport {

/// A random let-before chain: `f x y` followed by 1..max_depth `#`/`#!`
/// steps over integer arithmetic that may rebind earlier names, ending in a
/// plain or guarded body.
struct Chain {
  std::string source;  // complete implementation module text
  int depth = 0;
};

Chain random_chain(std::mt19937_64& rng, int max_depth = 4);

/// Every identifier in a clause of the integer subset: parameters, step
/// binders and every variable read. Written against the AST directly.
std::set<std::string> names_in_clause(const clean2hs::clean::Clause& c);

}  // namespace testsupport
