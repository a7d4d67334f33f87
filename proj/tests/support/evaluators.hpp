#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "clean2hs/clean_ast.hpp"
#include "clean2hs/hs_ast.hpp"

namespace testsupport {

/// Integer, boolean or tuple. Arithmetic wraps modulo 2^64.
struct Value {
  std::variant<std::int64_t, bool, std::vector<Value>> v;
  bool operator==(const Value&) const = default;
};

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reference semantics of a Clean clause over integer arithmetic: `#` steps
/// bind sequentially, each right-hand side seeing the previous bindings.
Value eval_clean_clause(const clean2hs::clean::Clause& c, const std::vector<Value>& args);

/// Lazy evaluation of a target match: where-bindings form one recursive
/// scope, bang bindings are forced before the body. A binding that depends
/// on itself raises EvalError.
Value eval_hs_match(const clean2hs::hs::Match& m, const std::vector<Value>& args);

Value int_value(std::int64_t n);

}  // namespace testsupport
