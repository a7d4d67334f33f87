#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "clean2hs/diagnostic.hpp"
#include "clean2hs/types.hpp"

namespace clean2hs {

enum class ErasedKind { unique, variable, anonymous_dot, constraint };

/// One erased attribute occurrence or attribute constraint.
struct ErasureEntry {
  SourceSpan span;
  std::string original;  // `*`, `u:`, `.` or `[v<=u]`
  ErasedKind kind = ErasedKind::unique;
  std::string action;
  bool operator==(const ErasureEntry&) const = default;
};

struct UniquenessCounts {
  std::size_t erased_unique = 0;
  std::size_t erased_vars = 0;
  std::size_t erased_dots = 0;
  std::size_t constraints = 0;

  std::size_t total() const { return erased_unique + erased_vars + erased_dots + constraints; }
  UniquenessCounts& operator+=(const UniquenessCounts& o);
  bool operator==(const UniquenessCounts&) const = default;
};

struct UniquenessReport {
  std::vector<ErasureEntry> entries;
  UniquenessCounts counts;

  void add(ErasureEntry e);
  void merge(const UniquenessReport& other);
  bool operator==(const UniquenessReport&) const = default;
};

/// Source spelling of an attribute: `*`, `u:`, `.` or empty.
std::string attr_text(const clean::Attr& a);

/// Marks every tuple, list, array and optional node that contains a unique
/// component as unique, bottom-up. Nodes that already carry an attribute
/// keep it.
clean::AttrType propagate(const clean::AttrType& t);

/// Propagates through every argument and the result of a signature.
clean::FunSig propagate(const clean::FunSig& s);

/// Constraint well-formedness: unknown attribute variables (warning) and
/// groups of variables forced equal by cyclic constraints (info).
std::vector<Diagnostic> check_constraints(const clean::FunSig& s);

/// Sets every attribute to none, recording each removal.
std::pair<clean::AttrType, UniquenessReport> erase(const clean::AttrType& t);

/// Erases argument, result and context types and drops attribute
/// constraints.
std::pair<clean::FunSig, UniquenessReport> erase(const clean::FunSig& s);

}  // namespace clean2hs
