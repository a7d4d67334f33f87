#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace clean2hs {

/// A position in a source text. Columns treat a tab as advancing to the
/// next multiple-of-4 column boundary.
struct SourcePos {
  int line = 1;
  int column = 1;
  std::size_t byte_offset = 0;

  auto operator<=>(const SourcePos&) const = default;
};

struct SourceSpan {
  SourcePos start;
  SourcePos end;

  bool operator==(const SourceSpan&) const = default;
};

/// Location attached to AST nodes. Never participates in structural
/// equality: two nodes parsed from different positions compare equal.
struct Loc {
  SourceSpan span;

  friend bool operator==(const Loc&, const Loc&) noexcept { return true; }
};

inline std::string to_string(const SourcePos& p) {
  return std::to_string(p.line) + ":" + std::to_string(p.column);
}

}  // namespace clean2hs
