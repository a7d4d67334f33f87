#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "clean2hs/source.hpp"

namespace clean2hs {

enum class Severity { error, warning, info };

std::string_view to_string(Severity s);

/// Stable rule identifiers. Every Diagnostic::rule_id is one of these.
namespace rules {
inline constexpr std::string_view lex_error = "lex-error";
inline constexpr std::string_view layout_error = "layout-error";
inline constexpr std::string_view parse_error = "parse-error";
inline constexpr std::string_view kind_mismatch = "kind-mismatch";
inline constexpr std::string_view io_error = "io-error";
inline constexpr std::string_view generics_unsupported = "generics-unsupported";
inline constexpr std::string_view uniqueness_erased = "uniqueness-erased";
inline constexpr std::string_view attr_unknown_variable = "attr-unknown-variable";
inline constexpr std::string_view attr_equal_uniqueness = "attr-equal-uniqueness";
inline constexpr std::string_view start_world = "start-world";
inline constexpr std::string_view start_pure = "start-pure";
inline constexpr std::string_view class_name_collision = "class-name-collision";
inline constexpr std::string_view record_unknown = "record-unknown";
inline constexpr std::string_view record_ambiguous = "record-ambiguous";
inline constexpr std::string_view parallel_fallback = "parallel-fallback";
inline constexpr std::string_view stdlib_import_dropped = "stdlib-import-dropped";
inline constexpr std::string_view strictness_dropped = "strictness-dropped";
inline constexpr std::string_view missing_definition = "missing-definition";
inline constexpr std::string_view unsupported = "unsupported";
inline constexpr std::string_view link_missing = "link-missing";
inline constexpr std::string_view link_signature_mismatch = "link-signature-mismatch";
inline constexpr std::string_view link_attr_mismatch = "link-attr-mismatch";
inline constexpr std::string_view link_private = "link-private";
inline constexpr std::string_view link_standalone = "link-standalone";
inline constexpr std::string_view module_name_mismatch = "module-name-mismatch";

/// All registered identifiers, in a fixed order.
const std::vector<std::string_view>& registry();
}  // namespace rules

struct Diagnostic {
  Severity severity = Severity::error;
  std::string rule_id;
  SourceSpan span;
  std::string message;
  std::optional<std::string> suggestion;

  bool operator==(const Diagnostic&) const = default;
};

Diagnostic make_diagnostic(Severity severity, std::string_view rule_id, SourceSpan span,
                           std::string message,
                           std::optional<std::string> suggestion = std::nullopt);

bool has_errors(const std::vector<Diagnostic>& diags);

/// Base class of all failures raised by the pipeline stages.
class Error : public std::runtime_error {
 public:
  Error(std::string_view rule_id, SourceSpan span, const std::string& message)
      : std::runtime_error(message), rule_id_(rule_id), span_(span) {}

  const std::string& rule_id() const noexcept { return rule_id_; }
  const SourceSpan& span() const noexcept { return span_; }
  Diagnostic to_diagnostic() const;

 private:
  std::string rule_id_;
  SourceSpan span_;
};

}  // namespace clean2hs
