#include "clean2hs/diagnostic.hpp"

#include <algorithm>

namespace clean2hs {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::error:
      return "error";
    case Severity::warning:
      return "warning";
    case Severity::info:
      return "info";
  }
  return "error";
}

const std::vector<std::string_view>& rules::registry() {
  static const std::vector<std::string_view> all = {
      lex_error,           layout_error,          parse_error,
      kind_mismatch,       io_error,              generics_unsupported,
      uniqueness_erased,   attr_unknown_variable, attr_equal_uniqueness,
      start_world,         start_pure,            class_name_collision,
      record_unknown,      record_ambiguous,      parallel_fallback,
      stdlib_import_dropped, strictness_dropped,  missing_definition,
      unsupported,         link_missing,          link_signature_mismatch,
      link_attr_mismatch,  link_private,          link_standalone,
      module_name_mismatch,
  };
  return all;
}

Diagnostic make_diagnostic(Severity severity, std::string_view rule_id, SourceSpan span,
                           std::string message, std::optional<std::string> suggestion) {
  return Diagnostic{severity, std::string(rule_id), span, std::move(message),
                    std::move(suggestion)};
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

Diagnostic Error::to_diagnostic() const {
  return make_diagnostic(Severity::error, rule_id_, span_, what());
}

}  // namespace clean2hs
