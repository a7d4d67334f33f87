#pragma once

#include <optional>
#include <string>
#include <vector>

#include "clean2hs/clean_ast.hpp"
#include "clean2hs/diagnostic.hpp"
#include "clean2hs/hs_ast.hpp"
#include "clean2hs/translator.hpp"

namespace clean2hs {

enum class ExportKind { function, type, type_with_ctors, class_ };

struct ExportEntry {
  ExportKind kind = ExportKind::function;
  std::string name;  // Clean name
  bool operator==(const ExportEntry&) const = default;
};

struct ExportList {
  std::vector<ExportEntry> items;
  bool operator==(const ExportList&) const = default;
};

/// Definition and implementation module disagree on the module name.
class ModuleNameMismatch : public Error {
 public:
  ModuleNameMismatch(SourceSpan span, const std::string& message)
      : Error(rules::module_name_mismatch, span, message) {}
};

struct LinkResult {
  ExportList exports;
  std::vector<Diagnostic> diagnostics;
};

/// Exports are the names declared in dcl that icl defines. Names missing
/// from icl are errors, icl-only names are reported as private.
LinkResult link(const clean::CleanModule& dcl, const clean::CleanModule& icl);

/// Target export items for an export list; class names follow the
/// translator's class naming.
std::vector<hs::ExportItem> export_items(const ExportList& exports,
                                         const std::vector<clean::ClassDef>& classes,
                                         const std::vector<clean::TypeDef>& typedefs);

struct LinkedTranslation {
  hs::HsModule module;
  std::vector<Diagnostic> diagnostics;
  UniquenessReport uniqueness;
  std::optional<ExportList> exports;
};

/// Links (when dcl is present) and translates icl. Without a dcl the module
/// exports everything.
LinkedTranslation translate_linked(const std::optional<clean::CleanModule>& dcl,
                                   const clean::CleanModule& icl, const TranslateOptions& opts = {});

}  // namespace clean2hs
