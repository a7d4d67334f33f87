#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clean2hs/diagnostic.hpp"
#include "clean2hs/emitter.hpp"
#include "clean2hs/translator.hpp"
#include "clean2hs/uniqueness.hpp"

namespace clean2hs {

enum class ColorMode { never, auto_detect, always };

struct RunConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output_dir = ".";
  TranslateOptions options;
  std::optional<std::filesystem::path> report_path;
  bool fail_on_warning = false;
  RenderStyle style;
  ColorMode color = ColorMode::auto_detect;
};

/// Outcome of translating one implementation module.
struct FileResult {
  std::filesystem::path icl;
  std::optional<std::filesystem::path> dcl;
  std::vector<Diagnostic> diagnostics;
  UniquenessReport uniqueness;
  std::optional<std::string> haskell;  // absent when parsing failed
  bool io_failure = false;
};

/// Reads, parses, links and translates one .icl with its optional sibling
/// .dcl. Nothing is written.
FileResult process_file(const std::filesystem::path& icl, const RunConfig& config);

/// Expands directories and .dcl paths into the sorted, de-duplicated list of
/// .icl files. Throws std::runtime_error for missing inputs.
std::vector<std::filesystem::path> discover_inputs(const std::vector<std::filesystem::path>& inputs);

/// Report entry for one file: {file, diagnostics, uniqueness}; diagnostics
/// ordered by (line, column, rule_id).
std::string report_json(const std::string& file, const std::vector<Diagnostic>& diags,
                        const UniquenessReport& uniq);

/// Runs the whole pipeline. Exit code: 0 success, 1 error diagnostics (or
/// warnings with fail_on_warning), 2 usage or I/O failure.
int run(const RunConfig& config, std::ostream& err);

/// CLEAN2HS_COLOR: never | auto | always (default auto).
ColorMode color_from_env();

}  // namespace clean2hs
