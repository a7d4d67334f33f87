#include "clean2hs/driver.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "clean2hs/linker.hpp"
#include "clean2hs/parser.hpp"

namespace clean2hs {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Diagnostic> sorted(std::vector<Diagnostic> diags) {
  std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
    if (a.span.start.line != b.span.start.line) return a.span.start.line < b.span.start.line;
    if (a.span.start.column != b.span.start.column)
      return a.span.start.column < b.span.start.column;
    return a.rule_id < b.rule_id;
  });
  return diags;
}

ordered_json report_object(const std::string& file, const std::vector<Diagnostic>& diags,
                           const UniquenessReport& uniq) {
  ordered_json o;
  o["file"] = file;
  o["diagnostics"] = ordered_json::array();
  for (auto& d : sorted(diags)) {
    ordered_json j;
    j["severity"] = std::string(to_string(d.severity));
    j["rule_id"] = d.rule_id;
    j["line"] = d.span.start.line;
    j["column"] = d.span.start.column;
    j["message"] = d.message;
    o["diagnostics"].push_back(std::move(j));
  }
  ordered_json u;
  u["erased_unique"] = uniq.counts.erased_unique;
  u["erased_vars"] = uniq.counts.erased_vars;
  u["erased_dots"] = uniq.counts.erased_dots;
  u["constraints"] = uniq.counts.constraints;
  o["uniqueness"] = std::move(u);
  return o;
}

const char* color_of(Severity s) {
  switch (s) {
    case Severity::error:
      return "\033[31m";
    case Severity::warning:
      return "\033[33m";
    case Severity::info:
      return "\033[36m";
  }
  return "";
}

void print_diagnostic(std::ostream& err, const std::string& file, const Diagnostic& d,
                      bool color) {
  err << file << ":" << d.span.start.line << ":" << d.span.start.column << ": ";
  if (color) err << color_of(d.severity);
  err << to_string(d.severity);
  if (color) err << "\033[0m";
  err << ": " << d.message << " [" << d.rule_id << "]\n";
}

bool use_color(ColorMode mode) {
  if (mode == ColorMode::always) return true;
  if (mode == ColorMode::never) return false;
  return isatty(STDERR_FILENO) != 0;
}

}  // namespace

ColorMode color_from_env() {
  const char* v = std::getenv("CLEAN2HS_COLOR");
  if (!v) return ColorMode::auto_detect;
  std::string s = v;
  if (s == "never") return ColorMode::never;
  if (s == "always") return ColorMode::always;
  return ColorMode::auto_detect;
}

std::vector<fs::path> discover_inputs(const std::vector<fs::path>& inputs) {
  std::set<fs::path> out;
  for (auto& p : inputs) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".icl") out.insert(e.path());
      continue;
    }
    fs::path icl = p;
    if (p.extension() == ".dcl") icl.replace_extension(".icl");
    if (icl.extension() != ".icl")
      throw std::runtime_error("not a Clean module: " + p.string());
    if (!fs::is_regular_file(icl, ec)) throw std::runtime_error("cannot read " + icl.string());
    out.insert(icl);
  }
  return {out.begin(), out.end()};
}

FileResult process_file(const fs::path& icl_path, const RunConfig& config) {
  FileResult r;
  r.icl = icl_path;
  auto source = read_file(icl_path);
  if (!source) {
    r.io_failure = true;
    r.diagnostics.push_back(make_diagnostic(Severity::error, rules::io_error, {},
                                            "cannot read " + icl_path.string()));
    return r;
  }

  std::optional<clean::CleanModule> dcl;
  fs::path dcl_path = icl_path;
  dcl_path.replace_extension(".dcl");
  std::error_code ec;
  if (fs::is_regular_file(dcl_path, ec)) {
    r.dcl = dcl_path;
    auto dcl_source = read_file(dcl_path);
    if (!dcl_source) {
      r.io_failure = true;
      r.diagnostics.push_back(make_diagnostic(Severity::error, rules::io_error, {},
                                              "cannot read " + dcl_path.string()));
      return r;
    }
    try {
      dcl = parse_source(*dcl_source, clean::ModuleKind::definition);
    } catch (const Error& e) {
      Diagnostic d = e.to_diagnostic();
      d.message = dcl_path.filename().string() + ": " + d.message;
      r.diagnostics.push_back(std::move(d));
      return r;
    }
  }

  clean::CleanModule icl;
  try {
    icl = parse_source(*source, clean::ModuleKind::implementation);
  } catch (const Error& e) {
    r.diagnostics.push_back(e.to_diagnostic());
    return r;
  }

  if (icl.name != icl_path.stem().string())
    r.diagnostics.push_back(make_diagnostic(
        Severity::warning, rules::module_name_mismatch, icl.loc.span,
        "module '" + icl.name + "' is in file '" + icl_path.filename().string() +
            "'; the output is named after the file"));

  try {
    LinkedTranslation t = translate_linked(dcl, icl, config.options);
    r.diagnostics.insert(r.diagnostics.end(), t.diagnostics.begin(), t.diagnostics.end());
    r.uniqueness = std::move(t.uniqueness);
    r.haskell = emit(t.module, config.style);
  } catch (const Error& e) {
    r.diagnostics.push_back(e.to_diagnostic());
  }
  return r;
}

std::string report_json(const std::string& file, const std::vector<Diagnostic>& diags,
                        const UniquenessReport& uniq) {
  return report_object(file, diags, uniq).dump(2);
}

int run(const RunConfig& config, std::ostream& err) {
  std::vector<fs::path> files;
  try {
    if (config.inputs.empty()) throw std::runtime_error("no input files");
    files = discover_inputs(config.inputs);
  } catch (const std::exception& e) {
    err << "clean2hs: " << e.what() << "\n";
    return 2;
  }

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    err << "clean2hs: cannot create " << config.output_dir.string() << ": " << ec.message() << "\n";
    return 2;
  }

  bool color = use_color(config.color);
  bool io_failure = false;
  bool errors = false;
  bool warnings = false;
  ordered_json report = ordered_json::array();

  for (auto& file : files) {
    FileResult r = process_file(file, config);
    io_failure = io_failure || r.io_failure;
    for (auto& d : sorted(r.diagnostics)) {
      print_diagnostic(err, file.string(), d, color);
      errors = errors || d.severity == Severity::error;
      warnings = warnings || d.severity == Severity::warning;
    }
    if (r.haskell) {
      fs::path out = config.output_dir / (file.stem().string() + ".hs");
      std::ofstream os(out, std::ios::binary);
      os << *r.haskell;
      if (!os) {
        err << "clean2hs: cannot write " << out.string() << "\n";
        io_failure = true;
      }
    }
    report.push_back(report_object(file.string(), r.diagnostics, r.uniqueness));
  }

  if (config.report_path) {
    std::ofstream os(*config.report_path, std::ios::binary);
    os << report.dump(2) << "\n";
    if (!os) {
      err << "clean2hs: cannot write " << config.report_path->string() << "\n";
      io_failure = true;
    }
  }

  if (io_failure) return 2;
  if (errors || (config.fail_on_warning && warnings)) return 1;
  return 0;
}

}  // namespace clean2hs
