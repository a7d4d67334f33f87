#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "clean2hs/driver.hpp"

int main(int argc, char** argv) {
  using namespace clean2hs;
  CLI::App app{"Translate Clean modules to Haskell"};
  RunConfig config;
  config.color = color_from_env();

  std::vector<std::string> inputs;
  std::string out = ".";
  std::string report;
  StringType string_type = StringType::char_list;
  RealType real_type = RealType::double_precision;
  ParallelMode parallel = ParallelMode::zip;
  StrictnessMode strictness = StrictnessMode::bang;

  app.add_option("inputs", inputs, ".icl/.dcl files or directories")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--report", report, "write a JSON diagnostics report");
  app.add_option("--string", string_type, "String translation")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, StringType>{{"charlist", StringType::char_list},
                                            {"text", StringType::text}}));
  app.add_option("--real", real_type, "Real translation")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, RealType>{{"double", RealType::double_precision},
                                          {"float", RealType::single_precision}}));
  app.add_option("--parallel", parallel, "parallel generators")
      ->transform(CLI::CheckedTransformer(std::map<std::string, ParallelMode>{
          {"zip", ParallelMode::zip}, {"extension", ParallelMode::extension}}));
  app.add_option("--strictness", strictness, "strictness annotations")
      ->transform(CLI::CheckedTransformer(std::map<std::string, StrictnessMode>{
          {"bang", StrictnessMode::bang}, {"drop", StrictnessMode::drop}}));
  app.add_flag("--no-puns", config.options.no_puns, "bind record fields explicitly");
  app.add_flag("--fail-on-warning", config.fail_on_warning, "exit 1 on warnings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& i : inputs) config.inputs.emplace_back(i);
  config.output_dir = out;
  if (!report.empty()) config.report_path = report;
  config.options.string_type = string_type;
  config.options.real_type = real_type;
  config.options.parallel_mode = parallel;
  config.options.strictness = strictness;
  return run(config, std::cerr);
}
