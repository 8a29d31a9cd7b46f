#include <CLI11.hpp>
#include <fmt/core.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ktbrst/dsl.hpp"
#include "ktbrst/models.hpp"
#include "ktbrst/runner.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

ktbrst::Model load_model(const std::string& ref, std::vector<ktbrst::LintWarning>* warnings) {
  if (ktbrst::is_builtin_model(ref)) return ktbrst::build_builtin(ref);
  std::ifstream in(ref);
  if (!in) throw ktbrst::ConfigError("cannot open model file: " + ref);
  std::stringstream buf;
  buf << in.rdbuf();
  return ktbrst::parse_model(buf.str(), warnings);
}

void print_warnings(const std::vector<ktbrst::LintWarning>& warnings) {
  for (const auto& w : warnings)
    fmt::print(stderr, "warning: {}:{}: {}\n", w.line, w.col, w.message);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded jet-calculus verification of field-antifield models"};
  app.set_version_flag("--version", std::string(ktbrst::kEngineVersion));
  app.require_subcommand(1);

  std::string model_ref;
  std::string only;
  std::string format = "text";
  std::string out_path;
  int jobs = 1;

  CLI::App* check = app.add_subcommand("check", "run the verification suite over a model");
  check->add_option("model", model_ref, "built-in model name or .ktb file")->required();
  check->add_option("--only", only, "comma-separated check ids (prefixes allowed)");
  check->add_option("--format", format, "report format: text | structured")
      ->check(CLI::IsMember({"text", "structured"}));
  check->add_option("--jobs", jobs, "run up to N checks concurrently")->check(CLI::Range(1, 64));
  check->add_option("--out", out_path, "write the report to a file instead of stdout");

  CLI::App* dump_el = app.add_subcommand("dump-el", "print the Euler-Lagrange components");
  dump_el->add_option("model", model_ref, "built-in model name or .ktb file")->required();

  CLI::App* list_models = app.add_subcommand("list-models", "list built-in models");

  CLI::App* render = app.add_subcommand("render", "print a model as DSL source");
  render->add_option("model", model_ref, "built-in model name or .ktb file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (list_models->parsed()) {
      for (const std::string& name : ktbrst::builtin_model_names()) fmt::print("{}\n", name);
      return kExitPass;
    }

    std::vector<ktbrst::LintWarning> warnings;
    ktbrst::Model model = load_model(model_ref, &warnings);
    print_warnings(warnings);

    if (render->parsed()) {
      fmt::print("{}", ktbrst::render_model(model));
      return kExitPass;
    }
    if (dump_el->parsed()) {
      ktbrst::EulerLagrange el = ktbrst::euler_lagrange(model.lagrangian);
      for (const auto& [field, comp] : el.components)
        fmt::print("{}: {}\n", model.space->decl(field).name, comp.str());
      return kExitPass;
    }

    ktbrst::CheckSelection selection;
    if (check->count("--only") > 0) {
      std::stringstream ss(only);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) selection.only.push_back(item);
      if (selection.only.empty()) selection = ktbrst::CheckSelection::empty();
    }
    ktbrst::CheckReport report = ktbrst::run_checks(model, selection, jobs);
    ktbrst::ReportFormat rf =
        format == "structured" ? ktbrst::ReportFormat::Structured : ktbrst::ReportFormat::Text;
    std::string rendered = ktbrst::emit_report(report, rf);
    if (out_path.empty()) {
      fmt::print("{}", rendered);
    } else {
      std::ofstream out(out_path);
      if (!out) throw ktbrst::ConfigError("cannot write report: " + out_path);
      out << rendered;
    }
    return report.all_passed() ? kExitPass : kExitCheckFailed;
  } catch (const ktbrst::ParseError& e) {
    fmt::print(stderr, "parse error at {}:{}: {}\n", e.line, e.col, e.what());
    return kExitUsage;
  } catch (const ktbrst::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitUsage;
  }
}
