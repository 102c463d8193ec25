#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nclb/suites.hpp"

namespace {

struct CommonArgs {
  std::string preset;
  std::string json_path;
  nclb::RunOptions opt;
};

void add_common(CLI::App* cmd, CommonArgs& a, const char* default_preset) {
  auto* p = cmd->add_option("--preset", a.preset, "slq2, circle, or a preset file path");
  if (default_preset)
    p->default_val(default_preset);
  else
    p->required();
  cmd->add_option("--seed", a.opt.seed, "seed for the randomized checks")->default_val(0);
  cmd->add_option("--samples", a.opt.samples, "override the per-check sample counts");
  cmd->add_option("--json", a.json_path, "also write the report as JSON to this path");
  cmd->add_option("--q", a.opt.q0, "value of q for floating point evaluation")->default_val(1.0);
}

int emit(const nclb::RunReport& rep, const std::string& json_path) {
  if (!json_path.empty()) {
    std::ofstream os(json_path);
    if (!os) {
      std::cerr << "error: cannot write '" << json_path << "'\n";
      return 2;
    }
    os << nclb::report_json(rep).dump(2) << '\n';
  }
  nclb::print_report(std::cout, rep);
  return rep.all_ok() ? 0 : 1;
}

std::vector<std::string> parse_suite_list(const std::string& arg) {
  if (arg == "all") return nclb::suite_names();
  std::vector<std::string> out;
  std::string cur;
  for (char c : arg + ",") {
    if (c != ',') {
      cur += c;
      continue;
    }
    if (cur.empty()) continue;
    bool known = false;
    for (const std::string& k : nclb::suite_names()) known = known || k == cur;
    if (!known) nclb::fail(nclb::errc::unknown_suite, "no suite named '" + cur + "'");
    out.push_back(cur);
    cur.clear();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and numeric verification for line modules over graded star-algebras"};
  app.set_version_flag("--version", "nclb 0.1.0");
  app.require_subcommand(1);

  CommonArgs va;
  std::string suite_arg = "all";
  CLI::App* verify = app.add_subcommand("verify", "run verification suites on a preset");
  add_common(verify, va, nullptr);
  verify->add_option("--suite", suite_arg, "comma-separated suite names, or 'all'")
      ->default_val("all");
  verify->add_option("--module", va.opt.module_name,
                     "restrict module-based suites to one named module");

  CommonArgs ca;
  CLI::App* chern = app.add_subcommand("chern", "curvature trace of a line module connection");
  add_common(chern, ca, "slq2");
  chern->add_option("--zeta", ca.opt.zeta_text, "connection displacement one-form")
      ->default_val("0");
  chern->add_option("--module", ca.opt.module_name, "line module to differentiate");

  CommonArgs ta;
  std::string variant_arg;
  CLI::App* thom = app.add_subcommand("thom", "numeric checks for the fibre function algebras");
  add_common(thom, ta, "circle");
  thom->add_option("--variant", variant_arg, "c0, thom or circle-bundle (default: all three)")
      ->check(CLI::IsMember({"c0", "thom", "circle-bundle"}));
  thom->add_option("--grid", ta.opt.grid_n, "number of fibre grid points")->default_val(2048);
  thom->add_option("--window", ta.opt.window, "fibre coordinate runs over [-X, X]")
      ->default_val(20.0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed()) {
      nclb::PresetData pd = nclb::resolve_preset(va.preset);
      return emit(nclb::run_suites(pd, parse_suite_list(suite_arg), va.opt), va.json_path);
    }
    if (chern->parsed()) {
      nclb::PresetData pd = nclb::resolve_preset(ca.preset);
      return emit(nclb::run_suites(pd, {"chern"}, ca.opt), ca.json_path);
    }
    nclb::PresetData pd = nclb::resolve_preset(ta.preset);
    if (!variant_arg.empty()) ta.opt.variant = variant_arg;
    return emit(nclb::run_suites(pd, {"thom"}, ta.opt), ta.json_path);
  } catch (const nclb::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
