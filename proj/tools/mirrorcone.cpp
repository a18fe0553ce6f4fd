#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mirrorcone/config.hpp"
#include "mirrorcone/fixtures.hpp"
#include "mirrorcone/report.hpp"

using namespace mirrorcone;

namespace {

Config load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::set<std::string> split_sections(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

int run_validate(const std::string& path) {
  Config cfg = load(path);
  auto res = validate_config(cfg);
  (res.code == kExitOk ? std::cout : std::cerr) << res.message << "\n";
  return res.code;
}

int run_analyze(const std::string& path, const std::string& sections, bool algebra, std::optional<std::size_t> cutoff,
                std::optional<unsigned long> perturb, const std::string& out_path) {
  Config cfg = load(path);
  if (algebra) cfg.flags.algebra = true;
  if (cutoff) cfg.flags.cutoff = cutoff;
  if (perturb) cfg.flags.perturb = perturb;
  auto res = analyze(cfg, split_sections(sections));
  const std::string text = render(res.report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw ConfigError(out_path, "cannot write file");
    out << text;
  }
  for (const auto& d : res.diagnostics) std::cerr << "check failed [" << d << "]\n";
  return res.code;
}

int run_examples(const std::vector<std::string>& args) {
  if (args.empty() || args[0] == "list") {
    for (const auto& n : fixture_names()) std::cout << n << "\n";
    return kExitOk;
  }
  if (args[0] == "show" && args.size() == 2) {
    ToricInput in;
    try {
      in = fixture(args[1]);
    } catch (const std::out_of_range& e) {
      std::cerr << e.what() << "\n";
      return kExitInput;
    }
    std::cout << render(config_to_json(Config{in, {}}));
    return kExitOk;
  }
  std::cerr << "usage: mirrorcone examples list | show NAME\n";
  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toric mirror data: conditions, fans, grading, B-side checks and the Koszul algebra"};
  app.require_subcommand(1);

  std::string cfg_path;
  auto* validate_cmd = app.add_subcommand("validate", "check the lattice axioms of a config");
  validate_cmd->add_option("config", cfg_path, "config file (JSON)")->required();

  std::string sections, out_path;
  bool algebra = false;
  std::optional<std::size_t> cutoff;
  std::optional<unsigned long> perturb;
  auto* analyze_cmd = app.add_subcommand("analyze", "run the analysis and print a JSON report");
  analyze_cmd->add_option("config", cfg_path, "config file (JSON)")->required();
  analyze_cmd->add_option("--sections", sections, "comma-separated subset of: input,conditions,groups,xi,subdivision,grading,bside,algebra");
  analyze_cmd->add_flag("--algebra", algebra, "compute the Koszul algebra and deformation classes");
  analyze_cmd->add_option("--cutoff", cutoff, "z-degree cutoff for graded dimensions");
  analyze_cmd->add_option("--perturb", perturb, "perturb lambda generically with this seed");
  analyze_cmd->add_option("--out", out_path, "write the report here instead of stdout");

  std::vector<std::string> example_args;
  auto* examples_cmd = app.add_subcommand("examples", "list or show the built-in examples");
  examples_cmd->add_option("args", example_args, "list | show NAME");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*validate_cmd) return run_validate(cfg_path);
    if (*analyze_cmd) return run_analyze(cfg_path, sections, algebra, cutoff, perturb, out_path);
    if (*examples_cmd) return run_examples(example_args);
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ModuleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitCertificate;
  }
  return kExitInput;
}
