#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vekua/field_io.hpp"
#include "vekua/run.hpp"

namespace {

struct Cli {
  std::string config;
  std::optional<double> delta, alpha_re, alpha_im, scale;
  std::optional<int> trunc_L, nt;
  std::optional<std::string> prefix;
};

void add_common(CLI::App* sub, Cli& cli, bool config_required) {
  auto* c = sub->add_option("-c,--config", cli.config, "JSON run configuration");
  if (config_required) c->required();
  sub->add_option("--delta", cli.delta, "override operator.delta");
  sub->add_option("--alpha-re", cli.alpha_re, "override Re alpha");
  sub->add_option("--alpha-im", cli.alpha_im, "override Im alpha");
  sub->add_option("--trunc-L", cli.trunc_L, "override every truncation bound")->check(CLI::NonNegativeNumber);
  sub->add_option("--nt", cli.nt, "override the time grid size");
  sub->add_option("-o,--output-prefix", cli.prefix, "prefix for written files (default from the config)");
}

int run_cli(vekua::Task task, const Cli& cli) {
  vekua::Overrides ov;
  ov.task = task;
  ov.delta = cli.delta;
  ov.alpha_re = cli.alpha_re;
  ov.alpha_im = cli.alpha_im;
  ov.trunc_L = cli.trunc_L;
  ov.nt = cli.nt;

  vekua::RunConfig cfg;
  std::string base_dir = ".";
  try {
    if (cli.config.empty()) {
      // selftest without a file
      cfg.task = task;
      cfg.effective = {{"task", vekua::to_string(task)}};
    } else {
      cfg = vekua::parse_config(vekua::read_text(cli.config), ov);
      base_dir = std::filesystem::path(cli.config).parent_path().string();
      if (base_dir.empty()) base_dir = ".";
    }
  } catch (const std::exception& e) {
    std::cerr << "vekua: " << e.what() << "\n";
    return vekua::exit_code_for(e);
  }
  if (cli.scale) {
    if (!(*cli.scale > 0.0 && *cli.scale <= 1.0)) {
      std::cerr << "vekua: --scale must lie in (0, 1]\n";
      return vekua::kExitConfig;
    }
    cfg.selftest_scale = *cli.scale;
    cfg.effective["selftest"]["scale"] = *cli.scale;
  }
  if (cli.prefix) cfg.output_prefix = *cli.prefix;

  const vekua::RunOutcome out = vekua::run(cfg, base_dir, &std::cout);
  (out.exit_code == vekua::kExitOk ? std::cout : std::cerr)
      << "vekua " << vekua::to_string(task) << ": " << out.summary << "\n";
  for (const auto& f : out.files) std::cout << "wrote " << f << "\n";
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic Vekua-type operators on T^1 x G: solver and solvability checks"};
  app.footer(vekua::exit_code_table());
  app.require_subcommand(1);

  Cli cli;
  const std::pair<vekua::Task, const char*> tasks[] = {
      {vekua::Task::Solve, "solve P u = f for the configured forcing field"},
      {vekua::Task::Classify, "case verdict with evidence"},
      {vekua::Task::Resonances, "list every (mode, k) solving the resonance system"},
      {vekua::Task::Diophantine, "small-denominator checks (III), DC and DC'"},
      {vekua::Task::Oracle, "closed form vs shooting, side by side"},
      {vekua::Task::Selftest, "acceptance suite at reduced scale"},
  };
  for (const auto& [task, help] : tasks) {
    const bool selftest = task == vekua::Task::Selftest;
    auto* sub = app.add_subcommand(vekua::to_string(task), help);
    sub->footer(vekua::exit_code_table());
    add_common(sub, cli, !selftest);
    if (selftest) sub->add_option("--scale", cli.scale, "sample-count scale in (0, 1] (default 0.25)");
    sub->final_callback([task = task, &cli]() { throw CLI::RuntimeError(run_cli(task, cli)); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : vekua::kExitConfig;
  }
  return 0;
}
