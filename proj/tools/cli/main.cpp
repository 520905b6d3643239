#include "mwcli/commands.hpp"

#include <mw/errors.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"Convex-body calculus for matrix weights on dyadic grids"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::string suite;
  std::uint64_t seed = 0;
  int jobs = 0;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "seed (overrides config)");
  auto* suite_opt = app.add_option("--suite", suite, "suite name for verify: acceptance | smoke");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  const std::map<std::string, int (*)(const mwcli::CommandContext&)> verbs{
      {"gen", mwcli::cmd_gen},         {"ap", mwcli::cmd_ap},
      {"maximal", mwcli::cmd_maximal}, {"sparse", mwcli::cmd_sparse},
      {"extrapolate", mwcli::cmd_extrapolate}, {"verify", mwcli::cmd_verify}};
  const std::map<std::string, std::string> help{
      {"gen", "write weight, convex field and vector field files"},
      {"ap", "matrix A_p constant over all dyadic cubes"},
      {"maximal", "maximal operator and averaging operator norm reports"},
      {"sparse", "stopping-time sparse domination and its verification"},
      {"extrapolate", "Rubio de Francia extrapolation certificate"},
      {"verify", "acceptance suite"}};
  for (const auto& [name, fn] : verbs) app.add_subcommand(name, help.at(name))->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mwcli::kExitConfig;
  }

  try {
    mwcli::CommandContext ctx;
    if (!config_path.empty()) ctx.config = mwcli::Config::load(config_path);
    if (*seed_opt) ctx.config.set("seed", std::to_string(seed));
    if (*suite_opt) ctx.config.set("suite", suite);
    if (*jobs_opt) ctx.config.set("jobs", std::to_string(jobs));
    ctx.out_dir = out_dir;
    ctx.log = &std::cout;
    const std::string verb = app.get_subcommands().front()->get_name();
    return verbs.at(verb)(ctx);
  } catch (const mwcli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mwcli::kExitConfig;
  } catch (const mw::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mwcli::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "FAIL internal error: " << e.what() << '\n';
    return mwcli::kExitFailure;
  }
}
