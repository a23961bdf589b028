// dbk: command-line front end for the dbar-Koszul toolkit.
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dbk/app/commands.hpp"
#include "dbk/app/config.hpp"
#include "dbk/csv.hpp"
#include "dbk/error.hpp"

int main(int argc, char** argv) {
  using namespace dbk::app;
  tune_allocator();

  CLI::App app{"Koszul-complex dbar toolkit: identity suites, corona solver, approximation pipeline, "
               "Bergman-space Toeplitz and density checks"};
  app.require_subcommand(1, 1);
  app.set_help_flag("--help", "Print this help message and exit");

  std::string config_path;
  std::vector<std::string> overrides;
  std::string h, out;
  double eps = 0.0;
  int degree = 0;
  long long seed = -1;
  app.add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
  app.add_option("--h", h, "grid spacing (a number or 1/k)");
  app.add_option("--eps", eps, "target accuracy")->check(CLI::PositiveNumber);
  app.add_option("--degree", degree, "truncation or span degree")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "directory for CSV output");
  app.add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
  app.add_option("--set", overrides, "extra key=value override (repeatable)");

  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify-koszul", "T_f / wedge / dbar identity suite on the disc and bidisc"},
      {"corona", "corona solution g with sum f_j g_j = 1"},
      {"approximate", "uniform approximation of g by the lambda-net assembly"},
      {"toeplitz", "Bergman-space Toeplitz commutators and ||T_g(1) - g||"},
      {"density", "L2 distance of a field to span{z^a conj(f)^b}"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    if (!config_path.empty()) load_config(config_path, cfg);
    if (!h.empty()) set_key(cfg, "h", h);
    if (app.count("--eps")) cfg.eps = eps;
    if (app.count("--degree")) cfg.degree = degree;
    if (app.count("--out")) cfg.out = out;
    if (app.count("--seed")) cfg.seed = static_cast<std::uint64_t>(seed);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw dbk::HypothesisError("config", "--set expects key=value, got '" + kv + "'");
      set_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
  } catch (const dbk::HypothesisError& e) {
    std::cerr << "error: hypothesis " << e.what() << '\n';
    return kHypothesisFailed;
  }
  return run_command(command, cfg, std::cout, std::cerr);
}
