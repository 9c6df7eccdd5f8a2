#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "burgers/cli.hpp"

int main(int argc, char** argv) {
  using namespace burgers::cli;
  CLI::App app{"Caustics, Maxwell sets and turbulence processes for polynomial Burgers initial data"};
  app.require_subcommand(1);
  RunOptions opt;
  std::string file;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  for (auto* sub : {app.add_subcommand("run", "compute the products of a scenario"),
                    app.add_subcommand("verify", "run a scenario and compare against its [expect] block")}) {
    sub->add_option("file", file, "scenario file")->required();
    sub->add_option("--out", opt.out, "output directory (overrides the scenario)");
    sub->add_option("--seed", seed, "master seed (overrides the scenario)");
    sub->add_option("--threads", threads, "worker threads for ensembles")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--tol-report", opt.tol_report, "print tolerances and check margins");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }
  const auto* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opt.seed = seed;
  opt.threads = threads;
  return execute(sub->get_name(), file, opt, std::cout, std::cerr);
}
