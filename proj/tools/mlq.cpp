#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mlq/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Minimal Lagrangian surfaces in Q2 from loop-group potentials"};
  app.require_subcommand(1);
  std::string config, out;
  int jobs = 0;
  for (const char* name : {"generate", "verify", "closing", "family"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--jobs", jobs, "worker threads (MLQ_JOBS overrides)")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mlq::kExitUsage;
  }
  mlq::CommandContext ctx;
  ctx.out_dir = out;
  ctx.jobs = jobs;
  ctx.log = &std::cout;
  return mlq::run_command(app.get_subcommands().front()->get_name(), config, ctx, std::cerr);
}
