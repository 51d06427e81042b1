#include <string>

#include <CLI11.hpp>

#include "raman/cli.hpp"
#include "raman/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Green-function mode analysis of single-pass stimulated Raman scattering"};
  app.require_subcommand(1, 1);
  std::string config;
  std::string out;
  unsigned jobs = 0;
  for (const auto& name : raman::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "flat section.key = value file")->required()->check(
        CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "worker threads (default: logical cores)");
    sub->add_option("--out", out, "output directory (overrides output.directory)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? raman::exit_ok : raman::exit_usage;
  }
  return raman::run_from_file(app.get_subcommands().front()->get_name(), config, jobs, out);
}
