#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "gmimo/config.hpp"
#include "gmimo/runner.hpp"
#include "gmimo/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Gigantic-MIMO simulation toolkit"};
  app.set_version_flag("--version", std::string("gmimo ") + gmimo::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  for (const std::string& name : gmimo::cli::experiment_names()) {
    CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
    sub->add_option("--config", config_path, "Scenario config (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return gmimo::cli::kExitConfigError;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  return gmimo::cli::run_from_file(experiment, config_path, {out_dir, threads}, std::cerr);
}
