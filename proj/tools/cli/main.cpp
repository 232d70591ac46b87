#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> quantile;
  std::optional<std::size_t> rank;
  std::optional<double> grid_step;
};

void add_common(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "JSON run configuration");
  sub->add_option("--seed", flags.seed, "random seed (overrides the config)");
  sub->add_option("--out-dir", flags.out_dir, "output directory (overrides the config)");
  sub->add_option("--quantile", flags.quantile, "row-mean quantile for diagonal thresholding");
  sub->add_option("--rank", flags.rank, "number of principal components to keep");
  sub->add_option("--grid-step", flags.grid_step, "quadrature grid step");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace profex::cli;

  CLI::App app{"profex: profile random vectors for multivariate extremes"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"simulate", "fit", "pca", "link"}) {
    add_common(app.add_subcommand(name, std::string(name) + " command"), flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    RunConfig config = flags.config.empty() ? RunConfig::from_json(command, json::object())
                                            : RunConfig::load(command, flags.config);
    if (flags.seed) config.params["seed"] = *flags.seed;
    if (flags.quantile) config.params["quantile"] = *flags.quantile;
    if (flags.rank) config.params["rank"] = *flags.rank;
    if (flags.grid_step) config.params["grid_step"] = *flags.grid_step;
    if (flags.out_dir) config.out_dir = *flags.out_dir;

    const CommandResult result = run_command(config);
    for (const auto& name : result.outputs) std::cout << (config.out_dir / name).string() << '\n';
    return 0;
  } catch (const profex::Error& e) {
    std::cerr << "profex " << command << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "profex " << command << ": config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "profex " << command << ": " << e.what() << '\n';
    return 4;
  }
}
