#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qdot/cli_commands.hpp"
#include "qdot/config.hpp"
#include "qdot/result_table.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 numerical non-convergence, 4 resource cap
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitResourceCap = 4;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool manifest = false;
};

int run(const std::string& command, const Options& opt) {
  std::optional<std::uint64_t> seed_override;
  if (opt.seed_given) seed_override = opt.seed;
  qdot::io::RunConfig cfg = qdot::io::load_run_config(opt.config_path, seed_override);

  const std::filesystem::path out_dir(opt.out_dir);
  std::filesystem::create_directories(out_dir);

  if (opt.manifest) {
    const auto path = out_dir / (cfg.output.prefix.empty()
                                     ? std::string("manifest.json")
                                     : cfg.output.prefix + "_manifest.json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << cfg.resolved_json << "\n";
    std::cout << "wrote " << path.string() << "\n";
  }

  qdot::io::CommandOutput output;
  if (command == "spectrum") {
    output = qdot::io::cmd_spectrum(cfg);
  } else if (command == "evolve") {
    output = qdot::io::cmd_evolve(cfg);
  } else if (command == "couple") {
    output = qdot::io::cmd_couple(cfg);
  } else if (command == "concurrence") {
    output = qdot::io::cmd_concurrence(cfg);
  } else if (command == "ed") {
    output = qdot::io::cmd_ed(cfg, out_dir);
  } else {
    std::cerr << "unknown command " << command << "\n";
    return 1;
  }

  for (const auto& [name, table] : output.tables) {
    const auto path = out_dir / name;
    qdot::io::write_csv(table, path);
    std::cout << "wrote " << path.string() << "\n";
  }
  for (const auto& note : output.notes) std::cout << note << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdot: two-electron square quantum-dot qubit simulation toolkit"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--config", opt.config_path, "path to the JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", opt.out_dir, "output directory (default: .)");
  auto* seed_opt = app.add_option("--seed", opt.seed, "override the config seed");
  app.add_flag("--manifest", opt.manifest, "dump the fully-resolved config for archival");

  // global options may appear after the subcommand name
  for (const char* name : {"spectrum", "evolve", "couple", "concurrence", "ed"})
    app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);
  opt.seed_given = seed_opt->count() > 0;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const qdot::io::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const qdot::io::NonConvergenceError& e) {
    std::cerr << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const qdot::io::ResourceCapError& e) {
    std::cerr << e.what() << "\n";
    return kExitResourceCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
