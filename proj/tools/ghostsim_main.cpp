#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ghostsim/config.hpp"
#include "ghostsim/scenario.hpp"

namespace {

struct GlobalFlags {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool quiet = false;
};

void add_global_flags(CLI::App& app, GlobalFlags& flags) {
  app.add_option("--out", flags.out, "output directory (overrides config)")
      ->envname("GHOSTSIM_OUT");
  app.add_option("--seed", flags.seed, "random seed (overrides config)")
      ->envname("GHOSTSIM_SEED");
  app.add_option("--threads", flags.threads, "worker threads (overrides config)")
      ->envname("GHOSTSIM_THREADS");
  app.add_flag("--quiet", flags.quiet, "suppress progress output")
      ->envname("GHOSTSIM_QUIET");
}

void apply_overrides(ghostsim::ScenarioConfig& sc, const GlobalFlags& flags) {
  if (flags.out) sc.out_dir = *flags.out;
  if (flags.seed) sc.seed = *flags.seed;
  if (flags.threads) sc.threads = *flags.threads;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-optics simulator for shared-lens correlated-photon imaging"};
  app.require_subcommand(1);

  GlobalFlags flags;
  add_global_flags(app, flags);

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "run the configured engines on one scene");
  run_cmd->add_option("config", config_path, "scenario config file")->required();
  CLI::App* decompose_cmd =
      app.add_subcommand("decompose", "split the configured aberration into parity parts");
  decompose_cmd->add_option("config", config_path, "scenario config file")->required();
  CLI::App* noise_cmd =
      app.add_subcommand("noise", "run the dark-current cancellation experiment");
  noise_cmd->add_option("config", config_path, "noise config file")->required();
  CLI::App* objects_cmd = app.add_subcommand("objects", "query built-in objects");
  std::string objects_action;
  objects_cmd->add_option("action", objects_action, "'list'")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (objects_cmd->parsed()) {
      if (objects_action != "list") {
        std::fprintf(stderr, "unknown objects action '%s' (expected 'list')\n",
                     objects_action.c_str());
        return 2;
      }
      for (const std::string& name : ghostsim::standard_object_names())
        std::printf("%s\n", name.c_str());
      return 0;
    }

    const ghostsim::ConfigFile cfg = ghostsim::ConfigFile::parse_file(config_path);
    if (run_cmd->parsed()) {
      ghostsim::ScenarioConfig sc = ghostsim::load_scenario_config(cfg);
      apply_overrides(sc, flags);
      const ghostsim::RunSummary summary = ghostsim::run_scenario(sc, flags.quiet);
      if (!flags.quiet)
        for (const std::string& f : summary.files) std::printf("wrote %s\n", f.c_str());
      return 0;
    }
    if (decompose_cmd->parsed()) {
      ghostsim::ScenarioConfig sc = ghostsim::load_scenario_config(cfg);
      apply_overrides(sc, flags);
      const ghostsim::DecomposeSummary summary = ghostsim::decompose_scenario(sc);
      if (!flags.quiet) {
        std::printf("wrote %s\nwrote %s\nreconstruction_error %.17g\n",
                    summary.even_file.c_str(), summary.odd_file.c_str(),
                    summary.reconstruction_error);
      }
      return 0;
    }
    if (noise_cmd->parsed()) {
      ghostsim::NoiseRunConfig nc = ghostsim::load_noise_config(cfg);
      if (flags.out) nc.out_dir = *flags.out;
      if (flags.seed) nc.cancellation.seed = *flags.seed;
      if (flags.threads) nc.cancellation.threads = *flags.threads;
      const std::string path = ghostsim::noise_scenario(nc);
      if (!flags.quiet) std::printf("wrote %s\n", path.c_str());
      return 0;
    }
  } catch (const ghostsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ghostsim::GuardError& e) {
    std::fprintf(stderr, "guard violation: %s\n", e.what());
    return 3;
  } catch (const ghostsim::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
