#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "latentsplit/error.hpp"
#include "latentsplit/network_json.hpp"

using latentsplit::cli::RunConfig;
namespace cli = latentsplit::cli;

namespace {

// Config-file keys become "--key value" arguments placed before the real
// command line, so that explicit flags win (last value is taken).
std::vector<std::string> config_arguments(const nlohmann::json& doc) {
  if (!doc.is_object()) throw latentsplit::Error(latentsplit::ErrorKind::ParseError, "config must be a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : doc.items()) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
    } else if (value.is_string()) {
      args.push_back(flag);
      args.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      args.push_back(flag);
      args.push_back(value.dump());
    } else {
      throw latentsplit::Error(latentsplit::ErrorKind::ParseError, "config key '" + key + "' must be a scalar");
    }
  }
  return args;
}

void add_options(CLI::App& app, RunConfig& cfg, std::string& config_path) {
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", config_path, "JSON file with the same keys as the flags");
  app.add_option("--command", cfg.command, "rgb4-scan | rgb4-noise | fritz-scan | do-demo");
  app.add_option("--u-grid", cfg.u_grid, "u grid start:stop:step")->capture_default_str();
  app.add_option("--eps-grid", cfg.eps_grid, "epsilon grid start:stop:step")->capture_default_str();
  app.add_option("--v-range", cfg.v_range, "visibility bracket lo:hi for rgb4-noise")->capture_default_str();
  app.add_option("--u", cfg.u, "u for rgb4-noise and the triangle do-demo")->capture_default_str();
  app.add_option("--visibility", cfg.visibility, "source visibility")->capture_default_str();
  app.add_option("--tol-lp", cfg.tol_lp, "LP feasibility tolerance")->capture_default_str();
  app.add_option("--tol-bisect", cfg.tol_bisect, "bisection step tolerance")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads")->capture_default_str();
  app.add_option("--seed", cfg.seed, "sampler seed")->capture_default_str();
  app.add_option("--out", cfg.out, "output file, - for stdout")->capture_default_str();
  app.add_option("--format", cfg.format, "csv | json")->capture_default_str();
  app.add_option("--sanity", cfg.sanity, "classical samples per epsilon in fritz-scan")->capture_default_str();
  app.add_option("--preset", cfg.preset, "inflation preset: rgb4-fig5 | carrot | trivial")->capture_default_str();
  app.add_flag("--obs-only", cfg.obs_only, "rgb4-scan: only the observational LP");
  app.add_flag("--no-symmetry", cfg.no_symmetry, "drop copy-exchange symmetry from the LP");
  app.add_flag("--shared-hat-latent", cfg.shared_hat_latent, "rgb4-fig5: both hat copies read one latent copy");
  app.add_option("--scenario", cfg.scenario, "do-demo: all | instrumental | uc | triangle")->capture_default_str();
  app.add_option("--strategy", cfg.strategy, "do-demo: JSON strategy file");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;
  try {
    // First pass only finds --config.
    {
      CLI::App probe;
      probe.allow_extras();
      probe.set_help_flag();
      probe.add_option("--config", config_path);
      probe.parse(argc, argv);
    }
    std::vector<std::string> args;
    if (!config_path.empty()) args = config_arguments(latentsplit::read_json_file(config_path));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);

    CLI::App app{"Latent-splitting certification experiments"};
    add_options(app, cfg, config_path);
    std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      return app.exit(e) == 0 ? cli::kClean : cli::kUsage;
    }
    cfg.validate();
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return cli::kUsage;
  } catch (const latentsplit::Error& e) {
    std::cerr << "config: " << e.what() << '\n';
    return cli::kUsage;
  }

  try {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (cfg.out != "-") {
      file.open(cfg.out);
      if (!file) {
        std::cerr << "cannot open " << cfg.out << '\n';
        return cli::kUsage;
      }
      out = &file;
    }
    return cli::run_command(cfg, *out, std::cerr);
  } catch (const latentsplit::Error& e) {
    std::cerr << e.what() << '\n';
    return e.kind() == latentsplit::ErrorKind::NumericallyAmbiguous ? cli::kAmbiguous : cli::kUsage;
  }
}
