#include <iostream>

#include "CLI11.hpp"
#include "sumlab/cli.hpp"

using namespace sumlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"Subset-sum experiments with checkable certificates"};
  app.set_version_flag("--version", kVersion);

  ExperimentConfig flags;
  std::string config_path;
  std::string format = "json";
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  bool list = false;

  app.add_option("-e,--experiment", flags.experiment, "experiment name");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", flags.out_dir, "output directory");
  app.add_option("-p,--param", params, "parameter key=value, repeatable");
  app.add_option("--config", config_path, "JSON config; flags override it");
  app.add_option("--format", format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  app.add_flag("--list", list, "list experiments and their parameters");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& e : experiments()) {
      std::cout << e.name << (e.randomized ? " (seeded)" : "") << ": " << e.help << "\n";
      for (const auto& p : e.params) std::cout << "    " << p.key << (p.required ? " (required)" : "") << "\n";
    }
    return 0;
  }

  try {
    if (*seed_opt) flags.seed = seed;
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError(kv, "expected key=value, got " + kv);
      flags.params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    const ExperimentConfig config = config_path.empty() ? flags : merge(load_config(config_path), flags);
    const Report report = run(config);
    const std::string path = emit(report, format);
    std::cout << path << "\n";
    if (const auto bad = report.first_failure()) {
      std::cerr << "FAIL: " << report.certificates[*bad].claim << "\n";
      return 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
