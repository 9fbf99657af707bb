#include <CLI11.hpp>

#include <iostream>

#include "gseq/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gs: sigma_k geodesic equation toolkit"};
  std::string mode;
  std::string config;
  std::optional<int> threads;
  std::optional<std::string> out;
  bool verbose = false;
  app.add_option("mode", mode, "certify | solve | path | sweep | verify | export")
      ->required()
      ->check(CLI::IsMember({"certify", "solve", "path", "sweep", "verify", "export"}));
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--threads", threads, "worker threads (0 = all cores)");
  app.add_option("--out", out, "output directory");
  app.add_flag("--verbose", verbose, "progress on stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gseq::kExitUsage;
  }

  try {
    gseq::RunConfig cfg = gseq::load_config(config);
    if (gseq::mode_name(cfg.mode) != mode) {
      std::cerr << "error: command line mode \"" << mode << "\" differs from $.mode \"" << gseq::mode_name(cfg.mode)
                << "\"\n";
      return gseq::kExitUsage;
    }
    if (threads) cfg.threads = *threads;
    if (out) cfg.out = *out;
    return gseq::run(cfg, verbose, std::cerr);
  } catch (const gseq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return gseq::kExitUsage;
  } catch (const gseq::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return gseq::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return gseq::kExitUsage;
  }
}
