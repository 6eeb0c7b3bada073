#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mwfpi/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Matter-wave Fabry-Perot cavity simulator"};
  std::string scenario, config_path, out_dir;
  int workers = 0;
  bool serial = false;
  std::vector<std::string> overrides;
  app.add_option("scenario", scenario, "spectrum | transmit | sweep | resonances | asymmetric | bragg-table")
      ->required()
      ->check(CLI::IsMember(mwfpi::scenario_names()));
  app.add_option("--config", config_path, "JSON config merged over the built-in defaults");
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--workers", workers, "worker threads (default: MWFPI_WORKERS or all cores)")->check(CLI::PositiveNumber);
  app.add_option("--override", overrides, "dotted key=value applied after the config file");
  app.add_flag("--serial", serial, "use the serial reference path");
  app.add_flag_callback("--print-defaults", [] {
    std::cout << mwfpi::default_config_json().dump(2) << "\n";
    std::exit(0);
  }, "print the default config and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  mwfpi::ScenarioConfig cfg;
  try {
    if (!out_dir.empty()) overrides.push_back("output.dir=\"" + out_dir + "\"");
    cfg = mwfpi::load_config(config_path, overrides, scenario);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    const auto m = mwfpi::run(cfg, workers, serial ? mwfpi::Execution::Serial : mwfpi::Execution::Parallel);
    std::cout << m.scenario << ": " << m.points.size() << " point(s), " << m.failures() << " failed, "
              << m.files.size() << " file(s) in " << cfg.output_dir << " (" << m.wall_seconds << " s)\n";
    if (!m.summary.empty()) std::cout << m.summary.dump(2) << "\n";
    return m.failures() > 0 ? 2 : 0;
  } catch (const mwfpi::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == mwfpi::ErrorKind::Config ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
