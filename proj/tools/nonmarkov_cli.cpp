// nonmarkov <fig3|fig4|fig5|measure|custom> --config <path> [--out <dir>] [--set key=value ...]

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nonmarkov/config.hpp"
#include "nonmarkov/errors.hpp"
#include "nonmarkov/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Open-system atom-cavity simulator"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  for (const char* name : {"fig3", "fig4", "fig5", "measure", "custom"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides out_dir)");
    sub->add_option("--set", overrides, "override a config key, key=value");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, std::cout, std::cerr);
    return rc == 0 ? 0 : 1;
  }

  try {
    nonmarkov::ExperimentConfig cfg = nonmarkov::load_config(config_path);
    for (const auto& o : overrides) cfg.apply_override(o);
    cfg.experiment = nonmarkov::parse_experiment(app.get_subcommands().front()->get_name());
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    const nonmarkov::ExperimentOutput out = nonmarkov::run_experiment(cfg);
    const std::string path = nonmarkov::write_output(out, cfg.out_dir);
    if (!out.summary.empty()) std::cout << out.summary << '\n';
    std::cerr << "wrote " << path << '\n';
    return 0;
  } catch (const nonmarkov::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nonmarkov::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
