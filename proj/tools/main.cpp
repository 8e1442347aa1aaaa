#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acslab/errors.hpp"
#include "acslab/runner.hpp"
#include "acslab/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Anti-invariant cohomology experiments on the 4-torus"};
  app.require_subcommand(1);

  std::string config;
  std::optional<unsigned> seed;
  std::optional<int> resolution;
  std::optional<std::string> out_dir;

  auto add_config_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON experiment configuration")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "Override the configured seed");
    cmd->add_option("--resolution-override", resolution, "Override grid.resolution");
    cmd->add_option("--out-dir", out_dir, "Override output.dir");
  };

  auto* run_cmd = app.add_subcommand("run", "Run one configured experiment");
  add_config_flags(run_cmd);

  auto* validate_cmd = app.add_subcommand("validate-config", "Check a configuration without running it");
  add_config_flags(validate_cmd);

  std::string suite = "all";
  auto* reproduce_cmd = app.add_subcommand("reproduce", "Run a named acceptance criterion or \"all\"");
  reproduce_cmd->add_option("suite", suite, "Criterion name or \"all\"");
  reproduce_cmd->add_flag_callback("--list", [] {
    for (const auto& n : acslab::suite_names()) std::cout << n << "\n";
    std::exit(0);
  }, "List criterion names");

  std::string field_path;
  auto* dump_cmd = app.add_subcommand("dump-field", "Print the header and ranges of a field file");
  dump_cmd->add_option("file", field_path, "Field file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const acslab::RunOverrides overrides{seed, resolution, out_dir};
    if (*run_cmd) {
      const auto cfg = acslab::load_config(config, overrides);
      const auto result = acslab::run(cfg);
      std::cout << result.json_path << "\n";
      if (!result.csv_path.empty()) std::cout << result.csv_path << "\n";
      if (result.exit_code != 0) std::cerr << result.record;
      return result.exit_code;
    }
    if (*validate_cmd) {
      const auto cfg = acslab::load_config(config, overrides);
      std::cout << "ok: " << cfg.kind << " at N=" << cfg.grid.resolution << "\n";
      return 0;
    }
    if (*reproduce_cmd) return acslab::reproduce(suite, std::cout);
    if (*dump_cmd) {
      acslab::dump_field(field_path, std::cout);
      return 0;
    }
  } catch (const acslab::Error& e) {
    const nlohmann::ordered_json record{
        {"status", "error"}, {"kind", std::string(acslab::to_string(e.kind()))}, {"message", e.what()}};
    std::cerr << record.dump() << "\n";
    return 2;
  }
  return 0;
}
