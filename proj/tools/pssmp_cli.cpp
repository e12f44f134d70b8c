#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pssmp/config.hpp"
#include "pssmp/runner.hpp"

namespace {

int fail(const std::string& code, const std::string& message) {
  pssmp::Json e;
  e["code"] = code;
  e["message"] = message;
  std::cout << e.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and diagnostics for positive self-similar Markov processes"};
  // Stray words are caught after parsing so they can be reported as unknown operations.
  app.require_subcommand(0, 1);
  app.allow_extras();
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string config_path, out_dir, format, seed_text;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "INI file with [model], [experiment] and [output] sections")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed_text, "Master seed (u64); beats PSSMP_SEED and the config file");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", format, "Result format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--param,-p", overrides, "Experiment key=value, overriding the config (repeatable)");

  const std::map<std::string, std::string> commands = {
      {"simulate", "Sample pssMp paths (x = 0 uses the block construction from 0)"},
      {"passage", "First or last passage samples, directly or through the duality identities"},
      {"integral-test", "Classify an envelope integral test as convergent or divergent"},
      {"lil", "Empirical iterated-logarithm statistics on squared Bessel paths"},
      {"duality-check", "KS comparison of direct passage times against their dual functionals"},
      {"bessel", "Squared Bessel transforms, transitions and special functions"},
      {"run", "Run the operation named by op in the config file"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("bad_params", e.what());
  }
  const auto extras = app.remaining(true);
  if (!extras.empty()) {
    if (extras.front().starts_with("-") || !app.get_subcommands().empty())
      return fail("bad_params", "unexpected argument " + extras.front());
    return fail("unknown_op", "unknown operation " + extras.front());
  }
  if (app.get_subcommands().empty()) return fail("bad_params", "a subcommand is required");

  pssmp::ExperimentSpec spec;
  try {
    if (!config_path.empty()) spec = pssmp::load_config(config_path);
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub != "run") spec.op = sub;
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--param expects key=value, got " + kv);
      const std::string key = kv.substr(0, eq);
      const std::string value = kv.substr(eq + 1);
      if (key == "replicas") {
        if (value.empty() || value[0] == '-') throw std::invalid_argument("replicas must be a non-negative integer");
        spec.replicas = std::stoul(value);
      } else if (key == "horizon") {
        spec.horizon = std::stod(value);
      } else if (key == "step") {
        spec.step = std::stod(value);
      } else {
        spec.params[key] = value;
      }
    }
    std::optional<std::uint64_t> cli_seed;
    if (!seed_text.empty()) cli_seed = pssmp::parse_seed(seed_text);
    spec.seed = pssmp::resolve_seed(cli_seed, spec.seed);
    if (!out_dir.empty()) spec.out_dir = out_dir;
    if (!format.empty()) spec.format = pssmp::parse_format(format);
  } catch (const std::exception& e) {
    return fail("bad_params", e.what());
  }

  const auto res = pssmp::run_experiment(spec);
  if (res.exit_code != 0) {
    std::cout << res.error.dump() << "\n";
    return res.exit_code;
  }
  for (const auto& a : res.artifacts) std::cerr << spec.out_dir << "/" << a << "\n";
  return 0;
}
