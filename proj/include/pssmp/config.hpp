#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "pssmp/levy.hpp"

namespace pssmp {

enum class OutputFormat { Csv, Json };

// One experiment, as read from an INI-style file:
//
//   [model]       kind, a, sigma, alpha, rate, drift (plus jump_law, jump_p1, jump_p2)
//   [experiment]  name, op, replicas, horizon, step, seed, and op-specific keys
//   [output]      dir, format
//
// Unknown keys in [experiment] are kept in params for the operation to read.
struct ExperimentSpec {
  std::string name = "experiment";
  std::string op;
  LevyModel model = LevyModel::brownian_drift(0.5);
  std::size_t replicas = 100;
  double horizon = 1.0;
  double step = 1e-3;
  std::uint64_t seed = 1;
  std::map<std::string, std::string> params;
  std::string out_dir = "out";
  OutputFormat format = OutputFormat::Json;

  double param(const std::string& key, double fallback) const;
  std::string param(const std::string& key, const std::string& fallback) const;
  bool has(const std::string& key) const { return params.count(key) > 0; }
  // Canonical one-line-per-key text; its hash goes into the manifest.
  std::string canonical() const;
};

// Throws std::invalid_argument on malformed files or values.
ExperimentSpec parse_config(std::istream& in);
ExperimentSpec load_config(const std::string& path);

LevyModel parse_model(const std::map<std::string, std::string>& kv);
OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

// The seed actually used: command line, then PSSMP_SEED, then the file.
std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::uint64_t config_seed);
std::uint64_t parse_seed(const std::string& s);

}  // namespace pssmp
