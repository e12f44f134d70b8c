#include "pssmp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pssmp/io.hpp"

namespace pssmp {

namespace {

namespace pt = boost::property_tree;

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + key + "' is not a number: " + v);
  }
  if (used != v.size()) throw std::invalid_argument("'" + key + "' is not a number: " + v);
  return d;
}

JumpLaw parse_jump_law(const std::string& s) {
  if (s == "exponential") return JumpLaw::Exponential;
  if (s == "negative_exponential") return JumpLaw::NegativeExponential;
  if (s == "normal") return JumpLaw::Normal;
  if (s == "constant") return JumpLaw::Constant;
  throw std::invalid_argument("unknown jump_law: " + s);
}

std::map<std::string, std::string> section(const pt::ptree& tree, const std::string& name) {
  std::map<std::string, std::string> kv;
  if (auto s = tree.get_child_optional(name)) {
    for (const auto& [k, v] : *s) kv[k] = v.get_value<std::string>();
  }
  return kv;
}

}  // namespace

double ExperimentSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : to_double(key, it->second);
}

std::string ExperimentSpec::param(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

std::string ExperimentSpec::canonical() const {
  std::ostringstream os;
  os << "name=" << name << "\nop=" << op << "\nmodel=" << model.name() << "\nmodel.a=" << format_double(model.a)
     << "\nmodel.sigma=" << format_double(model.sigma) << "\nmodel.alpha=" << format_double(model.alpha)
     << "\nmodel.rate=" << format_double(model.rate) << "\nmodel.drift=" << format_double(model.drift)
     << "\nmodel.jump_law=" << static_cast<int>(model.jump_law) << "\nmodel.jump_p1=" << format_double(model.jump_p1)
     << "\nmodel.jump_p2=" << format_double(model.jump_p2) << "\nreplicas=" << replicas
     << "\nhorizon=" << format_double(horizon) << "\nstep=" << format_double(step) << "\nseed=" << seed
     << "\nformat=" << to_string(format) << "\n";
  for (const auto& [k, v] : params) os << "param." << k << "=" << v << "\n";
  return os.str();
}

LevyModel parse_model(const std::map<std::string, std::string>& kv) {
  auto get = [&](const std::string& k, double fallback) {
    auto it = kv.find(k);
    return it == kv.end() ? fallback : to_double(k, it->second);
  };
  const auto it = kv.find("kind");
  const std::string kind = it == kv.end() ? "brownian_drift" : it->second;
  LevyModel m;
  if (kind == "brownian_drift") {
    m = LevyModel::brownian_drift(get("a", 0.5), get("sigma", 1.0));
  } else if (kind == "stable") {
    m = LevyModel::spectrally_negative_stable(get("alpha", 1.5));
  } else if (kind == "stable_subordinator") {
    m = LevyModel::stable_subordinator(get("alpha", 0.5));
  } else if (kind == "compound_poisson") {
    auto law = kv.count("jump_law") ? parse_jump_law(kv.at("jump_law")) : JumpLaw::NegativeExponential;
    m = LevyModel::compound_poisson(get("rate", 1.0), law, get("jump_p1", 1.0), get("jump_p2", 0.0),
                                    get("drift", 1.0));
  } else if (kind == "poisson") {
    m = LevyModel::unit_poisson();
  } else {
    throw std::invalid_argument("unknown model kind: " + kind);
  }
  m.validate();
  return m;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("format must be csv or json, got " + s);
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &used, 0);
  } catch (const std::exception&) {
    throw std::invalid_argument("seed must be an unsigned 64-bit integer: " + s);
  }
  if (used != s.size()) throw std::invalid_argument("seed must be an unsigned 64-bit integer: " + s);
  return static_cast<std::uint64_t>(v);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> cli, std::uint64_t config_seed) {
  if (cli) return *cli;
  if (const char* env = std::getenv("PSSMP_SEED"); env && *env) return parse_seed(env);
  return config_seed;
}

ExperimentSpec parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  ExperimentSpec spec;
  spec.model = parse_model(section(tree, "model"));
  for (auto& [k, v] : section(tree, "experiment")) {
    if (k == "name")
      spec.name = v;
    else if (k == "op")
      spec.op = v;
    else if (k == "replicas") {
      const double r = to_double(k, v);
      if (r < 0.0 || r != std::floor(r)) throw std::invalid_argument("replicas must be a non-negative integer");
      spec.replicas = static_cast<std::size_t>(r);
    } else if (k == "horizon")
      spec.horizon = to_double(k, v);
    else if (k == "step")
      spec.step = to_double(k, v);
    else if (k == "seed")
      spec.seed = parse_seed(v);
    else
      spec.params[k] = v;
  }
  auto out = section(tree, "output");
  if (out.count("dir")) spec.out_dir = out["dir"];
  if (out.count("format")) spec.format = parse_format(out["format"]);
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  return parse_config(in);
}

}  // namespace pssmp
