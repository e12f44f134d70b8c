#include "pssmp/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pssmp/bessel.hpp"
#include "pssmp/passage.hpp"
#include "pssmp/rng.hpp"
#include "pssmp/special.hpp"

#ifndef PSSMP_VERSION
#define PSSMP_VERSION "0.0.0"
#endif

namespace pssmp {

namespace {

struct UnknownOp : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::size_t count_param(const ExperimentSpec& s, const std::string& key, std::size_t fallback) {
  const double v = s.param(key, static_cast<double>(fallback));
  if (!(v >= 1.0) || v != std::floor(v)) throw std::invalid_argument(key + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

End parse_end(const std::string& s) {
  if (s == "zero") return End::Zero;
  if (s == "infinity") return End::Infinity;
  throw std::invalid_argument("end must be zero or infinity");
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number in list: " + item);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::uint64_t replica_seed(const ExperimentSpec& s, std::size_t i) { return stream_key(s.seed, StreamTag::Harness, i); }

std::pair<Json, std::string> op_simulate(const ExperimentSpec& s) {
  const double x = s.param("x", 1.0);
  if (!(x >= 0.0)) throw std::invalid_argument("x must be >= 0");
  if (!(s.horizon > 0.0) || !(s.step > 0.0)) throw std::invalid_argument("horizon and step must be positive");
  std::vector<PssmpPath> paths(s.replicas);
  parallel_for(s.replicas, [&](std::size_t i) {
    if (x == 0.0) {
      ConstructOptions o;
      o.walk.step = s.step;
      o.walk.max_step = std::max(o.walk.max_step, s.step);
      paths[i] = construct_from_zero(s.model, s.horizon, replica_seed(s, i), o);
    } else {
      paths[i] = simulate_pssmp(s.model, x, s.horizon, s.step, replica_seed(s, i));
    }
  });
  Json j;
  j["op"] = "simulate";
  j["x"] = x;
  j["paths"] = Json::array();
  std::vector<double> t, v, r;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    j["paths"].push_back(path_json(paths[i]));
    t.insert(t.end(), paths[i].times.begin(), paths[i].times.end());
    v.insert(v.end(), paths[i].values.begin(), paths[i].values.end());
    r.insert(r.end(), paths[i].times.size(), static_cast<double>(i));
  }
  if (paths.size() == 1) return {j, path_csv(paths[0])};
  return {j, csv_table({"t", "value", "replica"}, {t, v, r})};
}

std::pair<Json, std::string> op_passage(const ExperimentSpec& s) {
  const std::string which = s.param("which", "S");
  const std::string method = s.param("method", "direct");
  const double y = s.param("y", 1.0);
  const double tol = s.param("tol", 1e-6);
  if (!(y > 0.0)) throw std::invalid_argument("y must be positive");
  PassageSamples ps;
  if (method == "direct") {
    DirectOptions o;
    o.walk.step = s.param("walk_step", o.walk.step);
    if (which == "S")
      ps = sample_S_direct(s.model, y, s.replicas, s.seed, o);
    else if (which == "U")
      ps = sample_U_direct(s.model, y, s.replicas, s.seed, o);
    else
      throw std::invalid_argument("which must be S or U");
  } else if (method == "duality") {
    if (which == "S") {
      DualityOptions o;
      o.x0 = s.param("x0", o.x0);
      ps = sample_S1_duality(s.model, s.replicas, tol, s.seed, o);
    } else if (which == "U") {
      ps = sample_U1_duality(s.model, s.replicas, tol, s.seed);
    } else {
      throw std::invalid_argument("which must be S or U");
    }
    for (double& v : ps.values) v *= y;  // S_y = y S_1 and U_y = y U_1 in law
  } else {
    throw std::invalid_argument("method must be direct or duality");
  }
  Json j;
  j["op"] = "passage";
  j["which"] = which;
  j["method"] = method;
  j["y"] = y;
  j["n"] = ps.values.size();
  j["truncation_bound"] = ps.truncation_bound;
  j["summary"] = summary_json(summarize(ps.values));
  const Ecdf e(ps.values);
  Json q;
  for (double p : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) q[format_double(p)] = e.quantile(p);
  j["quantiles"] = q;
  j["trials"] = ps.trials;
  j["samples"] = ps.values;
  return {j, samples_csv(ps.values)};
}

TailFunction tail_from(const ExperimentSpec& s, TestFunction& h) {
  const std::string tail = s.param("tail", "besq");
  if (tail == "besq") {
    const BesqParams p{s.param("delta", 3.0)};
    const std::string form = s.param("form", "squared");
    KdeForm f = KdeForm::SquaredGruetShi;
    if (form == "kde")
      f = KdeForm::SquaredKde;
    else if (form == "bessel")
      f = KdeForm::BesselKde;
    else if (form != "squared")
      throw std::invalid_argument("form must be squared, kde or bessel");
    h = kde_test_function(h, f);
    return kde_tail(p, f);
  }
  if (tail == "power") return TailFunction::power(s.param("beta", 1.0));
  if (tail == "inverse_exponential")
    return TailFunction::inverse_exponential(s.param("lambda", 1.0), s.param("tail_delta", 1.0));
  if (tail == "constant") return TailFunction::constant(s.param("value", 1.0));
  throw std::invalid_argument("unknown tail: " + tail);
}

std::pair<Json, std::string> op_integral_test(const ExperimentSpec& s) {
  const std::string test = s.param("test", "iterated_log");
  TestFunction h;
  if (test == "iterated_log")
    h = TestFunction::iterated_log(s.param("c", 1.5));
  else if (test == "sqrt_iterated_log")
    h = TestFunction::sqrt_iterated_log(s.param("c", 1.5));
  else if (test == "linear")
    h = TestFunction::linear(s.param("k", 1.0));
  else if (test == "power")
    h = TestFunction::power(s.param("p", 1.0), s.param("k", 1.0));
  else if (test == "log_power")
    h = TestFunction::log_power(s.param("gamma", 1.0), s.param("k", 1.0));
  else
    throw std::invalid_argument("unknown test function: " + test);
  const TailFunction F = tail_from(s, h);
  const End end = parse_end(s.param("end", "zero"));
  const std::string mode = s.param("mode", "upper");
  if (mode != "upper" && mode != "lower") throw std::invalid_argument("mode must be upper or lower");
  ClassifyBudget b;
  b.max_windows = static_cast<int>(count_param(s, "max_windows", static_cast<std::size_t>(b.max_windows)));
  b.rel_tol = s.param("rel_tol", b.rel_tol);
  const Verdict v = classify_integral(F, h, end, mode == "upper" ? TestMode::Upper : TestMode::Lower, b);
  Json j;
  j["op"] = "integral-test";
  j["tail"] = F.name();
  j["test"] = h.name;
  j["end"] = to_string(end);
  j["verdict"] = verdict_json(v);
  std::vector<double> lo, hi;
  for (std::size_t k = 0; k < v.partial_sums.size(); ++k) {
    lo.push_back(v.u_lo * std::ldexp(1.0, static_cast<int>(k)));
    hi.push_back(2.0 * lo.back());
  }
  return {j, csv_table({"u_lo", "u_hi", "partial_sum"}, {lo, hi, v.partial_sums})};
}

std::pair<Json, std::string> op_lil(const ExperimentSpec& s) {
  const BesqParams p{s.param("delta", 3.0)};
  const End end = parse_end(s.param("end", "infinity"));
  WindowGeometry g;
  g.q = s.param("q", 2.0);
  g.count = count_param(s, "windows", 24);
  g.T = s.param("anchor", end == End::Infinity ? 16.0 : 0.05);
  const std::size_t ppw = count_param(s, "points_per_window", 32);
  const std::size_t extra = count_param(s, "extension_windows", 8);
  const double kk = static_cast<double>(g.count);
  const double ex = static_cast<double>(extra);
  const double t0 = end == End::Infinity ? g.T / g.q : g.T * std::pow(g.q, -kk - 1.0);
  const double t1 = end == End::Infinity ? g.T * std::pow(g.q, kk + ex) : g.T * std::pow(g.q, ex);
  const auto grid = geometric_grid(t0, t1, (g.count + extra + 1) * ppw + 1);
  std::vector<PssmpPath> paths(s.replicas);
  parallel_for(s.replicas, [&](std::size_t i) { paths[i] = besq_path_on_grid(p, 0.0, grid, replica_seed(s, i)); });
  const GaugeSpec gauge = s.param("gauge", "besq_loglog") == "bessel_sqrt" ? GaugeSpec::bessel_sqrt()
                                                                            : GaugeSpec::besq_loglog();
  const auto rep = transfer_check(paths, gauge, end, g);
  Json j;
  j["op"] = "lil";
  j["delta"] = p.delta;
  j["x"] = stat_record_json(rep.x);
  j["j"] = stat_record_json(rep.j);
  j["x_minus_j"] = stat_record_json(rep.x_minus_j);
  std::vector<std::string> header = {"window_lo", "window_hi"};
  std::vector<std::vector<double>> cols = {rep.x.window_lo, rep.x.window_hi};
  for (std::size_t i = 0; i < rep.x.running.size(); ++i) {
    header.push_back("path_" + std::to_string(i));
    cols.push_back(rep.x.running[i]);
  }
  return {j, csv_table(header, cols)};
}

std::pair<Json, std::string> op_duality(const ExperimentSpec& s) {
  const std::string which = s.param("which", "S");
  const double tol = s.param("tol", 1e-6);
  PassageSamples direct, dual;
  if (which == "S") {
    DualityOptions o;
    o.x0 = s.param("x0", o.x0);
    direct = sample_S_direct(s.model, 1.0, s.replicas, s.seed);
    dual = sample_S1_duality(s.model, s.replicas, tol, s.seed, o);
  } else if (which == "U") {
    direct = sample_U_direct(s.model, 1.0, s.replicas, s.seed);
    dual = sample_U1_duality(s.model, s.replicas, tol, s.seed);
  } else {
    throw std::invalid_argument("which must be S or U");
  }
  const auto ks = ks_two_sample(direct.values, dual.values);
  Json j;
  j["op"] = "duality-check";
  j["which"] = which;
  j["n"] = s.replicas;
  j["ks"] = ks_json(ks);
  j["direct"] = summary_json(summarize(direct.values));
  j["duality"] = summary_json(summarize(dual.values));
  return {j, csv_table({"direct", "duality"}, {direct.values, dual.values})};
}

std::pair<Json, std::string> op_bessel(const ExperimentSpec& s) {
  const BesqParams p{s.param("delta", 3.0)};
  const std::string what = s.param("what", "laplace");
  Json j;
  j["op"] = "bessel";
  j["what"] = what;
  j["delta"] = p.delta;
  if (what == "laplace") {
    const auto lambdas = parse_list(s.param("lambda", "0.5,1,2"));
    std::vector<double> ls, lu;
    for (double l : lambdas) {
      ls.push_back(laplace_S1(p, l));
      lu.push_back(p.a() > 0.0 ? laplace_U1(p, l) : std::nan(""));
    }
    j["lambda"] = lambdas;
    j["laplace_S1"] = ls;
    if (p.a() > 0.0) j["laplace_U1"] = lu;
    return {j, csv_table({"lambda", "laplace_S1", "laplace_U1"}, {lambdas, ls, lu})};
  }
  if (what == "transition") {
    const double x = s.param("x", 1.0);
    const double t = s.param("t", 1.0);
    std::vector<double> out(s.replicas);
    for (std::size_t i = 0; i < s.replicas; ++i)
      out[i] = besq_transition_sample(p, x, t, stream_key(s.seed, StreamTag::Bessel, i));
    j["x"] = x;
    j["t"] = t;
    j["summary"] = summary_json(summarize(out));
    j["samples"] = out;
    return {j, samples_csv(out)};
  }
  if (what == "special") {
    const double a = s.param("a", p.a());
    const auto zs = parse_list(s.param("z", "0.5,1,2,5,10"));
    std::vector<double> iv, kv, av(zs.size(), a);
    for (double z : zs) {
      iv.push_back(bessel_I(a, z));
      kv.push_back(bessel_K(a, z));
    }
    j["a"] = a;
    j["z"] = zs;
    j["I"] = iv;
    j["K"] = kv;
    return {j, csv_table({"a", "z", "I", "K"}, {av, zs, iv, kv})};
  }
  if (what == "gruet_shi") {
    const auto samples = sample_S1_spectral(p, s.replicas, s.seed);
    const auto fit = fit_gruet_shi_constant(p, samples, parse_list(s.param("grid", "0.1,0.2,0.5,1,1.5,2")));
    j["K"] = fit.K;
    j["grid"] = fit.grid;
    j["empirical"] = fit.empirical;
    j["shape"] = fit.shape;
    return {j, csv_table({"s", "empirical", "shape"}, {fit.grid, fit.empirical, fit.shape})};
  }
  throw std::invalid_argument("what must be laplace, transition, special or gruet_shi");
}

std::pair<Json, std::string> op_roundtrip(const ExperimentSpec& s) {
  const double x = s.param("x", 1.0);
  if (!(s.horizon > 0.0) || !(s.step > 0.0)) throw std::invalid_argument("horizon and step must be positive");
  std::vector<double> err(s.replicas);
  parallel_for(s.replicas, [&](std::size_t i) {
    const SamplePath xi = sample_path(s.model, s.horizon, s.step, replica_seed(s, i));
    const SamplePath back = lamperti_inverse(lamperti_forward(x, xi));
    double e = 0.0;
    for (std::size_t k = 0; k < xi.times.size(); ++k) {
      e = std::max(e, std::fabs(back.values[k] - xi.values[k]));
      e = std::max(e, std::fabs(back.times[k] - xi.times[k]));
    }
    err[i] = e;
  });
  Json j;
  j["op"] = "lamperti-roundtrip";
  j["x"] = x;
  j["step"] = s.step;
  j["max_abs_error"] = *std::max_element(err.begin(), err.end());
  j["per_replica"] = err;
  std::vector<double> idx(err.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
  return {j, csv_table({"replica", "max_abs_error"}, {idx, err})};
}

Json error_json(const std::string& code, const std::string& message) {
  Json e;
  e["code"] = code;
  e["message"] = message;
  return e;
}

}  // namespace

const std::vector<std::string>& known_ops() {
  static const std::vector<std::string> ops = {"simulate",      "passage", "integral-test",     "lil",
                                               "duality-check", "bessel",  "lamperti-roundtrip"};
  return ops;
}

std::string code_version() { return PSSMP_VERSION; }

std::string spec_hash(const ExperimentSpec& spec) {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : spec.canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f, unsigned threads) {
  if (threads == 0) {
    const char* env = std::getenv("PSSMP_THREADS");
    threads = env && *env ? static_cast<unsigned>(std::strtoul(env, nullptr, 10)) : std::thread::hardware_concurrency();
  }
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::pair<Json, std::string> evaluate(const ExperimentSpec& spec) {
  const auto& ops = known_ops();
  if (std::find(ops.begin(), ops.end(), spec.op) == ops.end()) throw UnknownOp("unknown operation: " + spec.op);
  if (spec.replicas == 0) throw std::invalid_argument("replicas must be at least 1");
  if (spec.op == "simulate") return op_simulate(spec);
  if (spec.op == "passage") return op_passage(spec);
  if (spec.op == "integral-test") return op_integral_test(spec);
  if (spec.op == "lil") return op_lil(spec);
  if (spec.op == "duality-check") return op_duality(spec);
  if (spec.op == "bessel") return op_bessel(spec);
  return op_roundtrip(spec);
}

RunResult run_experiment(const ExperimentSpec& spec) {
  RunResult res;
  const auto start = std::chrono::steady_clock::now();
  std::string csv;
  try {
    std::tie(res.result, csv) = evaluate(spec);
  } catch (const UnknownOp& e) {
    res.exit_code = 2;
    res.error = error_json("unknown_op", e.what());
    return res;
  } catch (const std::invalid_argument& e) {
    res.exit_code = 2;
    res.error = error_json("bad_params", e.what());
    return res;
  } catch (const std::domain_error& e) {
    res.exit_code = 2;
    res.error = error_json("bad_params", e.what());
    return res;
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.error = error_json("run_failed", e.what());
    return res;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    const std::string result_name = spec.format == OutputFormat::Csv ? "result.csv" : "result.json";
    write_text((fs::path(spec.out_dir) / result_name).string(),
               spec.format == OutputFormat::Csv ? csv : res.result.dump(2) + "\n");
    res.artifacts.push_back(result_name);

    Json manifest;
    manifest["name"] = spec.name;
    manifest["op"] = spec.op;
    manifest["spec_hash"] = spec_hash(spec);
    manifest["seed"] = spec.seed;
    manifest["code_version"] = code_version();
    manifest["format"] = to_string(spec.format);
    manifest["artifacts"] = res.artifacts;
    write_text((fs::path(spec.out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    res.artifacts.push_back("manifest.json");

    Json log;
    log["spec_hash"] = spec_hash(spec);
    log["wall_time_seconds"] = wall;
    write_text((fs::path(spec.out_dir) / "run_log.json").string(), log.dump(2) + "\n");
    res.artifacts.push_back("run_log.json");
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.error = error_json("io_error", e.what());
  }
  return res;
}

}  // namespace pssmp
