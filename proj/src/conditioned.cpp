#include "pssmp/conditioned.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "pssmp/rng.hpp"
#include "pssmp/stats.hpp"
#include "walk.hpp"

namespace pssmp {

namespace {

constexpr double kSafety = 10.0;
constexpr std::uint64_t kExtensionBase = 0xE000'0000ULL;

void require_conditionable(const LevyModel& model, double x0) {
  model.validate();
  const double m = model.mean();
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("conditioning by rejection needs 0 < m < inf");
  if (!(x0 > 0.0)) throw std::invalid_argument("start must be positive");
}

double theta_for(const LevyModel& model, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  return std::max(std::log(kSafety / (model.mean() * tol)), 1.0);
}

struct Point {
  double s, xi, integral;
};

// Runs rejection trials from `start` until one survives to the persistence stop.
detail::WalkResult conditioned_run(const LevyModel& model, double start, double theta, double window,
                                   double split_level, std::uint64_t key, std::uint64_t first_attempt,
                                   const WalkOptions& walk, std::uint64_t max_trials, std::uint64_t* trials,
                                   std::vector<Point>* points) {
  detail::WalkSpec spec;
  spec.start = start;
  spec.sign = -1.0;
  spec.kill_level = 0.0;
  spec.persist_level = theta;
  spec.persist_window = window;
  if (split_level >= 0.0) spec.last_below = split_level;
  detail::Recorder rec;
  if (points) rec = [points](double s, double xi, double i) { points->push_back({s, xi, i}); };
  for (std::uint64_t j = 0; j < max_trials; ++j) {
    if (points) points->clear();
    const auto r = detail::walk(model, derive_key(key, first_attempt + j), spec, walk, rec);
    if (trials) ++*trials;
    if (!r.killed) return r;
  }
  throw BudgetExceeded("no surviving trial within the trial budget");
}

}  // namespace

ConditionedSample sample_conditioned_positive(const LevyModel& model, double x0, double horizon,
                                              std::uint64_t seed, const ConditionedOptions& opts) {
  require_conditionable(model, x0);
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  ConditionedSample out;
  out.start_floor = x0;
  out.path.model = model;
  out.path.seed = seed;
  out.path.step = opts.walk.step;
  const std::uint64_t base = stream_key(seed, StreamTag::Conditioned, 0);

  detail::WalkSpec spec;
  spec.start = x0;
  spec.kill_level = 0.0;
  spec.horizon = horizon;
  auto rec = [&](double s, double xi, double) {
    out.path.times.push_back(s);
    out.path.values.push_back(xi);
  };
  for (std::uint64_t j = 0; j < opts.max_trials; ++j) {
    out.path.times.clear();
    out.path.values.clear();
    const std::uint64_t key = derive_key(base, j);
    const auto r = detail::walk(model, key, spec, opts.walk, rec);
    ++out.trials;
    if (!r.killed) {
      out.key = key;
      return out;
    }
  }
  throw BudgetExceeded("no surviving trial within the trial budget");
}

namespace {

// Integral over the sampled path plus the conditioned continuation.
double conditioned_total(const ConditionedSample& sample, double tol, std::vector<Point>* tail,
                         double* bound) {
  const LevyModel& model = sample.path.model;
  require_conditionable(model, sample.start_floor);
  const double theta = theta_for(model, tol);
  const auto g = gaussian_params(model);
  const auto& t = sample.path.times;
  const auto& v = sample.path.values;
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k)
    integral += detail::step_integral(g, v[k], v[k + 1], t[k + 1] - t[k], -1.0, Quadrature::BridgeMean);
  const double end = v.empty() ? sample.start_floor : v.back();
  const auto r = conditioned_run(model, end, theta, 5.0, -1.0, sample.key, kExtensionBase, default_functional_walk(),
                                 1'000'000'000, nullptr, tail);
  if (bound) *bound = std::exp(-theta) * kSafety / model.mean();
  return integral + r.integral;
}

}  // namespace

FunctionalValue exp_functional_conditioned(const ConditionedSample& sample, double tol) {
  FunctionalValue out;
  out.value = conditioned_total(sample, tol, nullptr, &out.truncation_bound);
  return out;
}

PssmpPath tilde_X_construct(double y, const ConditionedSample& sample, double tol) {
  if (!(y > 0.0)) throw std::invalid_argument("starting point must be positive");
  std::vector<Point> tail;
  const double total = conditioned_total(sample, tol, &tail, nullptr);
  PssmpPath out;
  out.start = y;
  out.model = sample.path.model;
  out.seed = sample.path.seed;
  const auto g = gaussian_params(out.model);
  const auto& t = sample.path.times;
  const auto& v = sample.path.values;
  double integral = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0)
      integral += detail::step_integral(g, v[k - 1], v[k], t[k] - t[k - 1], -1.0, Quadrature::BridgeMean);
    out.times.push_back(y * integral);
    out.values.push_back(y * std::exp(-v[k]));
  }
  for (std::size_t k = 1; k < tail.size(); ++k) {
    out.times.push_back(y * (integral + tail[k].integral));
    out.values.push_back(y * std::exp(-tail[k].xi));
  }
  out.times.push_back(y * total);
  out.values.push_back(0.0);
  return out;
}

ConditionedFunctionalSamples sample_conditioned_functional(const LevyModel& model, std::size_t n, double tol,
                                                           std::uint64_t seed, const DualityOptions& opts,
                                                           double split_level) {
  require_conditionable(model, opts.x0);
  ConditionedFunctionalSamples out;
  const double theta = theta_for(model, tol);
  out.truncation_bound = std::exp(-theta) * kSafety / model.mean();
  out.values.resize(n);
  if (split_level >= 0.0) out.split_parts.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = conditioned_run(model, opts.x0, theta, opts.persist_window, split_level,
                                   stream_key(seed, StreamTag::Conditioned, i + 1), 0, opts.walk,
                                   1'000'000'000, &out.trials, nullptr);
    out.values[i] = r.integral;
    if (split_level >= 0.0) out.split_parts[i] = r.last_below_integral;
  }
  return out;
}

ReversalReport time_reversal_check(const LevyModel& model, double x, std::size_t n, std::uint64_t seed,
                                   const DualityOptions& opts) {
  require_conditionable(model, opts.x0);
  if (!(x > 0.0)) throw std::invalid_argument("level must be positive");
  if (model.has_positive_jumps()) throw std::invalid_argument("time reversal needs a spectrally negative model");
  ReversalReport rep;
  rep.quantiles = {0.1, 0.25, 0.5, 0.75, 0.9};
  const std::size_t nq = rep.quantiles.size();
  std::vector<std::vector<double>> fwd(nq), rev(nq);
  std::vector<double> dur_fwd, dur_rev;

  ConstructOptions co;
  for (int k = 0; k < 24; ++k) co.levels.push_back(x * std::ldexp(1.0, -k));
  // Both sides are read at fixed fractions of their duration, which needs a fine clock.
  co.walk.step = std::min(opts.walk.step, 1e-3);
  co.walk.quadrature = Quadrature::BridgeMean;
  const double theta = theta_for(model, 1e-6);
  WalkOptions rev_walk = opts.walk;
  rev_walk.step = co.walk.step;

  for (std::size_t i = 0; i < n; ++i) {
    const PssmpPath up = construct_from_zero(model, 0.0, derive_key(seed, i), co);
    const double s_x = up.horizon();
    dur_fwd.push_back(s_x);
    for (std::size_t j = 0; j < nq; ++j) fwd[j].push_back(up.left_limit((1.0 - rep.quantiles[j]) * s_x));

    std::vector<Point> pts;
    const auto r = conditioned_run(model, opts.x0, theta, opts.persist_window, -1.0,
                                   stream_key(seed, StreamTag::Conditioned, i + 1), 0, rev_walk,
                                   1'000'000'000, nullptr, &pts);
    const double rho = x * r.integral;
    dur_rev.push_back(rho);
    for (std::size_t j = 0; j < nq; ++j) {
      const double target = rep.quantiles[j] * rho;
      auto it = std::upper_bound(pts.begin(), pts.end(), target,
                                 [x](double t, const Point& p) { return t < x * p.integral; });
      const Point& p = *(it == pts.begin() ? it : it - 1);
      rev[j].push_back(x * std::exp(-p.xi));
    }
  }
  for (std::size_t j = 0; j < nq; ++j) {
    const auto ks = ks_two_sample(fwd[j], rev[j]);
    rep.ks_statistic.push_back(ks.statistic);
    rep.ks_p.push_back(ks.p_value);
  }
  const auto ks = ks_two_sample(dur_fwd, dur_rev);
  rep.duration_ks = ks.statistic;
  rep.duration_p = ks.p_value;
  return rep;
}

}  // namespace pssmp
