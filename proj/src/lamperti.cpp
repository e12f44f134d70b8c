#include "pssmp/lamperti.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pssmp/rng.hpp"
#include "walk.hpp"

namespace pssmp {

namespace {

std::size_t last_index_le(const std::vector<double>& times, double t) {
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

std::vector<double> cumulative_left_sums(const SamplePath& xi) {
  std::vector<double> c(xi.times.size(), 0.0);
  for (std::size_t k = 0; k + 1 < xi.times.size(); ++k)
    c[k + 1] = c[k] + std::exp(xi.values[k]) * (xi.times[k + 1] - xi.times[k]);
  return c;
}

void require_block_model(const LevyModel& model) {
  model.validate();
  if (model.has_positive_jumps())
    throw std::invalid_argument("block construction needs a model without positive jumps");
  if (!(model.mean() >= 0.0)) throw std::invalid_argument("block construction needs m >= 0");
}

}  // namespace

double PssmpPath::value_at(double t) const {
  if (times.empty()) throw std::logic_error("empty path");
  return values[last_index_le(times, t)];
}

double PssmpPath::left_limit(double t) const {
  if (times.empty()) throw std::logic_error("empty path");
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.front();
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

double exp_functional_partial(const SamplePath& xi, double s) {
  if (xi.times.empty()) throw std::invalid_argument("empty path");
  if (s < 0.0) throw std::invalid_argument("s must be >= 0");
  const double end = xi.times.back();
  if (s > end * (1.0 + 1e-12) + 1e-15) throw InsufficientHorizon("s lies beyond the sampled horizon");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < xi.times.size(); ++k) {
    const double t0 = xi.times[k];
    if (t0 >= s) break;
    const double t1 = std::min(xi.times[k + 1], s);
    sum += std::exp(xi.values[k]) * (t1 - t0);
  }
  return sum;
}

double time_change_tau(const SamplePath& xi, double t) {
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const auto c = cumulative_left_sums(xi);
  if (t >= c.back()) throw InsufficientHorizon("t lies beyond the exponential functional of the path");
  const std::size_t j = last_index_le(c, t);
  return xi.times[j] + (t - c[j]) * std::exp(-xi.values[j]);
}

PssmpPath lamperti_forward(double x, const SamplePath& xi) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("starting point must be positive");
  if (xi.times.empty()) throw std::invalid_argument("empty path");
  PssmpPath out;
  out.start = x;
  out.model = xi.model;
  out.seed = xi.seed;
  const auto c = cumulative_left_sums(xi);
  out.times.resize(c.size());
  out.values.resize(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    out.times[k] = x * c[k];
    out.values[k] = x * std::exp(xi.values[k]);
  }
  return out;
}

SamplePath lamperti_inverse(const PssmpPath& path) {
  if (path.times.empty()) throw std::invalid_argument("empty path");
  SamplePath xi;
  xi.model = path.model;
  xi.seed = path.seed;
  const double x = path.values.front();
  if (!(x > 0.0)) throw std::invalid_argument("path must start above 0");
  xi.times.resize(path.times.size());
  xi.values.resize(path.times.size());
  xi.times[0] = 0.0;
  xi.values[0] = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    if (!(path.values[k] > 0.0)) throw std::domain_error("path reaches 0; the inverse is undefined there");
    xi.times[k + 1] = xi.times[k] + (path.times[k + 1] - path.times[k]) / path.values[k];
    xi.values[k + 1] = std::log(path.values[k + 1] / x);
  }
  if (path.times.size() > 1) xi.step = xi.times[1] - xi.times[0];
  return xi;
}

PssmpPath simulate_pssmp(const LevyModel& model, double x, double horizon, double step, std::uint64_t seed) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  // Recurrent or drifting-down xi can need an enormous clock to cover the horizon.
  constexpr double kMaxPoints = 1e8;
  double s_max = std::max({horizon / x, 1.0, step});
  for (; s_max / step <= kMaxPoints; s_max *= 2.0) {
    const SamplePath xi = sample_path(model, s_max, step, seed);
    PssmpPath out = lamperti_forward(x, xi);
    if (out.times.back() < horizon) continue;
    const auto keep = std::lower_bound(out.times.begin(), out.times.end(), horizon) - out.times.begin() + 1;
    out.times.resize(static_cast<std::size_t>(keep));
    out.values.resize(static_cast<std::size_t>(keep));
    return out;
  }
  throw InsufficientHorizon("exponential functional did not reach the horizon");
}

PssmpPath construct_from_zero(const LevyModel& model, double horizon, std::uint64_t seed,
                              const ConstructOptions& opts) {
  require_block_model(model);
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  std::vector<double> levels = opts.levels;
  if (levels.empty()) {
    for (int n = 1; n <= 40; ++n) levels.push_back(std::ldexp(1.0, -n));
  }
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0) || (i > 0 && !(levels[i] < levels[i - 1])))
      throw std::invalid_argument("levels must be positive and strictly decreasing");
  }

  const std::uint64_t base = stream_key(seed, StreamTag::Lamperti, 0);
  PssmpPath out;
  out.model = model;
  out.seed = seed;
  out.start = 0.0;
  out.times.push_back(0.0);
  out.values.push_back(0.0);

  double clock = 0.0;
  const std::size_t top = 0;
  for (std::size_t n = levels.size() - 1; n > top; --n) {
    const double x = levels[n];
    detail::WalkSpec spec;
    spec.up_level = std::log(levels[n - 1] / x);
    const double t_base = clock;
    bool first = true;
    auto rec = [&](double, double xi, double integral) {
      if (first) {
        first = false;
        if (n + 1 == levels.size()) return;  // X^(0)_0 = 0 stands in for the deepest start
      }
      out.times.push_back(t_base + x * integral);
      out.values.push_back(x * std::exp(xi));
    };
    const auto r = detail::walk(model, derive_key(base, n), spec, detail::coarsened(opts.walk, levels[0], x), rec);
    // The block ends where the next one starts; that point is recorded by the next block.
    out.times.pop_back();
    out.values.pop_back();
    clock = t_base + x * r.integral;
  }

  const double x1 = levels[top];
  detail::WalkSpec spec;
  spec.integral_cap = std::max(horizon - clock, 0.0) / x1;
  const double t_base = clock;
  auto rec = [&](double, double xi, double integral) {
    out.times.push_back(t_base + x1 * integral);
    out.values.push_back(x1 * std::exp(xi));
  };
  if (clock < horizon) {
    detail::walk(model, derive_key(base, top), spec, opts.walk, rec);
  } else {
    out.times.push_back(clock);
    out.values.push_back(x1);
  }
  return out;
}

WalkOptions default_functional_walk() {
  WalkOptions o;
  o.step = 1e-2;
  o.adaptive = true;
  o.max_step = 0.05;
  o.quadrature = Quadrature::BridgeMean;
  return o;
}

ExpFunctionalSamples sample_exponential_functional(const LevyModel& model, std::size_t n, double tol,
                                                   std::uint64_t seed, const WalkOptions& opts,
                                                   double split_level) {
  model.validate();
  const double m = model.mean();
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("exponential functional needs 0 < m < inf");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  constexpr double safety = 10.0;
  ExpFunctionalSamples out;
  out.theta = std::max(std::log(safety / (m * tol)), 1.0);
  out.truncation_bound = std::exp(-out.theta) * safety / m;
  out.values.resize(n);
  if (split_level >= 0.0) out.split_parts.resize(n);

  detail::WalkSpec spec;
  spec.sign = -1.0;
  spec.up_level = out.theta;
  if (split_level >= 0.0) spec.first_above = split_level;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = detail::walk(model, stream_key(seed, StreamTag::Passage, i), spec, opts);
    out.values[i] = r.integral;
    if (split_level >= 0.0) out.split_parts[i] = r.first_above_integral;
  }
  return out;
}

MeanEstimate entrance_law_estimate(const LevyModel& model, double t, const std::function<double(double)>& f,
                                   std::size_t n, std::uint64_t seed, double tol) {
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (n < 2) throw std::invalid_argument("need at least two samples");
  const auto samples = sample_exponential_functional(model, n, tol, seed, default_functional_walk());
  const double m = model.mean();
  double sum = 0.0, sum2 = 0.0;
  for (double i_val : samples.values) {
    const double v = f(t / i_val) / i_val / m;
    sum += v;
    sum2 += v * v;
  }
  MeanEstimate est;
  est.n = n;
  est.mean = sum / static_cast<double>(n);
  const double var = std::max(sum2 / static_cast<double>(n) - est.mean * est.mean, 0.0);
  est.stderr_ = std::sqrt(var / static_cast<double>(n - 1));
  est.truncation_bound = samples.truncation_bound;
  return est;
}

}  // namespace pssmp
