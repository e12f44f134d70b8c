#include "pssmp/passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pssmp/rng.hpp"
#include "walk.hpp"

namespace pssmp {

std::optional<double> first_passage_time(const PssmpPath& path, double y) {
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    if (path.values[i] >= y) return path.times[i];
  }
  return std::nullopt;
}

LastPassage last_passage_time(const PssmpPath& path, double y, double guard_ratio) {
  if (!(path.model.mean() > 0.0)) throw std::invalid_argument("last passage needs m > 0");
  if (guard_ratio < 0.0) guard_ratio = std::exp(return_guard(path.model));
  LastPassage out;
  const double peak = path.values.empty() ? 0.0 : *std::max_element(path.values.begin(), path.values.end());
  if (peak < guard_ratio * y || path.values.empty()) {
    out.status = LastPassageStatus::Unbounded;
    out.time = path.horizon();
    return out;
  }
  for (std::size_t i = path.values.size(); i-- > 0;) {
    if (path.values[i] <= y) {
      out.time = path.times[i];
      return out;
    }
  }
  out.status = LastPassageStatus::EmptySet;
  out.time = 0.0;
  return out;
}

PassageSamples sample_S1_duality(const LevyModel& model, std::size_t n, double tol, std::uint64_t seed,
                                 const DualityOptions& opts) {
  const auto r = sample_conditioned_functional(model, n, tol, seed, opts);
  return {r.values, r.truncation_bound, r.trials};
}

PassageSamples sample_U1_duality(const LevyModel& model, std::size_t n, double tol, std::uint64_t seed,
                                 const WalkOptions& opts) {
  const auto r = sample_exponential_functional(model, n, tol, seed, opts);
  return {r.values, r.truncation_bound, n};
}

std::uint64_t direct_replica_seed(std::uint64_t seed, std::size_t i) { return derive_key(seed, 0xD1EC7ULL, i); }

namespace {

void require_direct(const LevyModel& model, double y, const DirectOptions& opts) {
  model.validate();
  if (model.has_positive_jumps()) throw std::invalid_argument("direct passage sampling needs no positive jumps");
  if (!(model.mean() >= 0.0)) throw std::invalid_argument("direct passage sampling needs m >= 0");
  if (!(y > 0.0)) throw std::invalid_argument("level must be positive");
  if (opts.blocks < 1) throw std::invalid_argument("need at least one block");
}

// Sum over blocks k >= 1 of x_k I_k for levels x_k = y 2^-k.
double first_passage_sum(const LevyModel& model, double y, std::uint64_t base, const DirectOptions& opts) {
  double total = 0.0;
  detail::WalkSpec spec;
  spec.up_level = std::log(2.0);
  for (int k = opts.blocks - 1; k >= 1; --k) {
    const double x = y * std::ldexp(1.0, -k);
    const auto r = detail::walk(model, derive_key(base, static_cast<std::uint64_t>(k)), spec,
                                detail::coarsened(opts.walk, y, x));
    total += x * r.integral;
  }
  return total;
}

}  // namespace

PassageSamples sample_S_direct(const LevyModel& model, double y, std::size_t n, std::uint64_t seed,
                               const DirectOptions& opts) {
  require_direct(model, y, opts);
  PassageSamples out;
  out.values.resize(n);
  out.trials = n;
  out.truncation_bound = y * std::ldexp(1.0, -(opts.blocks - 1));
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = stream_key(direct_replica_seed(seed, i), StreamTag::Lamperti, 0);
    out.values[i] = first_passage_sum(model, y, base, opts);
  }
  return out;
}

PassageSamples sample_U_direct(const LevyModel& model, double y, std::size_t n, std::uint64_t seed,
                               const DirectOptions& opts) {
  require_direct(model, y, opts);
  if (!(model.mean() > 0.0)) throw std::invalid_argument("last passage needs m > 0");
  PassageSamples out;
  out.values.resize(n);
  out.trials = n;
  out.truncation_bound = y * std::ldexp(1.0, -(opts.blocks - 1));
  detail::WalkSpec top;
  top.up_level = std::max(return_guard(model, opts.guard_tol), 1e-9);
  top.last_below = 0.0;
  top.growth = 1.0;
  WalkOptions top_walk = opts.walk;
  top_walk.adaptive = true;
  top_walk.max_step = std::max(opts.walk.max_step, opts.walk.step);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = stream_key(direct_replica_seed(seed, i), StreamTag::Lamperti, 0);
    const double s = first_passage_sum(model, y, base, opts);
    const auto r = detail::walk(model, derive_key(base, 0), top, top_walk);
    out.values[i] = s + y * std::max(r.last_below_integral, 0.0);
  }
  return out;
}

std::vector<double> future_infimum(const PssmpPath& path) {
  std::vector<double> j(path.values.size());
  double run = std::numeric_limits<double>::infinity();
  for (std::size_t i = path.values.size(); i-- > 0;) {
    run = std::min(run, path.values[i]);
    j[i] = run;
  }
  return j;
}

}  // namespace pssmp
