#pragma once

#include <cstdint>
#include <vector>

#include "pssmp/lamperti.hpp"
#include "pssmp/levy.hpp"
#include "pssmp/types.hpp"

namespace pssmp {

// xi conditioned to stay positive, realised by rejection from a small start x0:
// trial paths are killed (with the exact Brownian-bridge probability for Gaussian
// models) when they go below 0, and the first surviving one is returned.
struct ConditionedSample {
  SamplePath path;  // values include the start x0
  double start_floor = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t key = 0;  // substream key of the accepted trial
};

struct ConditionedOptions {
  WalkOptions walk{};
  std::uint64_t max_trials = 1'000'000'000;
};

ConditionedSample sample_conditioned_positive(const LevyModel& model, double x0, double horizon,
                                              std::uint64_t seed, const ConditionedOptions& opts = {});

struct FunctionalValue {
  double value = 0.0;
  double truncation_bound = 0.0;
};

// I(-xi_up) = integral_0^inf exp(-xi_up) ds. The sampled path is continued from
// its endpoint (again by rejection, which is exact by the Markov property) until
// xi_up has stayed above theta for a window of length 5.
FunctionalValue exp_functional_conditioned(const ConditionedSample& sample, double tol = 1e-6);

// Lamperti transform driven by -xi_up started at y: decreases to 0 at time
// rho = y I(-xi_up); the last point is (rho, 0).
PssmpPath tilde_X_construct(double y, const ConditionedSample& sample, double tol = 1e-6);

struct ConditionedFunctionalSamples {
  std::vector<double> values;
  std::vector<double> split_parts;  // integral up to the last passage below split_level
  double truncation_bound = 0.0;
  std::uint64_t trials = 0;
};

struct DualityOptions {
  double x0 = 1e-3;
  double persist_window = 5.0;
  WalkOptions walk = default_functional_walk();
};

ConditionedFunctionalSamples sample_conditioned_functional(const LevyModel& model, std::size_t n, double tol,
                                                           std::uint64_t seed, const DualityOptions& opts = {},
                                                           double split_level = -1.0);

struct ReversalReport {
  std::vector<double> quantiles;
  std::vector<double> ks_statistic;
  std::vector<double> ks_p;
  double duration_ks = 0.0;
  double duration_p = 1.0;
};

// Compares X^(0) reversed at its first passage above x with the Lamperti
// transform of -xi_up started at x, at relative times q in {0.1, 0.25, 0.5, 0.75, 0.9}.
ReversalReport time_reversal_check(const LevyModel& model, double x, std::size_t n, std::uint64_t seed,
                                   const DualityOptions& opts = {});

}  // namespace pssmp
