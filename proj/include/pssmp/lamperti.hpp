#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pssmp/levy.hpp"
#include "pssmp/types.hpp"

namespace pssmp {

// Piecewise-constant, right-continuous path of a pssMp (index 1).
struct PssmpPath {
  std::vector<double> times;
  std::vector<double> values;
  double start = 0.0;
  LevyModel model;
  std::uint64_t seed = 0;

  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  // Value at the last grid time <= t.
  double value_at(double t) const;
  // Value at the last grid time < t (the left limit of the step path).
  double left_limit(double t) const;
};

// Left Riemann sum of exp(xi) over [0, s]; throws InsufficientHorizon past the path.
double exp_functional_partial(const SamplePath& xi, double s);

// tau(t) = inf{s : I_s > t}, inverting the piecewise-linear cumulative sum.
double time_change_tau(const SamplePath& xi, double t);

// X_t = x exp(xi_{tau(t/x)}) on the grid t_k = x I_{s_k}.
PssmpPath lamperti_forward(double x, const SamplePath& xi);

// s(t) = integral of du / X_u, xi = log(X / X_0); exact inverse of lamperti_forward.
SamplePath lamperti_inverse(const PssmpPath& path);

// Samples xi with the given step until x I_s covers the horizon, then transforms.
PssmpPath simulate_pssmp(const LevyModel& model, double x, double horizon, double step, std::uint64_t seed);

struct ConstructOptions {
  std::vector<double> levels;  // decreasing to 0; empty means 2^-n, n = 1..40
  // The clock integrates exp(xi) over each step, so reading X at a fixed time
  // is length-biased by O(sigma^2 step); 1e-3 keeps that well under 1%.
  WalkOptions walk{.step = 1e-3};
};

// X^(0) from the block construction: between consecutive levels the path is an
// independent Lamperti block started at x_n and stopped on reaching x_{n-1}.
// Requires m >= 0 and no positive jumps (upward passage must be continuous).
PssmpPath construct_from_zero(const LevyModel& model, double horizon, std::uint64_t seed,
                              const ConstructOptions& opts = {});

struct ExpFunctionalSamples {
  std::vector<double> values;
  std::vector<double> split_parts;  // integral up to the first passage above the split level
  double truncation_bound = 0.0;
  double theta = 0.0;
};

// Samples of I = integral_0^inf exp(-xi_s) ds, truncated at the first passage of xi
// above theta = log(safety / (m tol)); the neglected tail is exp(-theta) times an
// independent copy, reported as truncation_bound = exp(-theta) safety / m.
ExpFunctionalSamples sample_exponential_functional(const LevyModel& model, std::size_t n, double tol,
                                                   std::uint64_t seed, const WalkOptions& opts = {},
                                                   double split_level = -1.0);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double truncation_bound = 0.0;
  std::size_t n = 0;
};

// E f(X^(0)_t) = (1/m) E[(1/I) f(t/I)] with I = I(xi-hat).
MeanEstimate entrance_law_estimate(const LevyModel& model, double t, const std::function<double(double)>& f,
                                   std::size_t n, std::uint64_t seed, double tol = 1e-6);

WalkOptions default_functional_walk();

}  // namespace pssmp
