#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pssmp/conditioned.hpp"
#include "pssmp/lamperti.hpp"

namespace pssmp {

// S_y = inf{t : X_t >= y}; nullopt when the path never gets there.
std::optional<double> first_passage_time(const PssmpPath& path, double y);

enum class LastPassageStatus { Finite, Unbounded, EmptySet };

struct LastPassage {
  double time = 0.0;
  LastPassageStatus status = LastPassageStatus::Finite;
};

// U_y = sup{t : X_t <= y}. The answer is only trusted once the path has exceeded
// guard_ratio * y (by default exp of the return guard of the model); otherwise the
// status is Unbounded. A path that never visits [0, y] gives time 0 and EmptySet.
LastPassage last_passage_time(const PssmpPath& path, double y, double guard_ratio = -1.0);

struct PassageSamples {
  std::vector<double> values;
  double truncation_bound = 0.0;
  std::uint64_t trials = 0;
};

// S_1 of X^(0) in law, as I(-xi_up) (rejection-conditioned xi started at opts.x0).
PassageSamples sample_S1_duality(const LevyModel& model, std::size_t n, double tol, std::uint64_t seed,
                                 const DualityOptions& opts = {});

// U_1 of X^(0) in law, as I(xi-hat) = integral of exp(-xi).
PassageSamples sample_U1_duality(const LevyModel& model, std::size_t n, double tol, std::uint64_t seed,
                                 const WalkOptions& opts = default_functional_walk());

struct DirectOptions {
  int blocks = 24;  // levels y 2^-k, k = 0..blocks-1
  WalkOptions walk{};
  double guard_tol = 1e-6;
};

// S_y and U_y read off the block construction of X^(0), without storing paths.
// Replica i uses the same substreams as construct_from_zero with seed-derived
// replica i, so the two agree exactly for the same seed.
PassageSamples sample_S_direct(const LevyModel& model, double y, std::size_t n, std::uint64_t seed,
                               const DirectOptions& opts = {});
PassageSamples sample_U_direct(const LevyModel& model, double y, std::size_t n, std::uint64_t seed,
                               const DirectOptions& opts = {});

// Seed of replica i in the direct samplers.
std::uint64_t direct_replica_seed(std::uint64_t seed, std::size_t i);

// J_t = inf_{u >= t} X_u on the sampled horizon (suffix minima).
std::vector<double> future_infimum(const PssmpPath& path);

}  // namespace pssmp
