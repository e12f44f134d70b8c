#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pssmp {

enum class ModelKind {
  BrownianDrift,             // xi_t = 2(sigma B_t + a t)
  SpectrallyNegativeStable,  // E exp(u xi_t) = exp(t u^alpha), alpha in (1, 2]
  StableSubordinator,        // E exp(-u xi_t) = exp(-t u^alpha), alpha in (0, 1)
  CompoundPoissonDrift,      // drift t + compound Poisson(rate, jump law)
  UnitPoisson,               // standard Poisson process, unit jumps
};

enum class JumpLaw {
  Exponential,          // +Exp(rate p1)
  NegativeExponential,  // -Exp(rate p1)
  Normal,               // N(p1, p2^2)
  Constant,             // p1
};

struct LevyModel {
  ModelKind kind = ModelKind::BrownianDrift;
  double a = 0.0;
  double sigma = 1.0;
  double alpha = 1.5;
  double rate = 0.0;
  double drift = 0.0;
  JumpLaw jump_law = JumpLaw::NegativeExponential;
  double jump_p1 = 1.0;
  double jump_p2 = 0.0;

  static LevyModel brownian_drift(double a, double sigma = 1.0);
  static LevyModel spectrally_negative_stable(double alpha);
  static LevyModel stable_subordinator(double alpha);
  static LevyModel compound_poisson(double rate, JumpLaw law, double p1, double p2, double drift);
  static LevyModel unit_poisson();

  // Throws std::invalid_argument when the parameters are outside the model's range.
  void validate() const;

  // The Laplace exponent psi(u) = log E exp(u xi_1) is finite for all u >= 0.
  bool laplace_ok() const;
  bool has_positive_jumps() const;
  bool has_negative_jumps() const;
  // True for models whose paths are continuous Brownian motion with drift.
  bool gaussian() const;
  // m = E xi_1; +infinity for the stable subordinator.
  double mean() const;
  std::string name() const;
};

struct GaussianParams {
  double mu;        // drift per unit time
  double var_rate;  // variance per unit time
};

std::optional<GaussianParams> gaussian_params(const LevyModel& model);

// psi(u) = log E exp(u xi_1). Throws std::domain_error when not finite.
double laplace_exponent(const LevyModel& model, double u);

struct SamplePath {
  std::vector<double> times;
  std::vector<double> values;
  LevyModel model;
  std::uint64_t seed = 0;
  double step = 0.0;
};

enum class GridPolicy { Uniform, JumpRefined };

// Exact-marginal increments on the grid 0, step, 2 step, ..., horizon.
// Step k draws from its own substream, so a longer horizon extends a shorter
// path with the same seed point by point.
SamplePath sample_path(const LevyModel& model, double horizon, double step, std::uint64_t seed,
                       GridPolicy policy = GridPolicy::Uniform);

// One increment over dt using the given substream key.
double sample_increment(const LevyModel& model, double dt, std::uint64_t key);

// First grid time with xi >= z; nullopt when the path never gets there.
std::optional<double> first_passage_levy(const SamplePath& path, double z);

// Scale function W for spectrally negative models (closed form where one is
// known, Gaver-Stehfest inversion of 1/psi otherwise).
double scale_function_W(const LevyModel& model, double x);
double scale_function_W_numeric(const LevyModel& model, double x, int order = 32);

// P(inf_t xi_t > -x) = m W(x) for m > 0.
double survival_probability(const LevyModel& model, double x);

// Smallest y with P(inf_t xi_t <= -y) <= tol, used as the last-passage guard.
double return_guard(const LevyModel& model, double tol = 1e-6);

}  // namespace pssmp
