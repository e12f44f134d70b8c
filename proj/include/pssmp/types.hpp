#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pssmp {

enum class Quadrature {
  LeftEndpoint,  // exp(xi_k) * dt, matches the cadlag path representation
  BridgeMean,    // Simpson rule on the Brownian-bridge conditional mean (Gaussian models)
};

// Numerical knobs for the path samplers.
struct WalkOptions {
  double step = 1e-2;
  double max_step = 0.05;  // cap for adaptive steps
  bool adaptive = false;   // steps grow geometrically where the integrand is negligible
  Quadrature quadrature = Quadrature::BridgeMean;
  double refine_eps = 1e-2;  // bridge refinement while a crossing is at least this likely
  int refine_depth = 10;
  std::uint64_t max_steps = 200'000'000;
};

struct InsufficientHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pssmp
