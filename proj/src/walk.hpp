#pragma once

// Internal stepping engine shared by the Lamperti, passage and conditioning code.
// Gaussian models are refined with Brownian-bridge midpoints near the levels of
// interest, so crossings between grid points are detected with the exact bridge
// probability rather than missed.

#include <cstdint>
#include <functional>
#include <optional>

#include "pssmp/levy.hpp"
#include "pssmp/types.hpp"

namespace pssmp::detail {

struct WalkSpec {
  double start = 0.0;
  double sign = 1.0;     // integrand exp(sign * xi)
  double growth = -1.0;  // adaptive steps scale like exp(growth * xi)
  std::optional<double> up_level;
  std::optional<double> kill_level;
  std::optional<double> first_above;
  std::optional<double> last_below;
  std::optional<double> integral_cap;
  std::optional<double> horizon;
  std::optional<double> persist_level;
  double persist_window = 0.0;
};

struct WalkResult {
  bool killed = false;
  bool reached_up = false;
  double time = 0.0;
  double value = 0.0;
  double integral = 0.0;
  double first_above_time = -1.0;
  double first_above_integral = 0.0;
  double last_below_time = -1.0;
  double last_below_integral = 0.0;
  std::uint64_t steps = 0;
};

using Recorder = std::function<void(double s, double xi, double integral)>;

// Conditional mean of the integral of exp(sign * xi) over one step given its endpoints.
double step_integral(const std::optional<GaussianParams>& g, double y0, double y1, double dt, double sign,
                     Quadrature q);

// Deep blocks of the X^(0) construction carry weight proportional to their level,
// so their steps are coarsened by up to a factor 16.
inline WalkOptions coarsened(const WalkOptions& o, double top, double level) {
  WalkOptions c = o;
  double f = top / (2.0 * level);
  f = f < 1.0 ? 1.0 : (f > 16.0 ? 16.0 : f);
  c.step *= f;
  c.max_step *= f;
  return c;
}

WalkResult walk(const LevyModel& model, std::uint64_t key, const WalkSpec& spec, const WalkOptions& opt,
                const Recorder& record = {});

}  // namespace pssmp::detail
