#include "walk.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "pssmp/rng.hpp"

namespace pssmp::detail {

namespace {

enum class Role { Up, Kill, FirstAbove, LastBelow };

struct Level {
  Role role;
  double value;
  bool active;
};

struct Ctx {
  std::optional<GaussianParams> g;
  bool bridge;
  double var;
  std::array<Level, 4> levels;
  int count;
  const WalkOptions* opt;
  std::uint64_t step_key;
};

double bridge_cross(double d0, double d1, double var, double dt) {
  if (var <= 0.0) return 0.0;
  return std::exp(-2.0 * d0 * d1 / (var * dt));
}

// Probability that something relevant happens inside the step; drives refinement.
double refine_prob(const Level& lv, double y0, double y1, double dt, double var) {
  const double L = lv.value;
  switch (lv.role) {
    case Role::Up:
    case Role::FirstAbove:
      if (y0 >= L) return 0.0;
      if (y1 >= L) return 1.0;
      return bridge_cross(L - y0, L - y1, var, dt);
    case Role::Kill:
      // A kill shown by the endpoint needs no localisation.
      if (y1 <= L) return 0.0;
      return bridge_cross(y0 - L, y1 - L, var, dt);
    case Role::LastBelow:
      if (y1 <= L) return 0.0;
      if (y0 <= L) return 1.0;
      return bridge_cross(y0 - L, y1 - L, var, dt);
  }
  return 0.0;
}

template <class Visit>
bool refine(const Ctx& c, double t0, double dt, double y0, double y1, std::uint64_t node, int depth,
            Visit& visit) {
  bool split = false;
  if (c.bridge && depth < c.opt->refine_depth) {
    for (int j = 0; j < c.count; ++j) {
      if (c.levels[j].active && refine_prob(c.levels[j], y0, y1, dt, c.var) > c.opt->refine_eps) {
        split = true;
        break;
      }
    }
  }
  if (!split) return visit(t0, dt, y0, y1, node);
  CounterRng rng(derive_key(c.step_key, node, 1));
  const double ym = 0.5 * (y0 + y1) + std::sqrt(c.var * dt / 4.0) * rng.normal();
  if (!refine(c, t0, dt / 2.0, y0, ym, 2 * node, depth + 1, visit)) return false;
  return refine(c, t0 + dt / 2.0, dt / 2.0, ym, y1, 2 * node + 1, depth + 1, visit);
}

}  // namespace

double step_integral(const std::optional<GaussianParams>& g, double y0, double y1, double dt, double sign,
                     Quadrature q) {
  if (q == Quadrature::LeftEndpoint || !g) return std::exp(sign * y0) * dt;
  if (g->var_rate <= 0.0) {
    const double d = sign * (y1 - y0);
    if (std::fabs(d) < 1e-12) return std::exp(sign * y0) * dt;
    return dt * std::exp(sign * y0) * std::expm1(d) / d;
  }
  const double mid = sign * 0.5 * (y0 + y1) + g->var_rate * dt / 8.0;
  return dt / 6.0 * (std::exp(sign * y0) + 4.0 * std::exp(mid) + std::exp(sign * y1));
}

WalkResult walk(const LevyModel& model, std::uint64_t key, const WalkSpec& spec, const WalkOptions& opt,
                const Recorder& record) {
  Ctx c{};
  c.g = gaussian_params(model);
  c.var = c.g ? c.g->var_rate : 0.0;
  c.bridge = c.g && c.var > 0.0;
  c.opt = &opt;
  c.count = 0;
  const bool linear_path = c.g.has_value();
  int up_idx = -1, kill_idx = -1, first_idx = -1, last_idx = -1;
  if (spec.up_level) { up_idx = c.count; c.levels[c.count++] = {Role::Up, *spec.up_level, true}; }
  if (spec.kill_level) { kill_idx = c.count; c.levels[c.count++] = {Role::Kill, *spec.kill_level, true}; }
  if (spec.first_above) { first_idx = c.count; c.levels[c.count++] = {Role::FirstAbove, *spec.first_above, true}; }
  if (spec.last_below) { last_idx = c.count; c.levels[c.count++] = {Role::LastBelow, *spec.last_below, true}; }

  WalkResult r;
  double s = 0.0;
  double y = spec.start;
  double integral = 0.0;
  if (record) record(0.0, y, 0.0);

  if (first_idx >= 0 && y >= *spec.first_above) {
    r.first_above_time = 0.0;
    c.levels[first_idx].active = false;
  }
  if (last_idx >= 0 && y <= *spec.last_below) r.last_below_time = 0.0;
  if ((up_idx >= 0 && y >= *spec.up_level) || (kill_idx >= 0 && y <= *spec.kill_level) ||
      (spec.horizon && *spec.horizon <= 0.0)) {
    r.reached_up = up_idx >= 0 && y >= *spec.up_level;
    r.killed = kill_idx >= 0 && y <= *spec.kill_level;
    r.value = y;
    return r;
  }

  double above_since = (spec.persist_level && y > *spec.persist_level) ? 0.0 : -1.0;
  bool stop = false;

  for (std::uint64_t k = 0; !stop; ++k) {
    if (k >= opt.max_steps) throw BudgetExceeded("walk exceeded its step budget");
    double dt = opt.step;
    if (opt.adaptive) dt = std::clamp(opt.step * std::exp(spec.growth * y), opt.step, opt.max_step);
    bool last_step = false;
    if (spec.horizon && s + dt >= *spec.horizon) {
      dt = *spec.horizon - s;
      last_step = true;
    }
    c.step_key = derive_key(key, k);
    const double y1 = y + sample_increment(model, dt, c.step_key);

    auto visit = [&](double t0, double h, double a, double b, std::uint64_t node) -> bool {
      double u[4];
      for (int j = 0; j < c.count; ++j) {
        const Level& lv = c.levels[j];
        if (!lv.active) continue;
        const double p = c.bridge ? refine_prob(lv, a, b, h, c.var) : 0.0;
        u[j] = (p > 1e-16 && p < 1.0) ? CounterRng(derive_key(c.step_key, node, 2 + j)).uniform() : 1.0;
      }
      const double leaf_int = step_integral(c.g, a, b, h, spec.sign, opt.quadrature);

      // A crossing that the endpoints show directly is located by interpolation on
      // continuous paths and at the leaf end otherwise; a bridge dip sits mid-leaf.
      auto crossing = [&](int j, bool upward, double& frac) -> bool {
        const Level& lv = c.levels[j];
        const double L = lv.value;
        const bool ends = upward ? b >= L : b <= L;
        if (ends) {
          frac = (linear_path && b != a) ? std::clamp((L - a) / (b - a), 0.0, 1.0) : 1.0;
          return true;
        }
        const double p = c.bridge ? refine_prob(lv, a, b, h, c.var) : 0.0;
        if (p > 1e-16 && u[j] < p) {
          frac = 0.5;
          return true;
        }
        return false;
      };
      auto partial = [&](double frac) {
        if (frac >= 1.0) return leaf_int;
        return step_integral(c.g, a, a + frac * (b - a), frac * h, spec.sign, opt.quadrature);
      };

      double frac = 1.0;
      if (kill_idx >= 0 && crossing(kill_idx, false, frac)) {
        r.killed = true;
        r.time = t0 + frac * h;
        r.integral = integral + partial(frac);
        r.value = *spec.kill_level;
        stop = true;
        return false;
      }
      if (first_idx >= 0 && c.levels[first_idx].active && crossing(first_idx, true, frac)) {
        r.first_above_time = t0 + frac * h;
        r.first_above_integral = integral + partial(frac);
        c.levels[first_idx].active = false;
      }
      if (up_idx >= 0 && crossing(up_idx, true, frac)) {
        r.reached_up = true;
        r.time = t0 + frac * h;
        r.integral = integral + partial(frac);
        r.value = frac < 1.0 ? *spec.up_level : b;
        if (r.value < *spec.up_level) r.value = *spec.up_level;
        if (record) record(r.time, r.value, r.integral);
        stop = true;
        return false;
      }
      if (last_idx >= 0) {
        const double L = *spec.last_below;
        if (b <= L) {
          r.last_below_time = t0 + h;
          r.last_below_integral = integral + leaf_int;
        } else if (a <= L) {
          r.last_below_time = t0;
          r.last_below_integral = integral;
        } else {
          double f = 1.0;
          if (crossing(last_idx, false, f)) {
            r.last_below_time = t0 + 0.5 * h;
            r.last_below_integral = integral + partial(0.5);
          }
        }
      }
      integral += leaf_int;
      if (record) record(t0 + h, b, integral);
      return true;
    };

    refine(c, s, dt, y, y1, 1, 0, visit);
    ++r.steps;
    if (stop) return r;

    s += dt;
    y = y1;

    if (spec.persist_level) {
      if (y > *spec.persist_level) {
        if (above_since < 0.0) above_since = s;
        if (s - above_since >= spec.persist_window) stop = true;
      } else {
        above_since = -1.0;
      }
    }
    if (spec.integral_cap && integral >= *spec.integral_cap) stop = true;
    if (last_step) stop = true;
  }
  r.time = s;
  r.value = y;
  r.integral = integral;
  return r;
}

}  // namespace pssmp::detail
