#include "pssmp/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pssmp/rng.hpp"

namespace pssmp {

namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double jump_mean(const LevyModel& m) {
  switch (m.jump_law) {
    case JumpLaw::Exponential: return 1.0 / m.jump_p1;
    case JumpLaw::NegativeExponential: return -1.0 / m.jump_p1;
    case JumpLaw::Normal: return m.jump_p1;
    case JumpLaw::Constant: return m.jump_p1;
  }
  return 0.0;
}

double draw_jump(const LevyModel& m, CounterRng& rng) {
  switch (m.jump_law) {
    case JumpLaw::Exponential: return rng.exponential() / m.jump_p1;
    case JumpLaw::NegativeExponential: return -rng.exponential() / m.jump_p1;
    case JumpLaw::Normal: return m.jump_p1 + m.jump_p2 * rng.normal();
    case JumpLaw::Constant: return m.jump_p1;
  }
  return 0.0;
}

template <class R>
R psi_t(const LevyModel& m, const R& u) {
  using std::exp;
  using std::pow;
  switch (m.kind) {
    case ModelKind::BrownianDrift:
      return R(2.0 * m.sigma * m.sigma) * u * u + R(2.0 * m.a) * u;
    case ModelKind::SpectrallyNegativeStable:
      return pow(u, R(m.alpha));
    case ModelKind::StableSubordinator:
      throw std::domain_error("stable subordinator has no finite exponential moments");
    case ModelKind::UnitPoisson:
      return exp(u) - R(1);
    case ModelKind::CompoundPoissonDrift: {
      R mgf = R(1);
      switch (m.jump_law) {
        case JumpLaw::Exponential:
          if (!(u < R(m.jump_p1))) throw std::domain_error("jump moment generating function diverges");
          mgf = R(m.jump_p1) / (R(m.jump_p1) - u);
          break;
        case JumpLaw::NegativeExponential:
          mgf = R(m.jump_p1) / (R(m.jump_p1) + u);
          break;
        case JumpLaw::Normal:
          mgf = exp(R(m.jump_p1) * u + R(0.5 * m.jump_p2 * m.jump_p2) * u * u);
          break;
        case JumpLaw::Constant:
          mgf = exp(R(m.jump_p1) * u);
          break;
      }
      return R(m.drift) * u + R(m.rate) * (mgf - R(1));
    }
  }
  throw std::logic_error("unknown model kind");
}

// Gaver-Stehfest inversion of a Laplace transform at t > 0.
template <class R, class F>
R gaver_stehfest(F&& transform, const R& t, int order) {
  const int half = order / 2;
  auto fact = [](int n) {
    R r(1);
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
  };
  const R ln2 = boost::multiprecision::log(R(2));
  R sum(0);
  for (int k = 1; k <= order; ++k) {
    R vk(0);
    for (int j = (k + 1) / 2; j <= std::min(k, half); ++j) {
      vk += boost::multiprecision::pow(R(j), half) * fact(2 * j) /
            (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
    }
    if ((k + half) % 2 != 0) vk = -vk;
    sum += vk * transform(R(k) * ln2 / t);
  }
  return sum * ln2 / t;
}

bool nondecreasing_paths(const LevyModel& m) {
  switch (m.kind) {
    case ModelKind::UnitPoisson:
    case ModelKind::StableSubordinator:
      return true;
    case ModelKind::CompoundPoissonDrift:
      return m.drift >= 0.0 && !m.has_negative_jumps();
    case ModelKind::BrownianDrift:
      return m.sigma == 0.0 && m.a >= 0.0;
    default:
      return false;
  }
}

// Chambers-Mallows-Stuck with beta = -1, scaled so that E exp(u S) = exp(u^alpha).
double stable_negative_unit(double alpha, CounterRng& rng) {
  const double v = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  if (alpha == 2.0) return std::sqrt(2.0) * std::sqrt(2.0 * w) * std::sin(v);
  const double t = -std::tan(std::numbers::pi * alpha / 2.0);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  const double scale = std::pow(std::fabs(std::cos(std::numbers::pi * alpha / 2.0)), 1.0 / alpha);
  return scale * x;
}

// Kanter's representation: E exp(-u S) = exp(-u^alpha).
double stable_subordinator_unit(double alpha, CounterRng& rng) {
  const double u = std::numbers::pi * rng.uniform();
  const double w = rng.exponential();
  const double a = std::pow(std::sin(alpha * u), alpha / (1.0 - alpha)) * std::sin((1.0 - alpha) * u) /
                   std::pow(std::sin(u), 1.0 / (1.0 - alpha));
  return std::pow(a / w, (1.0 - alpha) / alpha);
}

// Jump part of one step; optionally reports (offset, jump) pairs sorted by time.
double jump_step(const LevyModel& m, double dt, CounterRng& rng,
                 std::vector<std::pair<double, double>>* events) {
  const double rate = m.kind == ModelKind::UnitPoisson ? 1.0 : m.rate;
  const std::uint64_t n = rng.poisson(rate * dt);
  double total = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double when = rng.uniform() * dt;
    const double size = m.kind == ModelKind::UnitPoisson ? 1.0 : draw_jump(m, rng);
    total += size;
    if (events) events->emplace_back(when, size);
  }
  if (events) std::sort(events->begin(), events->end());
  return total;
}

}  // namespace

LevyModel LevyModel::brownian_drift(double a, double sigma) {
  LevyModel m;
  m.kind = ModelKind::BrownianDrift;
  m.a = a;
  m.sigma = sigma;
  m.validate();
  return m;
}

LevyModel LevyModel::spectrally_negative_stable(double alpha) {
  LevyModel m;
  m.kind = ModelKind::SpectrallyNegativeStable;
  m.alpha = alpha;
  m.validate();
  return m;
}

LevyModel LevyModel::stable_subordinator(double alpha) {
  LevyModel m;
  m.kind = ModelKind::StableSubordinator;
  m.alpha = alpha;
  m.validate();
  return m;
}

LevyModel LevyModel::compound_poisson(double rate, JumpLaw law, double p1, double p2, double drift) {
  LevyModel m;
  m.kind = ModelKind::CompoundPoissonDrift;
  m.rate = rate;
  m.jump_law = law;
  m.jump_p1 = p1;
  m.jump_p2 = p2;
  m.drift = drift;
  m.validate();
  return m;
}

LevyModel LevyModel::unit_poisson() {
  LevyModel m;
  m.kind = ModelKind::UnitPoisson;
  return m;
}

void LevyModel::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  switch (kind) {
    case ModelKind::BrownianDrift:
      require(finite(a) && finite(sigma) && sigma >= 0.0, "BrownianDrift needs finite a and sigma >= 0");
      break;
    case ModelKind::SpectrallyNegativeStable:
      require(alpha > 1.0 && alpha <= 2.0, "spectrally negative stable needs alpha in (1, 2]");
      break;
    case ModelKind::StableSubordinator:
      require(alpha > 0.0 && alpha < 1.0, "stable subordinator needs alpha in (0, 1)");
      break;
    case ModelKind::CompoundPoissonDrift:
      require(finite(rate) && rate >= 0.0 && finite(drift), "compound Poisson needs rate >= 0 and finite drift");
      if (jump_law == JumpLaw::Exponential || jump_law == JumpLaw::NegativeExponential)
        require(jump_p1 > 0.0, "exponential jump law needs a positive rate");
      if (jump_law == JumpLaw::Normal) require(jump_p2 >= 0.0, "normal jump law needs sd >= 0");
      break;
    case ModelKind::UnitPoisson:
      break;
  }
}

bool LevyModel::laplace_ok() const {
  if (kind == ModelKind::StableSubordinator) return false;
  if (kind == ModelKind::CompoundPoissonDrift && rate > 0.0 && jump_law == JumpLaw::Exponential) return false;
  return true;
}

bool LevyModel::has_positive_jumps() const {
  switch (kind) {
    case ModelKind::StableSubordinator:
    case ModelKind::UnitPoisson:
      return true;
    case ModelKind::CompoundPoissonDrift:
      if (rate == 0.0) return false;
      if (jump_law == JumpLaw::Exponential) return true;
      if (jump_law == JumpLaw::Normal) return jump_p2 > 0.0 || jump_p1 > 0.0;
      if (jump_law == JumpLaw::Constant) return jump_p1 > 0.0;
      return false;
    default:
      return false;
  }
}

bool LevyModel::has_negative_jumps() const {
  switch (kind) {
    case ModelKind::SpectrallyNegativeStable:
      return alpha < 2.0;
    case ModelKind::CompoundPoissonDrift:
      if (rate == 0.0) return false;
      if (jump_law == JumpLaw::NegativeExponential) return true;
      if (jump_law == JumpLaw::Normal) return jump_p2 > 0.0 || jump_p1 < 0.0;
      if (jump_law == JumpLaw::Constant) return jump_p1 < 0.0;
      return false;
    default:
      return false;
  }
}

bool LevyModel::gaussian() const { return gaussian_params(*this).has_value(); }

double LevyModel::mean() const {
  switch (kind) {
    case ModelKind::BrownianDrift: return 2.0 * a;
    case ModelKind::SpectrallyNegativeStable: return 0.0;
    case ModelKind::StableSubordinator: return std::numeric_limits<double>::infinity();
    case ModelKind::CompoundPoissonDrift: return drift + rate * jump_mean(*this);
    case ModelKind::UnitPoisson: return 1.0;
  }
  return 0.0;
}

std::string LevyModel::name() const {
  switch (kind) {
    case ModelKind::BrownianDrift: return "brownian_drift";
    case ModelKind::SpectrallyNegativeStable: return "stable_negative";
    case ModelKind::StableSubordinator: return "stable_subordinator";
    case ModelKind::CompoundPoissonDrift: return "compound_poisson";
    case ModelKind::UnitPoisson: return "unit_poisson";
  }
  return "unknown";
}

std::optional<GaussianParams> gaussian_params(const LevyModel& m) {
  if (m.kind == ModelKind::BrownianDrift) return GaussianParams{2.0 * m.a, 4.0 * m.sigma * m.sigma};
  if (m.kind == ModelKind::SpectrallyNegativeStable && m.alpha == 2.0) return GaussianParams{0.0, 2.0};
  return std::nullopt;
}

double laplace_exponent(const LevyModel& model, double u) {
  if (u < 0.0) throw std::domain_error("laplace_exponent is defined for u >= 0");
  if (u == 0.0 && model.kind != ModelKind::StableSubordinator) return 0.0;
  return psi_t<double>(model, u);
}

double sample_increment(const LevyModel& m, double dt, std::uint64_t key) {
  CounterRng rng(key);
  switch (m.kind) {
    case ModelKind::BrownianDrift:
      return 2.0 * (m.sigma * std::sqrt(dt) * rng.normal() + m.a * dt);
    case ModelKind::SpectrallyNegativeStable:
      return std::pow(dt, 1.0 / m.alpha) * stable_negative_unit(m.alpha, rng);
    case ModelKind::StableSubordinator:
      return std::pow(dt, 1.0 / m.alpha) * stable_subordinator_unit(m.alpha, rng);
    case ModelKind::CompoundPoissonDrift:
      return m.drift * dt + jump_step(m, dt, rng, nullptr);
    case ModelKind::UnitPoisson:
      return jump_step(m, dt, rng, nullptr);
  }
  return 0.0;
}

SamplePath sample_path(const LevyModel& model, double horizon, double step, std::uint64_t seed,
                       GridPolicy policy) {
  model.validate();
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be >= 0");
  if (horizon > 0.0 && step > horizon) throw std::invalid_argument("step exceeds the horizon");

  SamplePath path;
  path.model = model;
  path.seed = seed;
  path.step = step;
  const std::uint64_t key = stream_key(seed, StreamTag::Levy, 0);
  const auto full = static_cast<std::uint64_t>(std::floor(horizon / step + 1e-9));
  const bool refine = policy == GridPolicy::JumpRefined &&
                      (model.kind == ModelKind::CompoundPoissonDrift || model.kind == ModelKind::UnitPoisson);

  path.times.reserve(full + 2);
  path.values.reserve(full + 2);
  path.times.push_back(0.0);
  path.values.push_back(0.0);
  double value = 0.0;
  std::vector<std::pair<double, double>> events;
  for (std::uint64_t k = 0;; ++k) {
    const double t0 = static_cast<double>(k) * step;
    double t1 = static_cast<double>(k + 1) * step;
    if (k >= full) {
      if (horizon - t0 <= 1e-12 * std::max(1.0, horizon)) break;
      t1 = horizon;
    }
    const double dt = t1 - t0;
    const std::uint64_t step_key = derive_key(key, k);
    if (refine) {
      events.clear();
      CounterRng rng(step_key);
      const double drift = model.kind == ModelKind::UnitPoisson ? 0.0 : model.drift;
      jump_step(model, dt, rng, &events);
      double jumps = 0.0;
      for (const auto& [when, size] : events) {
        jumps += size;
        if (when <= 0.0 || when >= dt) continue;
        path.times.push_back(t0 + when);
        path.values.push_back(value + drift * when + jumps);
      }
      value += drift * dt + jumps;
    } else {
      value += sample_increment(model, dt, step_key);
    }
    path.times.push_back(t1);
    path.values.push_back(value);
    if (k >= full) break;
  }
  return path;
}

std::optional<double> first_passage_levy(const SamplePath& path, double z) {
  for (std::size_t i = 0; i < path.values.size(); ++i) {
    if (path.values[i] >= z) return path.times[i];
  }
  return std::nullopt;
}

double scale_function_W(const LevyModel& m, double x) {
  if (x < 0.0) return 0.0;
  if (m.has_positive_jumps()) throw std::domain_error("scale function needs a spectrally negative model");
  if (m.kind == ModelKind::BrownianDrift) {
    const double s2 = m.sigma * m.sigma;
    if (s2 == 0.0) {
      if (m.a <= 0.0) throw std::domain_error("pure negative drift has no scale function here");
      return 1.0 / (2.0 * m.a);
    }
    if (m.a == 0.0) return x / (2.0 * s2);
    return (1.0 - std::exp(-(m.a / s2) * x)) / (2.0 * m.a);
  }
  if (m.kind == ModelKind::SpectrallyNegativeStable) {
    return std::pow(x, m.alpha - 1.0) / std::tgamma(m.alpha);
  }
  return scale_function_W_numeric(m, x);
}

double scale_function_W_numeric(const LevyModel& m, double x, int order) {
  if (x < 0.0) return 0.0;
  if (m.has_positive_jumps()) throw std::domain_error("scale function needs a spectrally negative model");
  if (m.mean() < 0.0) throw std::domain_error("numeric scale function supports m >= 0 only");
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("Stehfest order must be even");
  if (x == 0.0) {
    // W(0) = 1/d for bounded variation with drift d > 0, and 0 otherwise.
    if (m.kind == ModelKind::CompoundPoissonDrift && m.drift > 0.0) return 1.0 / m.drift;
    if (m.kind == ModelKind::BrownianDrift && m.sigma == 0.0 && m.a > 0.0) return 1.0 / (2.0 * m.a);
    return 0.0;
  }
  auto transform = [&](const Real50& lambda) { return Real50(1) / psi_t<Real50>(m, lambda); };
  return static_cast<double>(gaver_stehfest<Real50>(transform, Real50(x), order));
}

double survival_probability(const LevyModel& m, double x) {
  if (x < 0.0) return 0.0;
  if (nondecreasing_paths(m)) return 1.0;
  const double mean = m.mean();
  if (mean <= 0.0) return 0.0;
  return std::clamp(mean * scale_function_W(m, x), 0.0, 1.0);
}

double return_guard(const LevyModel& m, double tol) {
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("guard tolerance must lie in (0, 1)");
  if (nondecreasing_paths(m)) return 0.0;
  if (m.mean() <= 0.0) throw std::domain_error("return guard needs m > 0");
  if (m.kind == ModelKind::BrownianDrift) return m.sigma * m.sigma / m.a * std::log(1.0 / tol);
  if (m.has_positive_jumps()) return 30.0;
  double lo = 0.0;
  double hi = 1.0;
  while (1.0 - survival_probability(m, hi) > tol && hi < 1e4) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - survival_probability(m, mid) > tol) lo = mid;
    else hi = mid;
  }
  return hi;
}

}  // namespace pssmp
