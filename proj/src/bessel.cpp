#include "pssmp/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

#include "pssmp/rng.hpp"
#include "pssmp/special.hpp"

namespace pssmp {

void BesqParams::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("BESQ dimension must be positive");
}

double besq_transition_sample(const BesqParams& p, double x, double t, std::uint64_t key) {
  p.validate();
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (!(x >= 0.0)) throw std::invalid_argument("x must be >= 0");
  CounterRng rng(key);
  const double n = x > 0.0 ? static_cast<double>(rng.poisson(x / (2.0 * t))) : 0.0;
  return 2.0 * t * rng.gamma(0.5 * p.delta + n);
}

std::vector<double> geometric_grid(double t0, double t1, std::size_t n) {
  if (!(t0 > 0.0 && t1 > t0) || n < 2) throw std::invalid_argument("geometric grid needs 0 < t0 < t1 and n >= 2");
  std::vector<double> g(n);
  const double r = std::log(t1 / t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = t0 * std::exp(r * static_cast<double>(i));
  g.back() = t1;
  return g;
}

PssmpPath besq_path_on_grid(const BesqParams& p, double x, const std::vector<double>& grid, std::uint64_t seed) {
  p.validate();
  PssmpPath out;
  out.start = x;
  out.seed = seed;
  out.model = LevyModel::brownian_drift(p.a(), 1.0);
  out.times.reserve(grid.size() + 1);
  out.values.reserve(grid.size() + 1);
  out.times.push_back(0.0);
  out.values.push_back(x);
  const std::uint64_t base = stream_key(seed, StreamTag::Bessel, 0);
  double prev = 0.0;
  std::uint64_t k = 0;
  for (double t : grid) {
    if (t == 0.0 && out.times.size() == 1) continue;
    if (!(t > prev)) throw std::invalid_argument("grid must be strictly increasing");
    out.values.push_back(besq_transition_sample(p, out.values.back(), t - prev, derive_key(base, k++)));
    out.times.push_back(t);
    prev = t;
  }
  return out;
}

double laplace_S1(const BesqParams& p, double lambda) {
  p.validate();
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  const double a = p.a();
  if (a < 0.0) throw std::domain_error("laplace_S1 needs delta >= 2");
  const double log_v = 0.5 * a * std::log(lambda) - 0.5 * a * std::numbers::ln2 - std::lgamma(a + 1.0) -
                       log_bessel_I(a, std::sqrt(2.0 * lambda));
  return std::exp(log_v);
}

double laplace_U1(const BesqParams& p, double lambda) {
  p.validate();
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  const double a = p.a();
  if (!(a > 0.0)) throw std::domain_error("laplace_U1 needs a transient process (delta > 2)");
  const double log_v = 0.5 * a * std::log(lambda) - (0.5 * a - 1.0) * std::numbers::ln2 - std::lgamma(a) +
                       log_bessel_K(a, std::sqrt(2.0 * lambda));
  return std::exp(log_v);
}

std::vector<double> sample_S1_spectral(const BesqParams& p, std::size_t n, std::uint64_t seed, std::size_t terms) {
  p.validate();
  const double a = p.a();
  if (a < 0.0) throw std::invalid_argument("spectral sampler needs delta >= 2");
  if (terms == 0) throw std::invalid_argument("need at least one explicit term");
  std::vector<double> w(terms);
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < terms; ++k) {
    const double j = boost::math::cyl_bessel_j_zero(a, static_cast<int>(k + 1));
    w[k] = 2.0 / (j * j);
    m1 += w[k];
    m2 += w[k] * w[k];
  }
  // sum 1/j^2 = 1/(4(a+1)) and sum 1/j^4 = 1/(16 (a+1)^2 (a+2)).
  const double tail_mean = 1.0 / (2.0 * (a + 1.0)) - m1;
  const double tail_var = 1.0 / (4.0 * (a + 1.0) * (a + 1.0) * (a + 2.0)) - m2;
  const bool use_tail = tail_mean > 0.0 && tail_var > 0.0;
  const double shape = use_tail ? tail_mean * tail_mean / tail_var : 0.0;
  const double scale = use_tail ? tail_var / tail_mean : 0.0;

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(stream_key(seed, StreamTag::Bessel, i + 1));
    double s = 0.0;
    for (double wk : w) s += wk * rng.exponential();
    if (use_tail) s += scale * rng.gamma(shape);
    out[i] = s;
  }
  return out;
}

std::vector<double> sample_U1_exact(const BesqParams& p, std::size_t n, std::uint64_t seed) {
  p.validate();
  const double a = p.a();
  if (!(a > 0.0)) throw std::invalid_argument("U_1 needs delta > 2");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(derive_key(stream_key(seed, StreamTag::Bessel, i + 1), 0x0A));
    out[i] = 0.5 / rng.gamma(a);
  }
  return out;
}

double besq3_first_passage_cdf(double s) {
  if (!(s > 0.0)) return 0.0;
  if (s < 1.0) {
    double sum = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double h = k + 0.5;
      const double term = std::exp(-2.0 * h * h / s);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return 2.0 * std::sqrt(2.0 / (std::numbers::pi * s)) * sum;
  }
  double sum = 0.0;
  for (int k = 1; k < 50; ++k) {
    const double term = std::exp(-0.5 * k * k * std::numbers::pi * std::numbers::pi * s);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return 1.0 - 2.0 * sum;
}

double gruet_shi_shape(const BesqParams& p, double s) {
  p.validate();
  if (!(s > 0.0 && s <= 2.0)) throw std::domain_error("s must lie in (0, 2]");
  return std::pow(s, 1.0 - 0.5 * p.delta) * std::exp(-0.5 / s);
}

GruetShiFit fit_gruet_shi_constant(const BesqParams& p, const std::vector<double>& samples,
                                   const std::vector<double>& grid) {
  if (samples.empty()) throw std::invalid_argument("need samples");
  if (p.delta < 2.0) throw std::domain_error("band needs delta >= 2");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  GruetShiFit fit;
  fit.grid = grid;
  fit.K = 1.0;
  for (double s : grid) {
    const double g = gruet_shi_shape(p, s);
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), s) - sorted.begin();
    const double ph = static_cast<double>(below) / static_cast<double>(sorted.size());
    fit.shape.push_back(g);
    fit.empirical.push_back(ph);
    if (!(ph > 0.0)) {
      fit.K = std::numeric_limits<double>::infinity();
      continue;
    }
    fit.K = std::max({fit.K, g / ph, ph / g});
  }
  return fit;
}

TailFunction kde_tail(const BesqParams& p, KdeForm form) {
  p.validate();
  const double d = p.delta;
  if (form == KdeForm::SquaredGruetShi) {
    if (d < 2.0) throw std::domain_error("squared form needs delta >= 2");
    return TailFunction::analytic("besq_gruet_shi", [d](double s) {
      return s > 0.0 ? std::exp((1.0 - 0.5 * d) * std::log(s) - 0.5 / s) : 0.0;
    });
  }
  if (form == KdeForm::SquaredKde && d < 2.0) throw std::domain_error("squared form needs delta >= 2");
  if (form == KdeForm::BesselKde && d < 1.0) throw std::domain_error("Bessel form needs delta >= 1");
  return TailFunction::analytic(form == KdeForm::SquaredKde ? "besq_kde" : "bessel_kde", [d](double s) {
    return s > 0.0 ? std::exp(-0.5 * d * std::log(s) - 0.5 / s) : 0.0;
  });
}

TestFunction kde_test_function(const TestFunction& h, KdeForm form) {
  if (form != KdeForm::BesselKde) return h;
  TestFunction sq;
  sq.name = h.name + "_squared";
  sq.h = [f = h.h](double t) {
    const double v = f(t);
    return v * v;
  };
  sq.log_ratio = [lr = h.log_ratio](double log_t) { return 2.0 * lr(log_t) - log_t; };
  return sq;
}

Verdict kde_integral_test(const BesqParams& p, const TestFunction& h, End end, KdeForm form,
                          const ClassifyBudget& budget) {
  return classify_integral(kde_tail(p, form), kde_test_function(h, form), end, TestMode::Upper, budget);
}

}  // namespace pssmp
