// Long-running acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pssmp/bessel.hpp"
#include "pssmp/envelope.hpp"
#include "pssmp/lamperti.hpp"
#include "pssmp/levy.hpp"
#include "pssmp/lil.hpp"
#include "pssmp/passage.hpp"
#include "pssmp/rng.hpp"
#include "pssmp/runner.hpp"
#include "pssmp/special.hpp"
#include "pssmp/stats.hpp"

using namespace pssmp;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

const LevyModel kBesq3 = LevyModel::brownian_drift(0.5);

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double got, double want) { return std::fabs(got / want - 1.0); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("threw: ") + e.what());
  }
  const double wall = seconds_since(t0);
  if (budget_s > 0.0) o.require(wall < budget_s, fmt("runtime %.1fs < %.0fs", wall, budget_s));
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

double mean_of(const std::vector<double>& v, const std::function<double(double)>& f, double* se) {
  std::vector<double> y;
  y.reserve(v.size());
  for (double x : v) y.push_back(f(x));
  const auto s = summarize(y);
  *se = s.stderr_;
  return s.mean;
}

// BESQ(3) ensemble shared by the two LIL criteria.
struct LilEnsemble {
  WindowGeometry geom;
  std::vector<PssmpPath> paths;
};

const LilEnsemble& lil_ensemble() {
  static const LilEnsemble e = [] {
    LilEnsemble r;
    // Windows [T0 q^k, T0 q^{k+1}] with T0 = 10^{5/4} > e^e and q = 10^{1/4}:
    // T = 1e4, 1e6, 1e8 close windows 10, 18 and 26.
    r.geom.T = std::pow(10.0, 1.25);
    r.geom.q = std::pow(10.0, 0.25);
    r.geom.count = 27;
    const std::size_t extension = 8, per_window = 32;
    const double t0 = r.geom.T / r.geom.q;
    const double t1 = 1e8 * std::pow(r.geom.q, static_cast<double>(extension));
    const auto grid = geometric_grid(t0, t1, (r.geom.count + extension + 1) * per_window + 1);
    r.paths.resize(100);
    parallel_for(r.paths.size(), [&](std::size_t i) { r.paths[i] = besq_path_on_grid(BesqParams{3.0}, 0.0, grid, 9000 + i); });
    return r;
  }();
  return e;
}

std::size_t window_ending_at(const StatRecord& r, double T) {
  for (std::size_t k = 0; k < r.window_hi.size(); ++k)
    if (std::fabs(r.window_hi[k] / T - 1.0) < 1e-9) return k;
  throw std::logic_error("no window ends at the requested time");
}

double median_at(const StatRecord& r, std::size_t k) {
  std::vector<double> v;
  for (const auto& path : r.running) v.push_back(path[k]);
  return median(v);
}

}  // namespace

int main() {
  criterion(1, "lamperti round trip", 30.0, [](Outcome& o) {
    std::vector<double> err(100);
    const double step = 1e-3;
    parallel_for(err.size(), [&](std::size_t i) {
      const auto xi = sample_path(kBesq3, 5.0, step, 100 + i);
      const auto back = lamperti_inverse(lamperti_forward(1.0, xi));
      double e = 0.0;
      for (std::size_t k = 0; k < xi.times.size(); ++k) e = std::max(e, std::fabs(back.values[k] - xi.values[k]));
      err[i] = e;
    });
    const double worst = *std::max_element(err.begin(), err.end());
    o.require(worst <= 10.0 * step, fmt("sup error %.3g <= %.3g", worst, 10.0 * step));
  });

  criterion(2, "BESQ(3) correspondence", 120.0, [](Outcome& o) {
    const std::size_t n = 10000;
    std::vector<double> lamp(n), exact(n);
    parallel_for(n, [&](std::size_t i) {
      lamp[i] = simulate_pssmp(kBesq3, 1.0, 1.0, 1e-3, 2000 + i).value_at(1.0);
      exact[i] = besq_transition_sample(BesqParams{3.0}, 1.0, 1.0, stream_key(2, StreamTag::Harness, i));
    });
    const auto ks = ks_two_sample(lamp, exact);
    o.require(ks.p_value > 0.01, fmt("KS D=%.4f p=%.3g > 0.01", ks.statistic, ks.p_value));
  });

  criterion(3, "first passage duality", 0.0, [](Outcome& o) {
    const std::size_t n = 10000;
    const auto direct = sample_S_direct(kBesq3, 1.0, n, 31).values;
    std::vector<double> stat;
    double p_last = 0.0;
    for (double x0 : {1e-1, 1e-2, 1e-3}) {
      DualityOptions opts;
      opts.x0 = x0;
      const auto ks = ks_two_sample(direct, sample_S1_duality(kBesq3, n, 1e-6, 32, opts).values);
      stat.push_back(ks.statistic);
      p_last = ks.p_value;
    }
    o.require(p_last > 0.01, fmt("x0=1e-3 KS p=%.3g > 0.01", p_last));
    const bool monotone = stat[0] >= stat[1] && stat[1] >= stat[2];
    char buf[128];
    std::snprintf(buf, sizeof buf, "D over x0 = %.4f, %.4f, %.4f nonincreasing", stat[0], stat[1], stat[2]);
    o.require(monotone, buf);
  });

  criterion(4, "last passage duality and self-decomposability", 0.0, [](Outcome& o) {
    const std::size_t n = 10000;
    const auto direct = sample_U_direct(kBesq3, 1.0, n, 41).values;
    const auto dual = sample_U1_duality(kBesq3, n, 1e-6, 42).values;
    const auto ks = ks_two_sample(direct, dual);
    o.require(ks.p_value > 0.01, fmt("U_1 vs I(xi-hat) KS p=%.3g > 0.01", ks.p_value));

    const double c = 0.5;
    const auto walk = default_functional_walk();
    const auto split = sample_exponential_functional(kBesq3, n, 1e-6, 43, walk, std::log(1.0 / c));
    const auto copy = sample_exponential_functional(kBesq3, n, 1e-6, 44, walk);
    const auto whole = sample_exponential_functional(kBesq3, n, 1e-6, 45, walk);
    std::vector<double> decomposed(n);
    for (std::size_t i = 0; i < n; ++i) decomposed[i] = split.split_parts[i] + c * copy.values[i];
    const auto sd = ks_two_sample(decomposed, whole.values);
    o.require(sd.p_value > 0.01, fmt("A_c + c I' vs I KS p=%.3g > 0.01", sd.p_value));
  });

  criterion(5, "entrance law mass", 0.0, [](Outcome& o) {
    const auto u = sample_U1_duality(kBesq3, 100000, 1e-6, 51).values;
    double se = 0.0;
    const double mean = mean_of(u, [](double v) { return 1.0 / v; }, &se);
    const double m = kBesq3.mean();
    o.require(std::fabs(mean - m) <= 3.0 * se, fmt("E[1/I]=%.5f vs m=%.3f", mean, m) + fmt(" (se %.2g)", se));
  });

  criterion(6, "integral test classifier", 60.0, [](Outcome& o) {
    const BesqParams p{3.0};
    const auto Fhat = TailFunction::empirical(sample_S1_spectral(p, 100000, 61), EmpiricalTail::InverseExponentialFit);
    for (End end : {End::Zero, End::Infinity}) {
      const char* where = end == End::Zero ? "0" : "inf";
      for (double c : {1.5, 0.75}) {
        const auto h = TestFunction::iterated_log(c);
        const auto want = c > 1.0 ? VerdictKind::Converges : VerdictKind::Diverges;
        const auto a = kde_integral_test(p, h, end, KdeForm::SquaredGruetShi);
        const auto e = classify_integral(Fhat, h, end, TestMode::Upper);
        char buf[160];
        std::snprintf(buf, sizeof buf, "c=%.2f at %s: %s / ecdf %s", c, where, to_string(a.kind).c_str(),
                      to_string(e.kind).c_str());
        o.require(a.kind == want && e.kind == want, buf);
      }
    }
  });

  criterion(7, "gauge identities", 0.0, [](Outcome& o) {
    std::vector<double> pts;
    for (int i = 0; i < 500; ++i) pts.push_back(std::exp(2.8 + 0.12 * i));
    for (int i = 0; i < 500; ++i) pts.push_back(std::exp(-2.8 - 0.12 * i));
    const double lambda = 1.3, delta = 0.8;
    const auto neg_log_tail = [=](double u) { return lambda * std::pow(u, -delta); };
    const auto phi = GaugeSpec::logreg_phi(neg_log_tail);
    const auto theta = GaugeSpec::logreg_theta(neg_log_tail);
    const auto closed = GaugeSpec::logreg_phi_inverse_exponential(lambda, delta);
    const auto lphi = GaugeSpec::loglog_phi(0.5, 2.0);
    const auto lPhi = GaugeSpec::loglog_Phi(0.5, 2.0);
    const auto m = GaugeSpec::poisson_m();
    double prod = 0.0, logreg = 0.0;
    bool exact_m = true;
    for (double t : pts) {
      prod = std::max({prod, rel(gauge_eval(theta, t) * gauge_eval(phi, t), t * t),
                       rel(gauge_eval(lPhi, t) * gauge_eval(lphi, t), t * t)});
      logreg = std::max(logreg, rel(gauge_eval(phi, t), gauge_eval(closed, t)));
      const double want = t * std::exp(-std::sqrt(2.0 * std::log(std::fabs(std::log(t)))));
      exact_m = exact_m && gauge_eval(m, t) == want && gauge_eval(lphi, t) == want;
    }
    o.require(prod <= 4.0 * std::numeric_limits<double>::epsilon(), fmt("products rel %.2g", prod));
    o.require(logreg < 1e-8, fmt("logreg bisection rel %.2g < 1e-8", logreg));
    o.require(exact_m, "Poisson gauge bit-exact");
  });

  criterion(8, "LIL constants", 0.0, [](Outcome& o) {
    struct Case {
      LilCase c;
      double param;
      Big want;
    };
    const Big half("0.5");
    const Case cases[] = {
        {LilCase::StableCspProcess, 2.0, Big(2) * pow(Big(1), -Big(1) / Big(2))},
        {LilCase::RegvarPassage, 1.5, pow(half, half)},
        {LilCase::SatoPassage, 0.5, half * pow(half, (Big(1) - half) / half)},
        {LilCase::BesselPassage, 0.0, Big(1) / Big(4)},
        {LilCase::BesselProcess, 0.0, Big(4)},
    };
    for (const auto& k : cases) {
      const double got = lil_constant(k.c, k.param);
      const double r = static_cast<double>(abs(Big(got) / k.want - 1));
      o.require(r < 1e-12, to_string(k.c) + fmt(" %.17g rel %.1g", got, r));
    }
  });

  criterion(9, "empirical LIL band", 300.0, [](Outcome& o) {
    const auto& e = lil_ensemble();
    const auto x = empirical_limsup(e.paths, GaugeSpec::besq_loglog(), End::Infinity, e.geom);
    double prev = -INFINITY;
    bool monotone = true;
    for (double T : {1e4, 1e6, 1e8}) {
      const double med = median_at(x, window_ending_at(x, T));
      monotone = monotone && med >= prev;
      prev = med;
      o.require(T < 1e8 || (med >= 0.6 && med <= 1.2), fmt("T=%.0e median %.3f", T, med));
    }
    o.require(monotone, "nondecreasing in T");
  });

  criterion(10, "transfer to J and X-J", 0.0, [](Outcome& o) {
    const auto& e = lil_ensemble();
    const auto rep = transfer_check(e.paths, GaugeSpec::besq_loglog(), End::Infinity, e.geom);
    const double mj = median(rep.j.terminal), mxj = median(rep.x_minus_j.terminal);
    o.require(mj >= 0.5 && mj <= 1.3, fmt("J median %.3f in [0.5, 1.3]", mj));
    o.require(mxj >= 0.5 && mxj <= 1.3, fmt("X-J median %.3f in [0.5, 1.3]", mxj));
    bool ordered = true;
    for (std::size_t i = 0; i < rep.x.terminal.size(); ++i) ordered = ordered && rep.j.terminal[i] <= rep.x.terminal[i];
    o.require(ordered, "J <= X on every path");
  });

  criterion(11, "Gruet-Shi constant stability", 0.0, [](Outcome& o) {
    const auto grid = geometric_grid(0.1, 2.0, 20);
    for (double d : {2.0, 3.0}) {
      const BesqParams p{d};
      const double k1 = fit_gruet_shi_constant(p, sample_S1_spectral(p, 100000, 111), grid).K;
      const double k2 = fit_gruet_shi_constant(p, sample_S1_spectral(p, 200000, 112), grid).K;
      const double change = std::fabs(k2 / k1 - 1.0);
      o.require(change < 0.2, fmt("delta=%.0f", d) + fmt(" K %.4f -> %.4f", k1, k2));
    }
  });

  criterion(12, "Bessel Laplace transforms", 0.0, [](Outcome& o) {
    const BesqParams p{3.0};
    const auto s = sample_S1_spectral(p, 100000, 121);
    const auto u = sample_U1_exact(p, 100000, 122);
    for (double l : {0.5, 1.0, 2.0}) {
      double se_s = 0.0, se_u = 0.0;
      const double ms = mean_of(s, [=](double v) { return std::exp(-l * v); }, &se_s);
      const double mu = mean_of(u, [=](double v) { return std::exp(-l * v); }, &se_u);
      o.require(std::fabs(ms - laplace_S1(p, l)) <= 3.0 * se_s, fmt("S1 l=%.1f z=%.2f", l, (ms - laplace_S1(p, l)) / se_s));
      o.require(std::fabs(mu - laplace_U1(p, l)) <= 3.0 * se_u, fmt("U1 l=%.1f z=%.2f", l, (mu - laplace_U1(p, l)) / se_u));
    }
    double worst = 0.0;
    for (double z = 1e-3; z <= 50.0; z *= 1.07) {
      worst = std::max(worst, rel(bessel_I(0.5, z), std::sqrt(2.0 / (std::numbers::pi * z)) * std::sinh(z)));
      worst = std::max(worst, rel(bessel_K(0.5, z), std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z)));
    }
    o.require(worst < 1e-10, fmt("a=1/2 closed forms rel %.2g", worst));
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
