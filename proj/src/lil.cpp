#include "pssmp/lil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "pssmp/passage.hpp"
#include "pssmp/special.hpp"
#include "pssmp/stats.hpp"

namespace pssmp {

namespace {

// L = |log t| and log L, with the |log t| > e guard.
std::pair<double, double> loglog(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("gauge argument must be positive and finite");
  const double L = std::fabs(std::log(t));
  if (!(L > std::numbers::e)) throw std::domain_error("gauge needs |log t| > e");
  return {L, std::log(L)};
}

// Smallest s with f(s) > level for nondecreasing f, by geometric bisection.
double solve_increasing(const std::function<double(double)>& f, double level) {
  double lo = 1.0, hi = 1.0;
  if (f(1.0) > level) {
    for (int i = 0; i < 2000 && f(lo) > level; ++i) lo *= 0.5;
    if (f(lo) > level) throw std::domain_error("no solution in range");
  } else {
    for (int i = 0; i < 2000 && !(f(hi) > level); ++i) hi *= 2.0;
    if (!(f(hi) > level)) throw std::domain_error("no solution in range");
  }
  for (int i = 0; i < 400 && hi / lo - 1.0 > 1e-15; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (f(mid) > level)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double bessel_phi1(double a, double lambda) {
  return (0.5 * a - 1.0) * std::numbers::ln2 + std::lgamma(a) - log_bessel_K(a, std::sqrt(2.0 * lambda)) -
         0.5 * a * std::log(lambda);
}

double bessel_phi2(double a, double lambda) {
  return log_bessel_I(a, std::sqrt(2.0 * lambda)) + 0.5 * a * std::numbers::ln2 + std::lgamma(a + 1.0) -
         0.5 * a * std::log(lambda);
}

std::vector<std::pair<double, double>> windows(const WindowGeometry& g, End end) {
  if (!(g.T > 0.0) || !(g.q > 1.0) || g.count == 0) throw std::invalid_argument("bad window geometry");
  std::vector<std::pair<double, double>> w;
  for (std::size_t k = 0; k < g.count; ++k) {
    const double kk = static_cast<double>(k);
    if (end == End::Infinity)
      w.emplace_back(g.T * std::pow(g.q, kk), g.T * std::pow(g.q, kk + 1.0));
    else
      w.emplace_back(g.T * std::pow(g.q, -(kk + 1.0)), g.T * std::pow(g.q, -kk));
  }
  return w;
}

StatRecord running_extremum(const std::vector<PssmpPath>& paths, const GaugeSpec& gauge, End end,
                            const WindowGeometry& geom, bool upper) {
  if (paths.empty()) throw std::invalid_argument("need at least one path");
  StatRecord rec;
  rec.gauge = gauge.name;
  rec.end = end;
  const auto ws = windows(geom, end);
  for (const auto& [lo, hi] : ws) {
    rec.window_lo.push_back(lo);
    rec.window_hi.push_back(hi);
  }
  for (const auto& path : paths) {
    std::vector<double> run;
    double acc = upper ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (const auto& [lo, hi] : ws) {
      const auto first = std::lower_bound(path.times.begin(), path.times.end(), lo);
      const auto last = std::upper_bound(path.times.begin(), path.times.end(), hi);
      bool any = false;
      for (auto it = first; it != last; ++it) {
        const auto i = static_cast<std::size_t>(it - path.times.begin());
        const double v = path.values[i];
        if (std::isnan(v)) continue;
        const double r = v / gauge_eval(gauge, *it);
        acc = upper ? std::max(acc, r) : std::min(acc, r);
        any = true;
      }
      if (!any) throw std::invalid_argument("empty window: the path does not cover [" + std::to_string(lo) + ", " +
                                            std::to_string(hi) + "]");
      run.push_back(acc);
    }
    rec.terminal.push_back(run.back());
    rec.running.push_back(std::move(run));
  }
  rec.median = median(rec.terminal);
  rec.iqr = iqr(rec.terminal);
  return rec;
}

}  // namespace

GaugeSpec GaugeSpec::logreg_phi(std::function<double(double)> neg_log_tail) {
  GaugeSpec g;
  g.family = GaugeFamily::LogregPhi;
  g.name = "logreg_phi";
  g.neg_log_tail = std::move(neg_log_tail);
  return g;
}

GaugeSpec GaugeSpec::logreg_theta(std::function<double(double)> neg_log_tail) {
  GaugeSpec g = logreg_phi(std::move(neg_log_tail));
  g.family = GaugeFamily::LogregTheta;
  g.name = "logreg_theta";
  return g;
}

GaugeSpec GaugeSpec::logreg_phi_inverse_exponential(double lambda, double delta) {
  if (!(lambda > 0.0 && delta > 0.0)) throw std::invalid_argument("need lambda, delta > 0");
  return logreg_phi([lambda, delta](double u) { return lambda * std::pow(u, -delta); });
}

GaugeSpec GaugeSpec::loglog_phi(double K, double gamma) {
  if (!(K > 0.0 && gamma > 0.0)) throw std::invalid_argument("need K, gamma > 0");
  GaugeSpec g;
  g.family = GaugeFamily::LoglogPhi;
  g.name = "loglog_phi";
  g.K = K;
  g.gamma = gamma;
  return g;
}

GaugeSpec GaugeSpec::loglog_Phi(double K, double gamma) {
  GaugeSpec g = loglog_phi(K, gamma);
  g.family = GaugeFamily::LoglogBigPhi;
  g.name = "loglog_Phi";
  return g;
}

GaugeSpec GaugeSpec::regvar_f(std::function<double(double)> psi) {
  GaugeSpec g;
  g.family = GaugeFamily::RegvarF;
  g.name = "regvar_f";
  g.psi = std::move(psi);
  return g;
}

GaugeSpec GaugeSpec::regvar_g(std::function<double(double)> psi) {
  GaugeSpec g = regvar_f(std::move(psi));
  g.family = GaugeFamily::RegvarG;
  g.name = "regvar_g";
  return g;
}

GaugeSpec GaugeSpec::regvar_f(const LevyModel& model) {
  model.validate();
  return regvar_f([model](double l) { return laplace_exponent(model, l); });
}

GaugeSpec GaugeSpec::regvar_g(const LevyModel& model) {
  model.validate();
  return regvar_g([model](double l) { return laplace_exponent(model, l); });
}

GaugeSpec GaugeSpec::sato_rho(KappaKind kind, double param, bool dual) {
  GaugeSpec g;
  g.family = dual ? GaugeFamily::SatoRhoDual : GaugeFamily::SatoRho;
  g.name = dual ? "sato_rho_dual" : "sato_rho";
  g.kappa = kind;
  if (kind == KappaKind::Power) {
    if (!(param > 0.0 && param < 1.0)) throw std::invalid_argument("power kappa needs alpha in (0, 1)");
    g.alpha = param;
  } else {
    if (!(param > 0.0)) throw std::invalid_argument("Bessel kappa needs index a > 0");
    g.bessel_index = param;
  }
  return g;
}

GaugeSpec GaugeSpec::poisson_m() {
  GaugeSpec g;
  g.family = GaugeFamily::PoissonM;
  g.name = "poisson_m";
  return g;
}

GaugeSpec GaugeSpec::bessel_sqrt() {
  GaugeSpec g;
  g.family = GaugeFamily::BesselSqrt;
  g.name = "bessel_sqrt";
  return g;
}

GaugeSpec GaugeSpec::besq_loglog() {
  GaugeSpec g;
  g.family = GaugeFamily::BesqLoglog;
  g.name = "besq_loglog";
  return g;
}

double kappa_eval(const GaugeSpec& g, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be positive");
  switch (g.kappa) {
    case KappaKind::Power: return g.kappa_scale * std::pow(lambda, g.alpha);
    case KappaKind::BesselLastPassage: return bessel_phi1(g.bessel_index, lambda);
    case KappaKind::BesselFirstPassage: return bessel_phi2(g.bessel_index, lambda);
  }
  return 0.0;
}

double kappa_inverse(const GaugeSpec& g, double level) {
  if (!(level > 0.0)) throw std::domain_error("kappa inverse needs a positive level");
  if (g.kappa == KappaKind::Power) return std::pow(level / g.kappa_scale, 1.0 / g.alpha);
  return solve_increasing([&g](double l) { return kappa_eval(g, l); }, level);
}

double gauge_eval(const GaugeSpec& g, double t) {
  const auto [L, logL] = loglog(t);
  switch (g.family) {
    case GaugeFamily::LogregPhi:
    case GaugeFamily::LogregTheta: {
      if (!g.neg_log_tail) throw std::invalid_argument("logreg gauge needs a tail");
      const double s = solve_increasing([&g](double s) { return g.neg_log_tail(1.0 / s); }, logL);
      const double phi = t / s;
      return g.family == GaugeFamily::LogregPhi ? phi : t * t / phi;
    }
    case GaugeFamily::LoglogPhi:
    case GaugeFamily::LoglogBigPhi: {
      const double phi = t * std::exp(-std::pow(logL / g.K, 1.0 / g.gamma));
      return g.family == GaugeFamily::LoglogPhi ? phi : t * t / phi;
    }
    case GaugeFamily::RegvarF:
    case GaugeFamily::RegvarG: {
      if (!g.psi) throw std::invalid_argument("regvar gauge needs psi");
      const double p = g.psi(logL);
      if (!(p > 0.0)) throw std::domain_error("psi must be positive at log|log t|");
      return g.family == GaugeFamily::RegvarF ? logL / p : p / logL;
    }
    case GaugeFamily::SatoRho:
    case GaugeFamily::SatoRhoDual: {
      const double rho = t * logL / kappa_inverse(g, logL);
      return g.family == GaugeFamily::SatoRho ? rho : t * t / rho;
    }
    case GaugeFamily::PoissonM: return t * std::exp(-std::sqrt(2.0 * logL));
    case GaugeFamily::BesselSqrt: return std::sqrt(2.0 * t * logL);
    case GaugeFamily::BesqLoglog: return 2.0 * t * logL;
  }
  return 0.0;
}

double lil_constant(LilCase c, double p) {
  switch (c) {
    case LilCase::StableCspProcess:
      if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("alpha must lie in (1, 2]");
      return p * std::pow(p - 1.0, -(p - 1.0) / p);
    case LilCase::StableCspPassage:
      if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("alpha must lie in (1, 2]");
      return std::pow(1.0 - 1.0 / p, p - 1.0) / p;
    case LilCase::RegvarPassage:
      if (!(p > 1.0 && p < 2.0)) throw std::domain_error("beta must lie in (1, 2)");
      return std::pow(p - 1.0, p - 1.0);
    case LilCase::RegvarProcess:
      if (!(p > 1.0 && p < 2.0)) throw std::domain_error("beta must lie in (1, 2)");
      return std::pow(p - 1.0, -(p - 1.0));
    case LilCase::SatoPassage:
      if (!(p > 0.0 && p < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
      return p * std::pow(1.0 - p, (1.0 - p) / p);
    case LilCase::SatoProcess:
      if (!(p > 0.0 && p < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
      return std::pow(1.0 - p, -(1.0 - p) / p) / p;
    case LilCase::BesselPassage: return lil_constant(LilCase::SatoPassage, 0.5);
    case LilCase::BesselProcess: return lil_constant(LilCase::SatoProcess, 0.5);
    case LilCase::Poisson: return 1.0;
  }
  return 0.0;
}

std::string to_string(LilCase c) {
  switch (c) {
    case LilCase::StableCspProcess: return "stable_csp_process";
    case LilCase::StableCspPassage: return "stable_csp_passage";
    case LilCase::RegvarPassage: return "regvar_passage";
    case LilCase::RegvarProcess: return "regvar_process";
    case LilCase::SatoPassage: return "sato_passage";
    case LilCase::SatoProcess: return "sato_process";
    case LilCase::BesselPassage: return "bessel_passage";
    case LilCase::BesselProcess: return "bessel_process";
    case LilCase::Poisson: return "poisson";
  }
  return "";
}

StatRecord empirical_limsup(const std::vector<PssmpPath>& paths, const GaugeSpec& gauge, End end,
                            const WindowGeometry& geom) {
  return running_extremum(paths, gauge, end, geom, true);
}

StatRecord empirical_liminf(const std::vector<PssmpPath>& passage, const GaugeSpec& gauge, End end,
                            const WindowGeometry& geom) {
  return running_extremum(passage, gauge, end, geom, false);
}

PssmpPath first_passage_process(const PssmpPath& path, const std::vector<double>& levels) {
  PssmpPath out;
  out.model = path.model;
  out.seed = path.seed;
  out.start = path.start;
  out.times = levels;
  out.values.assign(levels.size(), std::numeric_limits<double>::quiet_NaN());
  if (!std::is_sorted(levels.begin(), levels.end())) throw std::invalid_argument("levels must be increasing");
  // One sweep: the running maximum crosses the levels in order.
  std::size_t j = 0;
  for (std::size_t i = 0; i < path.times.size() && j < levels.size(); ++i) {
    while (j < levels.size() && path.values[i] >= levels[j]) out.values[j++] = path.times[i];
  }
  return out;
}

TransferReport transfer_check(const std::vector<PssmpPath>& paths, const GaugeSpec& gauge, End end,
                              const WindowGeometry& geom) {
  TransferReport rep;
  std::vector<PssmpPath> js, ds;
  for (const auto& p : paths) {
    if (p.model.has_positive_jumps()) rep.positive_jumps = true;
    PssmpPath j = p;
    j.values = future_infimum(p);
    PssmpPath d = p;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] = p.values[i] - j.values[i];
    js.push_back(std::move(j));
    ds.push_back(std::move(d));
  }
  rep.x = empirical_limsup(paths, gauge, end, geom);
  rep.j = empirical_limsup(js, gauge, end, geom);
  rep.x_minus_j = empirical_limsup(ds, gauge, end, geom);
  return rep;
}

}  // namespace pssmp
