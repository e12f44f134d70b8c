#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pssmp/envelope.hpp"
#include "pssmp/lamperti.hpp"
#include "pssmp/levy.hpp"

namespace pssmp {

enum class GaugeFamily {
  LogregPhi,     // x / inf{s : 1/F(1/s) > |log x|}
  LogregTheta,   // t^2 / LogregPhi
  LoglogPhi,     // x exp{-(log|log x| / K)^(1/gamma)}
  LoglogBigPhi,  // t^2 / LoglogPhi
  RegvarF,       // L / psi(L), L = log|log t|
  RegvarG,       // psi(L) / L
  SatoRho,       // t L / kappa^{-1}(L)
  SatoRhoDual,   // t^2 / SatoRho
  PoissonM,      // t exp{-sqrt(2 L)}
  BesselSqrt,    // sqrt(2 t L)
  BesqLoglog,    // 2 t L
};

// kappa for the Sato gauges: c lambda^alpha, or the Laplace exponents
// -log E e^{-lambda U_1} and -log E e^{-lambda S_1} of BESQ(2(a+1)).
enum class KappaKind { Power, BesselLastPassage, BesselFirstPassage };

struct GaugeSpec {
  GaugeFamily family = GaugeFamily::BesqLoglog;
  std::string name;
  std::function<double(double)> neg_log_tail;  // logreg: u -> -log F(u), nondecreasing in 1/u
  double K = 0.5, gamma = 2.0;                 // loglog
  std::function<double(double)> psi;           // regvar
  KappaKind kappa = KappaKind::Power;
  double alpha = 0.5, kappa_scale = 1.0;       // Power kappa
  double bessel_index = 0.5;                   // Bessel kappas

  static GaugeSpec logreg_phi(std::function<double(double)> neg_log_tail);
  static GaugeSpec logreg_theta(std::function<double(double)> neg_log_tail);
  // F(u) = exp(-lambda u^-delta), for which phi(t) = t (lambda / log|log t|)^(1/delta).
  static GaugeSpec logreg_phi_inverse_exponential(double lambda, double delta);
  static GaugeSpec loglog_phi(double K, double gamma);
  static GaugeSpec loglog_Phi(double K, double gamma);
  static GaugeSpec regvar_f(std::function<double(double)> psi);
  static GaugeSpec regvar_g(std::function<double(double)> psi);
  static GaugeSpec regvar_f(const LevyModel& model);
  static GaugeSpec regvar_g(const LevyModel& model);
  static GaugeSpec sato_rho(KappaKind kind, double param, bool dual = false);
  static GaugeSpec poisson_m();
  static GaugeSpec bessel_sqrt();
  static GaugeSpec besq_loglog();
};

// Throws std::domain_error unless |log t| > e.
double gauge_eval(const GaugeSpec& g, double t);

// Inverse of the Sato kappa at level L, by bisection for the Bessel kinds.
double kappa_inverse(const GaugeSpec& g, double level);
double kappa_eval(const GaugeSpec& g, double lambda);

enum class LilCase {
  StableCspProcess,  // alpha (alpha-1)^{-(alpha-1)/alpha}, alpha in (1, 2]
  StableCspPassage,  // (1/alpha) (1 - 1/alpha)^{alpha-1}
  RegvarPassage,     // (beta-1)^{beta-1}, beta in (1, 2)
  RegvarProcess,     // (beta-1)^{-(beta-1)}
  SatoPassage,       // alpha (1-alpha)^{(1-alpha)/alpha}, alpha in (0, 1)
  SatoProcess,       // alpha^{-1} (1-alpha)^{-(1-alpha)/alpha}
  BesselPassage,     // 1/4
  BesselProcess,     // 4
  Poisson,           // 1
};

double lil_constant(LilCase c, double param = 0.0);
std::string to_string(LilCase c);

struct WindowGeometry {
  double T = 16.0;  // anchor; windows run away from it towards the chosen end
  double q = 2.0;
  std::size_t count = 20;
};

struct StatRecord {
  std::string gauge;
  End end = End::Infinity;
  std::vector<double> window_lo, window_hi;
  std::vector<std::vector<double>> running;  // per path, running extremum after each window
  std::vector<double> terminal;
  double median = 0.0;
  double iqr = 0.0;
};

// Running max over windows of max_{t in W_k} X_t / gauge(t).
StatRecord empirical_limsup(const std::vector<PssmpPath>& paths, const GaugeSpec& gauge, End end,
                            const WindowGeometry& geom = {});
// Running min over windows of min_{x in W_k} S_x / gauge(x). The paths hold
// S as a function of the level: times = levels, values = S.
StatRecord empirical_liminf(const std::vector<PssmpPath>& passage, const GaugeSpec& gauge, End end,
                            const WindowGeometry& geom = {});

// S_x = first time the path reaches x, on the given level grid (NaN if never).
PssmpPath first_passage_process(const PssmpPath& path, const std::vector<double>& levels);

struct TransferReport {
  StatRecord x, j, x_minus_j;
  bool positive_jumps = false;  // the transfer theorem does not cover these models
};

TransferReport transfer_check(const std::vector<PssmpPath>& paths, const GaugeSpec& gauge, End end,
                              const WindowGeometry& geom = {});

}  // namespace pssmp
