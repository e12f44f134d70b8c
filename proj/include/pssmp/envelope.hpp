#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace pssmp {

enum class End { Zero, Infinity };

// Upper: integrand F(t / h(t)) / t.  Lower: F(h(t) / t) / t.
enum class TestMode { Upper, Lower };

enum class VerdictKind { Converges, Diverges, Inconclusive };

std::string to_string(VerdictKind v);
std::string to_string(End e);

// Below the smallest sample an empirical tail either reports the floor 1/(n+1)
// or continues with a fitted -log F(s) = A/s + B log s + C, the shape of
// first-passage tails of squared Bessel processes.
enum class EmpiricalTail { Floor, InverseExponentialFit };

class TailFunction {
 public:
  static TailFunction analytic(std::string name, std::function<double(double)> f);
  static TailFunction power(double beta);                     // min(u^beta, 1)
  static TailFunction inverse_exponential(double lambda, double delta);  // exp(-lambda u^-delta)
  static TailFunction constant(double c);
  static TailFunction empirical(std::vector<double> samples, EmpiricalTail tail = EmpiricalTail::Floor,
                                std::size_t fit_count = 0);

  double operator()(double u) const;
  // True when u falls below the smallest sample of an empirical tail.
  bool beyond_data(double u) const;
  bool is_empirical() const;
  const std::string& name() const { return name_; }

  struct Fit {
    double A = 0.0, B = 0.0, C = 0.0;
    bool ok = false;
  };
  Fit fit() const;

 private:
  struct Empirical;
  std::string name_;
  std::function<double(double)> f_;
  std::shared_ptr<const Empirical> emp_;
};

enum class TestClass { H0, HInf, H0Inverse, HInfInverse };

struct TestFunction {
  std::string name;
  std::function<double(double)> h;
  // log(t / h(t)) as a function of log t; lets the classifier work at |log t|
  // far beyond the double range of t itself.
  std::function<double(double)> log_ratio;

  double operator()(double t) const { return h(t); }

  static TestFunction linear(double k);
  static TestFunction power(double p, double k = 1.0);
  // 2 c t log|log t|
  static TestFunction iterated_log(double c);
  // sqrt(2 c t log|log t|)
  static TestFunction sqrt_iterated_log(double c);
  // k t |log t|^gamma
  static TestFunction log_power(double gamma, double k = 1.0);
  // The log ratio is derived from h, so only |log t| < ~700 is usable.
  static TestFunction custom(std::string name, std::function<double(double)> h);
};

// Numerical admissibility check on a logarithmic grid near the relevant end.
bool admissible(const TestFunction& h, TestClass cls);

double integrand_eval(const TailFunction& F, const TestFunction& h, double t, TestMode mode);

struct ClassifyBudget {
  double u0 = 3.0;          // first window starts at |log t| = u0
  int max_windows = 20;     // doubling windows [u0 2^k, u0 2^(k+1)]
  double rel_tol = 1e-4;    // stabilisation of the extrapolated total
  int fit_windows = 3;
  int points_per_window = 16;
  double margin = 0.05;     // required distance of the fitted exponent from 1
};

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::vector<double> partial_sums;
  double exponent = 0.0;
  double exponent_se = 0.0;
  double u_lo = 0.0;
  double u_hi = 0.0;
  double extrapolated_total = 0.0;
  bool beyond_data = false;
  std::string reason;
};

// Decides finiteness of int F(ratio(t)) dt/t near `end` after the substitution
// u = -log t (at 0) or u = log t (at infinity).
Verdict classify_integral(const TailFunction& F, const TestFunction& h, End end, TestMode mode,
                          const ClassifyBudget& budget = {});

struct TailComparison {
  std::vector<double> grid;
  std::vector<double> log_ratio;  // log G - log F; NaN where dropped
  std::vector<bool> dropped;      // either side is zero or beyond the data
};

TailComparison tail_compare(const TailFunction& F, const TailFunction& G, const std::vector<double>& grid);

}  // namespace pssmp
