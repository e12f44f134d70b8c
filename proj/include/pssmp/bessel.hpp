#pragma once

#include <cstdint>
#include <vector>

#include "pssmp/envelope.hpp"
#include "pssmp/lamperti.hpp"

namespace pssmp {

// Squared Bessel process of dimension delta; index a = delta/2 - 1.
// The Lamperti image of xi = 2(B + a t) is BESQ(2(a + 1)).
struct BesqParams {
  double delta = 3.0;

  double a() const { return 0.5 * delta - 1.0; }
  static BesqParams from_index(double a) { return {2.0 * (a + 1.0)}; }
  void validate() const;
};

// Exact transition: Gamma(delta/2 + N, scale 2t) with N ~ Poisson(x / (2t)).
double besq_transition_sample(const BesqParams& p, double x, double t, std::uint64_t key);

// n points geometrically spaced on [t0, t1], both ends included.
std::vector<double> geometric_grid(double t0, double t1, std::size_t n);

// Path on the given increasing grid, started at x at time 0 (0 is prepended
// to the grid if absent). Step k draws from derive_key(stream_key(seed, Bessel, 0), k).
PssmpPath besq_path_on_grid(const BesqParams& p, double x, const std::vector<double>& grid, std::uint64_t seed);

// Laplace transforms of S_1 and U_1 for BESQ(delta) started at 0:
//   E e^{-l S_1} = l^{a/2} / (2^{a/2} Gamma(a+1) I_a(sqrt(2 l)))
//   E e^{-l U_1} = l^{a/2} K_a(sqrt(2 l)) / (2^{a/2-1} Gamma(a)),   a > 0
double laplace_S1(const BesqParams& p, double lambda);
double laplace_U1(const BesqParams& p, double lambda);

// S_1 as the series sum 2 E_n / j_{a,n}^2 over the positive zeros of J_a;
// the terms beyond `terms` are replaced by a Gamma variable with the same
// first two moments.
std::vector<double> sample_S1_spectral(const BesqParams& p, std::size_t n, std::uint64_t seed,
                                       std::size_t terms = 64);
// U_1 = 1 / (2 G) with G ~ Gamma(a); needs a > 0.
std::vector<double> sample_U1_exact(const BesqParams& p, std::size_t n, std::uint64_t seed);

// P(S_1 < s) for delta = 3, from the image series.
double besq3_first_passage_cdf(double s);

// s^{1 - delta/2} exp(-1/(2s)), the two-sided bound shape for P(S_1 < s).
double gruet_shi_shape(const BesqParams& p, double s);

struct GruetShiFit {
  double K = 0.0;
  std::vector<double> grid;
  std::vector<double> empirical;  // P-hat(S_1 < s)
  std::vector<double> shape;
};

// K-hat = max over the grid of max(g / P-hat, P-hat / g).
GruetShiFit fit_gruet_shi_constant(const BesqParams& p, const std::vector<double>& samples,
                                   const std::vector<double>& grid);

enum class KdeForm {
  SquaredGruetShi,  // F(s) = s^{1 - delta/2} e^{-1/(2s)}, ratio t / h
  SquaredKde,       // F(s) = s^{-delta/2} e^{-1/(2s)}, ratio t / h
  BesselKde,        // F(s) = s^{-delta/2} e^{-1/(2s)}, ratio t / h^2 (h on the Bessel scale)
};

TailFunction kde_tail(const BesqParams& p, KdeForm form);
// The test function whose ratio t / h' feeds kde_tail: h itself, or h^2 for BesselKde.
TestFunction kde_test_function(const TestFunction& h, KdeForm form);

Verdict kde_integral_test(const BesqParams& p, const TestFunction& h, End end, KdeForm form,
                          const ClassifyBudget& budget = {});

}  // namespace pssmp
