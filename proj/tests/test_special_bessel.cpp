#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pssmp/bessel.hpp"
#include "pssmp/rng.hpp"
#include "pssmp/special.hpp"
#include "pssmp/stats.hpp"

using namespace pssmp;

namespace {

// Reference values from a 30-digit independent evaluation.
struct BesselRef {
  double a, z, I, K;
};
const BesselRef kRefs[] = {
    {0.0, 0.1, 1.00250156293409560168, 2.42706902470201655782},
    {1.0, 5.0, 24.3356421424505271991, 0.00404461344545216420837},
    {2.5, 30.0, 703124015519.203251788, 2.36249878110479924389e-14},
    {0.5, 50.0, 2.92515685299129004196e20, 3.41862009545707463557e-23},
    {3.0, 0.001, 2.08333346354167005198e-11, 7999999000.00012450023},
};

double rel(double got, double want) { return std::fabs(got / want - 1.0); }

}  // namespace

TEST(Special, LanczosGamma) {
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.5, 3.7, 10.0, 25.5, 100.0}) EXPECT_LT(rel(lanczos_gamma(x), std::tgamma(x)), 1e-12) << x;
  EXPECT_LT(rel(lanczos_gamma(0.5), std::sqrt(std::numbers::pi)), 1e-13);
}

TEST(Special, BesselReferenceValues) {
  for (const auto& r : kRefs) {
    EXPECT_LT(rel(bessel_I(r.a, r.z), r.I), 1e-10) << "I a=" << r.a << " z=" << r.z;
    EXPECT_LT(rel(bessel_K(r.a, r.z), r.K), 1e-10) << "K a=" << r.a << " z=" << r.z;
    EXPECT_NEAR(log_bessel_I(r.a, r.z), std::log(r.I), 1e-10 * std::max(1.0, std::fabs(std::log(r.I))));
    EXPECT_NEAR(log_bessel_K(r.a, r.z), std::log(r.K), 1e-10 * std::max(1.0, std::fabs(std::log(r.K))));
  }
}

TEST(Special, HalfOrderClosedForms) {
  EXPECT_LT(rel(bessel_I(0.5, 1.0), 0.937674888245487646717), 1e-10);
  EXPECT_LT(rel(bessel_K(0.5, 2.0), 0.119937771968061447368), 1e-10);
  for (double z = 1e-3; z <= 50.0; z *= 1.17) {
    const double i_half = std::sqrt(2.0 / (std::numbers::pi * z)) * std::sinh(z);
    const double k_half = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
    EXPECT_LT(rel(bessel_I(0.5, z), i_half), 1e-10) << z;
    EXPECT_LT(rel(bessel_K(0.5, z), k_half), 1e-10) << z;
  }
}

TEST(Special, SmallArgumentAndErrors) {
  EXPECT_LT(rel(bessel_I(0.0, 1e-3), 1.00000025000001562500), 1e-14);
  EXPECT_THROW(bessel_I(0.5, 0.0), std::domain_error);
  EXPECT_THROW(bessel_K(-1.0, 1.0), std::domain_error);
}

TEST(Special, ContinuousAcrossTheSwitch) {
  for (double a : {0.0, 0.5, 1.0, 2.5, 4.0}) {
    const double z = bessel_switch(a);
    // The true change over this gap is below 1e-11, far inside the tolerance.
    EXPECT_LT(rel(bessel_I(a, z * (1 - 1e-13)), bessel_I(a, z * (1 + 1e-13))), 1e-10) << a;
    EXPECT_LT(rel(bessel_K(a, z * (1 - 1e-13)), bessel_K(a, z * (1 + 1e-13))), 1e-10) << a;
  }
}

TEST(BesqTransition, ExponentialFromZero) {
  std::vector<double> x;
  for (int i = 0; i < 100000; ++i) x.push_back(besq_transition_sample(BesqParams{2.0}, 0.0, 1.0, stream_key(1, StreamTag::Bessel, i)));
  const auto s = summarize(x);
  EXPECT_NEAR(s.mean, 2.0, 3.0 * s.stderr_);
  EXPECT_NEAR(s.sd, 2.0, 0.05);
}

TEST(BesqTransition, MeanIdentity) {
  std::vector<double> x;
  for (int i = 0; i < 100000; ++i) x.push_back(besq_transition_sample(BesqParams{3.0}, 1.0, 0.5, stream_key(2, StreamTag::Bessel, i)));
  const auto s = summarize(x);
  EXPECT_NEAR(s.mean, 2.5, 3.0 * s.stderr_);
}

TEST(BesqTransition, Semigroup) {
  const BesqParams p{3.0};
  std::vector<double> two_step, one_step;
  for (int i = 0; i < 10000; ++i) {
    const double mid = besq_transition_sample(p, 1.0, 0.5, stream_key(3, StreamTag::Bessel, i));
    two_step.push_back(besq_transition_sample(p, mid, 0.7, stream_key(4, StreamTag::Bessel, i)));
    one_step.push_back(besq_transition_sample(p, 1.0, 1.2, stream_key(5, StreamTag::Bessel, i)));
  }
  EXPECT_GT(ks_two_sample(two_step, one_step).p_value, 0.01);
}

TEST(BesqTransition, Errors) {
  EXPECT_THROW(besq_transition_sample(BesqParams{0.0}, 1.0, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(besq_transition_sample(BesqParams{3.0}, 1.0, 0.0, 1), std::invalid_argument);
  EXPECT_DOUBLE_EQ(BesqParams::from_index(0.5).delta, 3.0);
  EXPECT_DOUBLE_EQ(BesqParams{3.0}.a(), 0.5);
}

TEST(BesqPath, GridAndDeterminism) {
  const auto g = geometric_grid(0.01, 100.0, 41);
  ASSERT_EQ(g.size(), 41u);
  EXPECT_DOUBLE_EQ(g.front(), 0.01);
  EXPECT_DOUBLE_EQ(g.back(), 100.0);
  for (std::size_t k = 2; k < g.size(); ++k) EXPECT_NEAR(g[k] / g[k - 1], g[1] / g[0], 1e-12);
  const auto a = besq_path_on_grid(BesqParams{3.0}, 0.0, g, 8);
  const auto b = besq_path_on_grid(BesqParams{3.0}, 0.0, g, 8);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.times.front(), 0.0);
  EXPECT_EQ(a.values.front(), 0.0);
  for (double v : a.values) EXPECT_GE(v, 0.0);
}

TEST(Laplace, ReferenceValues) {
  // delta = 3: E e^{-l S_1} = z / sinh z and E e^{-l U_1} = e^{-z}, z = sqrt(2 l).
  const BesqParams p{3.0};
  const double lam[] = {0.5, 1.0, 2.0};
  const double s1[] = {0.850918128239321545133, 0.730834483939939720671, 0.551441129543566415517};
  const double u1[] = {0.367879441171442321596, 0.243116734434214210805, 0.135335283236612691894};
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(rel(laplace_S1(p, lam[i]), s1[i]), 1e-12);
    EXPECT_LT(rel(laplace_U1(p, lam[i]), u1[i]), 1e-12);
  }
}

TEST(Laplace, MassAndMonotone) {
  for (double d : {2.0, 3.0, 4.5}) {
    const BesqParams p{d};
    EXPECT_NEAR(laplace_S1(p, 1e-10), 1.0, 1e-8);
    EXPECT_GT(laplace_S1(p, 1.0), laplace_S1(p, 2.0));
    if (p.a() > 0.0) {
      EXPECT_NEAR(laplace_U1(p, 1e-10), 1.0, 1e-4);
      EXPECT_GT(laplace_U1(p, 1.0), laplace_U1(p, 2.0));
    }
  }
  EXPECT_THROW(laplace_S1(BesqParams{3.0}, 0.0), std::domain_error);
  EXPECT_THROW(laplace_U1(BesqParams{2.0}, 1.0), std::domain_error);
}

TEST(Spectral, MatchesImageSeriesCdf) {
  const auto s = sample_S1_spectral(BesqParams{3.0}, 100000, 4);
  const Ecdf e(s);
  double worst = 0.0;
  for (double x = 0.02; x < 2.0; x += 0.01) worst = std::max(worst, std::fabs(e.cdf(x) - besq3_first_passage_cdf(x)));
  EXPECT_LT(worst, 1.63 / std::sqrt(100000.0));
  // E S_1 = 1 / delta.
  const auto sum = summarize(s);
  EXPECT_NEAR(sum.mean, 1.0 / 3.0, 3.0 * sum.stderr_);
}

TEST(Spectral, LaplaceAgreement) {
  for (double d : {2.0, 3.0, 5.0}) {
    const BesqParams p{d};
    const auto s = sample_S1_spectral(p, 50000, 6);
    for (double l : {0.5, 1.0, 2.0}) {
      std::vector<double> e;
      for (double v : s) e.push_back(std::exp(-l * v));
      const auto sum = summarize(e);
      EXPECT_NEAR(sum.mean, laplace_S1(p, l), 3.0 * sum.stderr_) << d << " " << l;
    }
  }
}

TEST(ExactU1, LaplaceAgreement) {
  for (double d : {3.0, 4.0}) {
    const BesqParams p{d};
    const auto u = sample_U1_exact(p, 50000, 7);
    for (double l : {0.5, 1.0, 2.0}) {
      std::vector<double> e;
      for (double v : u) e.push_back(std::exp(-l * v));
      const auto sum = summarize(e);
      EXPECT_NEAR(sum.mean, laplace_U1(p, l), 3.0 * sum.stderr_) << d << " " << l;
    }
  }
  EXPECT_THROW(sample_U1_exact(BesqParams{2.0}, 1, 1), std::invalid_argument);
}

TEST(FirstPassageCdf, ImageAndEigenSeriesAgree) {
  // The two expansions switch at s = 1; the CDF is continuous and increasing.
  EXPECT_NEAR(besq3_first_passage_cdf(1.0 - 1e-9), besq3_first_passage_cdf(1.0 + 1e-9), 1e-8);
  double prev = 0.0;
  for (double s = 0.01; s < 5.0; s += 0.01) {
    const double c = besq3_first_passage_cdf(s);
    EXPECT_GE(c, prev);
    EXPECT_LE(c, 1.0);
    prev = c;
  }
}

TEST(GruetShi, Shape) {
  EXPECT_DOUBLE_EQ(gruet_shi_shape(BesqParams{2.0}, 0.5), std::exp(-1.0));
  EXPECT_LT(rel(gruet_shi_shape(BesqParams{3.0}, 0.5), 0.520260095022888896358), 1e-14);
  EXPECT_THROW(gruet_shi_shape(BesqParams{3.0}, 2.5), std::domain_error);
  EXPECT_THROW(gruet_shi_shape(BesqParams{3.0}, 0.0), std::domain_error);
}

TEST(GruetShi, FitIsFiniteAndCoversTheEmpirical) {
  const BesqParams p{3.0};
  const std::vector<double> grid = {0.1, 0.2, 0.5, 1.0, 1.5, 2.0};
  const auto fit = fit_gruet_shi_constant(p, sample_S1_spectral(p, 20000, 9), grid);
  EXPECT_TRUE(std::isfinite(fit.K));
  EXPECT_GE(fit.K, 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_LE(fit.empirical[i], fit.K * fit.shape[i] * (1 + 1e-12));
    EXPECT_GE(fit.empirical[i], fit.shape[i] / fit.K * (1 - 1e-12));
  }
}
