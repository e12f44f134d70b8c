#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pssmp/rng.hpp"
#include "pssmp/stats.hpp"

using namespace pssmp;

TEST(CounterRng, SameKeySameStream) {
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
  }
}

TEST(CounterRng, StreamsDifferByTagAndReplica) {
  EXPECT_NE(stream_key(1, StreamTag::Levy, 0), stream_key(1, StreamTag::Bessel, 0));
  EXPECT_NE(stream_key(1, StreamTag::Levy, 0), stream_key(1, StreamTag::Levy, 1));
  EXPECT_NE(stream_key(1, StreamTag::Levy, 0), stream_key(2, StreamTag::Levy, 0));
}

TEST(CounterRng, UniformInOpenInterval) {
  CounterRng r(7);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(CounterRng, GammaAndPoissonMoments) {
  CounterRng r(11);
  const int n = 100000;
  for (double shape : {0.3, 1.0, 2.5, 40.0}) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.gamma(shape);
    EXPECT_NEAR(s / n, shape, 4.0 * std::sqrt(shape / n)) << shape;
  }
  for (double mean : {0.5, 5.0, 30.0, 400.0}) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(r.poisson(mean));
    EXPECT_NEAR(s / n, mean, 4.0 * std::sqrt(mean / n)) << mean;
  }
}

TEST(KsTwoSample, IdenticalSamples) {
  const std::vector<double> a = {0.3, 1.2, 2.5, 4.0, 7.7};
  const auto r = ks_two_sample(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(KsTwoSample, DisjointSupports) {
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(i);
    b.push_back(100 + i);
  }
  EXPECT_EQ(ks_two_sample(a, b).statistic, 1.0);
}

// Brute force over the 6 ways of labelling {1,2,3,4} into two pairs: only
// {1,2}|{3,4} and {3,4}|{1,2} reach D = 1, so P(D >= 1) = 2/6.
TEST(KsTwoSample, ExactPermutationPValue) {
  const auto r = ks_two_sample({1.0, 2.0}, {3.0, 4.0});
  EXPECT_EQ(r.statistic, 1.0);
  EXPECT_TRUE(r.exact);
  EXPECT_NEAR(r.p_value, 1.0 / 3.0, 1e-12);
}

TEST(KsTwoSample, ExactAgreesWithEnumeration) {
  // All C(8,4) = 70 splits of 8 ranks, D for each, compared with the lattice count.
  const std::size_t n = 4, m = 4;
  std::vector<int> mask(8, 0);
  std::fill(mask.begin() + 4, mask.end(), 1);
  std::vector<double> ds;
  do {
    int ca = 0, cb = 0;
    double d = 0.0;
    for (int k = 0; k < 8; ++k) {
      (mask[k] ? cb : ca)++;
      d = std::max(d, std::fabs(ca / 4.0 - cb / 4.0));
    }
    ds.push_back(d);
  } while (std::next_permutation(mask.begin(), mask.end()));
  for (double d : {0.25, 0.5, 0.75, 1.0}) {
    const double count = static_cast<double>(std::count_if(ds.begin(), ds.end(), [&](double x) { return x >= d - 1e-12; }));
    EXPECT_NEAR(ks_exact_pvalue(d, n, m), count / ds.size(), 1e-12) << d;
  }
}

TEST(KsTwoSample, NullCalibration) {
  // Rejection rate at level 0.01 under the null, 10^4 trials of 100 vs 120 uniforms.
  const int trials = 10000;
  int rejected = 0;
  for (int t = 0; t < trials; ++t) {
    CounterRng r(stream_key(2024, StreamTag::Harness, t));
    std::vector<double> a(100), b(120);
    for (auto& x : a) x = r.uniform();
    for (auto& x : b) x = r.uniform();
    if (ks_two_sample(a, b).p_value < 0.01) ++rejected;
  }
  const double rate = static_cast<double>(rejected) / trials;
  EXPECT_GE(rate, 0.003);
  EXPECT_LE(rate, 0.03);
}

TEST(KsTwoSample, RejectsEmpty) { EXPECT_THROW(ks_two_sample({}, {1.0}), std::invalid_argument); }

TEST(Kolmogorov, SurvivalValues) {
  EXPECT_NEAR(kolmogorov_q(1.3580986393), 0.05, 1e-6);
  EXPECT_NEAR(kolmogorov_q(1.6276236115), 0.01, 1e-6);
  EXPECT_DOUBLE_EQ(kolmogorov_q(0.0), 1.0);
}

TEST(Ecdf, RightContinuousStep) {
  const Ecdf e({3.0, 1.0, 2.0, 2.0});
  EXPECT_DOUBLE_EQ(e.cdf(0.5), 0.0);
  EXPECT_DOUBLE_EQ(e.cdf(1.0), 0.25);
  EXPECT_DOUBLE_EQ(e.cdf_strict(2.0), 0.25);
  EXPECT_DOUBLE_EQ(e.cdf(2.0), 0.75);
  EXPECT_DOUBLE_EQ(e.cdf(10.0), 1.0);
}

TEST(Ecdf, QuantilesMonotone) {
  CounterRng r(5);
  std::vector<double> x(1000);
  for (auto& v : x) v = r.normal();
  const Ecdf e(x);
  double prev = -INFINITY;
  for (int i = 1; i < 100; ++i) {
    const double q = e.quantile(i / 100.0);
    EXPECT_GE(q, prev);
    prev = q;
  }
}

TEST(Summary, MedianIqrMean) {
  EXPECT_DOUBLE_EQ(median({5.0, 1.0, 3.0}), 3.0);
  EXPECT_DOUBLE_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_DOUBLE_EQ(iqr({1.0, 2.0, 3.0, 4.0, 5.0}), 2.0);
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.sd, std::sqrt(5.0 / 3.0), 1e-15);
}
